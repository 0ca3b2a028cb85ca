#include "modq/sim.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "modq/rng.hpp"

namespace modq {

void SimConfig::validate() const {
    model.validate();
    if (!(horizon > 0.0))
        throw std::invalid_argument("SimConfig: horizon must be > 0");
    if (warmup >= horizon)
        throw std::invalid_argument("SimConfig: need horizon > warmup");
    if (replications < 1)
        throw std::invalid_argument("SimConfig: replications must be >= 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RepStats {
    double t0 = 0, t10 = 0, t01 = 0;   // dwell time in the boundary states
    std::vector<double> tn;            // dwell time with n >= 2 customers
    double area_l = 0, area_q = 0;     // time integrals of L and (L-2)^+
    std::uint64_t common = 0, single = 0;
    double time2 = 0;
    std::uint64_t f2_empty = 0, f2_10 = 0, f2_01 = 0, f2_up = 0;
    double tge2 = 0;
    std::uint64_t exits_ge2 = 0;
    std::uint64_t arrivals = 0;
    std::vector<std::uint64_t> arr_seen;  // unified state index
};

struct Tracer {
    std::ostream* os = nullptr;
    std::size_t cap = 0;
    std::size_t written = 0;

    void emit(double t, const char* kind, const std::string& before,
              const std::string& after) {
        if (os == nullptr || written >= cap) return;
        if (written == 0) *os << "time,event,state_before,state_after\n";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", t);
        *os << buf << ',' << kind << ',' << quoted(before) << ',' << quoted(after)
            << '\n';
        ++written;
    }

    // the one-customer labels (1,0) and (0,1) contain commas
    static std::string quoted(const std::string& s) {
        return s.find(',') == std::string::npos ? s : '"' + s + '"';
    }
};

std::string state_name(long n, bool busy1) {
    if (n == 1) return busy1 ? "(1,0)" : "(0,1)";
    return std::to_string(n);
}

std::size_t unified_index(long n, bool busy1) {
    if (n == 0) return 0;
    if (n == 1) return busy1 ? 1 : 2;
    return static_cast<std::size_t>(n) + 1;
}

RepStats run_one(const ModelParams& m, double horizon, double warmup,
                 RandomStream rng, Tracer tracer = {}) {
    const double lam = m.lambda;
    const double mu1 = m.mo.mu1, mu2 = m.mo.mu2, mu12 = m.mo.mu12;

    RepStats st;
    st.tn.resize(16, 0.0);
    st.arr_seen.resize(16, 0);

    double now = 0.0;
    long n = 0;
    bool busy1 = false, busy2 = false;
    double next_arrival = rng.exponential(lam);
    double t1 = kInf, t2 = kInf, t12 = kInf;

    const auto account = [&](double upto) {
        // dwell in the current state over (now, upto), clipped to the window
        const double a = std::max(now, warmup), b = std::min(upto, horizon);
        const double dt = b - a;
        if (dt <= 0.0) return;
        if (n == 0) st.t0 += dt;
        else if (n == 1) (busy1 ? st.t10 : st.t01) += dt;
        else {
            if (static_cast<std::size_t>(n) >= st.tn.size()) st.tn.resize(n + 1, 0.0);
            st.tn[static_cast<std::size_t>(n)] += dt;
            if (n == 2) st.time2 += dt;
            st.tge2 += dt;
        }
        st.area_l += dt * static_cast<double>(n);
        if (n > 2) st.area_q += dt * static_cast<double>(n - 2);
    };

    while (true) {
        const double evt = std::min(std::min(next_arrival, t12), std::min(t1, t2));
        if (evt >= horizon) {
            account(horizon);
            break;
        }
        account(evt);
        const bool in_window = evt > warmup;
        const long n_before = n;
        const bool busy1_before = busy1;
        const std::string before =
            tracer.os != nullptr ? state_name(n, busy1) : std::string();
        const char* kind = "";
        now = evt;

        if (next_arrival <= evt) {
            // --- arrival
            kind = "arrival";
            if (in_window) {
                ++st.arrivals;
                const std::size_t idx = unified_index(n, busy1);
                if (idx >= st.arr_seen.size()) st.arr_seen.resize(idx + 1, 0);
                ++st.arr_seen[idx];
            }
            ++n;
            if (n == 1) {
                // fresh service and a fresh common clock for the new busy period
                if (rng.bernoulli(m.p)) {
                    busy1 = true;
                    t1 = now + rng.exponential(mu1);
                } else {
                    busy2 = true;
                    t2 = now + rng.exponential(mu2);
                }
                t12 = now + rng.exponential(mu12);
            } else if (n == 2) {
                // the idle server starts against the RESIDUAL common clock
                if (!busy1) {
                    busy1 = true;
                    t1 = now + rng.exponential(mu1);
                } else {
                    busy2 = true;
                    t2 = now + rng.exponential(mu2);
                }
            }
            next_arrival = now + rng.exponential(lam);
        } else if (t12 <= std::min(t1, t2)) {
            // --- common clock fires
            if (busy1 && busy2) {
                kind = "common";
                n -= 2;
                if (in_window) ++st.common;
                if (n >= 2) {
                    // regeneration: two waiting customers start on a fresh triple
                    t1 = now + rng.exponential(mu1);
                    t2 = now + rng.exponential(mu2);
                    t12 = now + rng.exponential(mu12);
                } else if (n == 1) {
                    // lone survivor routed by p, fresh service + common clock
                    if (rng.bernoulli(m.p)) {
                        busy1 = true;
                        busy2 = false;
                        t1 = now + rng.exponential(mu1);
                        t2 = kInf;
                    } else {
                        busy1 = false;
                        busy2 = true;
                        t2 = now + rng.exponential(mu2);
                        t1 = kInf;
                    }
                    t12 = now + rng.exponential(mu12);
                } else {
                    busy1 = busy2 = false;
                    t1 = t2 = t12 = kInf;
                }
            } else {
                // single busy server: its service time was min(T_i, T12)
                kind = busy1 ? "single1" : "single2";
                n -= 1;
                if (in_window) ++st.single;
                busy1 = busy2 = false;
                t1 = t2 = t12 = kInf;
            }
        } else if (t1 <= t2) {
            // --- type-1 shock completes server 1 only
            kind = "single1";
            n -= 1;
            if (in_window) ++st.single;
            if (n >= 2) {
                t1 = now + rng.exponential(mu1);  // head of queue starts
            } else if (n == 1) {
                busy1 = false;
                t1 = kInf;  // server 2 keeps its clocks
            } else {
                busy1 = busy2 = false;
                t1 = t2 = t12 = kInf;
            }
        } else {
            // --- type-2 shock completes server 2 only
            kind = "single2";
            n -= 1;
            if (in_window) ++st.single;
            if (n >= 2) {
                t2 = now + rng.exponential(mu2);
            } else if (n == 1) {
                busy2 = false;
                t2 = kInf;
            } else {
                busy1 = busy2 = false;
                t1 = t2 = t12 = kInf;
            }
        }

        assert(n >= 0);
        assert(n - n_before == 1 || n - n_before == -1 || n - n_before == -2);
        assert((n == 0 && !busy1 && !busy2) || (n == 1 && (busy1 != busy2)) ||
               (n >= 2 && busy1 && busy2));

        if (in_window && n_before >= 2) {
            ++st.exits_ge2;
            if (n_before == 2) {
                if (n == 3) ++st.f2_up;
                else if (n == 0) ++st.f2_empty;
                else if (busy1) ++st.f2_10;
                else ++st.f2_01;
            }
        }
        if (tracer.os != nullptr)
            tracer.emit(now, kind, before, state_name(n, busy1));
        (void)busy1_before;
    }
    return st;
}

SimEstimate assemble(const std::vector<RepStats>& reps, double window) {
    const std::size_t rcount = reps.size();
    SimEstimate est;

    const auto summarize = [&](auto per_rep) {
        Estimate e;
        double sum = 0.0;
        for (const auto& s : reps) sum += per_rep(s);
        e.mean = sum / static_cast<double>(rcount);
        if (rcount >= 2) {
            double ss = 0.0;
            for (const auto& s : reps) {
                const double d = per_rep(s) - e.mean;
                ss += d * d;
            }
            const double sd = std::sqrt(ss / static_cast<double>(rcount - 1));
            const boost::math::students_t_distribution<double> t(
                static_cast<double>(rcount - 1));
            e.halfwidth = boost::math::quantile(t, 0.995) * sd /
                          std::sqrt(static_cast<double>(rcount));
        }
        return e;
    };

    est.pi0 = summarize([&](const RepStats& s) { return s.t0 / window; });
    est.pi_10 = summarize([&](const RepStats& s) { return s.t10 / window; });
    est.pi_01 = summarize([&](const RepStats& s) { return s.t01 / window; });
    est.el = summarize([&](const RepStats& s) { return s.area_l / window; });
    est.eq = summarize([&](const RepStats& s) { return s.area_q / window; });

    std::size_t max_n = 0, max_a = 0;
    for (const auto& s : reps) {
        max_n = std::max(max_n, s.tn.size());
        max_a = std::max(max_a, s.arr_seen.size());
    }
    est.pi_n.assign(max_n, 0.0);
    est.arrival_seen.assign(max_a, 0.0);
    for (const auto& s : reps) {
        for (std::size_t i = 0; i < s.tn.size(); ++i)
            est.pi_n[i] += s.tn[i] / window / static_cast<double>(rcount);
        for (std::size_t i = 0; i < s.arr_seen.size(); ++i)
            est.arrival_seen[i] += static_cast<double>(s.arr_seen[i]);
        est.common_departures += s.common;
        est.single_departures += s.single;
        est.time_in_state2 += s.time2;
        est.from2_to_empty += s.f2_empty;
        est.from2_to_10 += s.f2_10;
        est.from2_to_01 += s.f2_01;
        est.from2_up += s.f2_up;
        est.time_ge2 += s.tge2;
        est.exits_ge2 += s.exits_ge2;
        est.arrivals += s.arrivals;
    }
    if (est.arrivals > 0)
        for (auto& v : est.arrival_seen) v /= static_cast<double>(est.arrivals);
    return est;
}

}  // namespace

SimEstimate simulate(const SimConfig& config, std::ostream* trace,
                     std::size_t trace_cap) {
    config.validate();
    const double warmup = config.effective_warmup();
    Tracer tracer{trace, trace == nullptr ? 0 : trace_cap, 0};
    std::vector<RepStats> reps;
    reps.push_back(run_one(config.model, config.horizon, warmup,
                           RandomStream::child(config.seed, 0), tracer));
    return assemble(reps, config.horizon - warmup);
}

SimEstimate replicate(const SimConfig& config, unsigned threads) {
    config.validate();
    if (config.replications < 2)
        throw std::invalid_argument("replicate: need replications >= 2 for intervals");
    const double warmup = config.effective_warmup();
    const std::size_t rcount = config.replications;

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned tcount = threads == 0 ? hw : threads;
    tcount = std::min<unsigned>(tcount, static_cast<unsigned>(rcount));

    std::vector<RepStats> reps(rcount);
    const auto worker = [&](unsigned tid) {
        for (std::size_t i = tid; i < rcount; i += tcount)
            reps[i] = run_one(config.model, config.horizon, warmup,
                              RandomStream::child(config.seed, i));
    };
    if (tcount <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(tcount);
        for (unsigned t = 0; t < tcount; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    return assemble(reps, config.horizon - warmup);
}

}  // namespace modq
