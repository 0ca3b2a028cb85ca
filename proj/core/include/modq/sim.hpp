#pragma once

// Discrete-event simulator of the M/M_D/2 queue driven by the shock
// replacement process: absolute firing times are kept for the three clocks
// T1, T2, T12, and a clock is redrawn only when its owner restarts (a fresh
// service, or full regeneration after a common shock). In particular the
// common clock is NOT redrawn when the idle server starts against a busy
// one -- its residual is reused; that reuse is the entire service-time
// coupling. FCFS, infinite waiting room.

#include <cstdint>
#include <ostream>
#include <vector>

#include "modq/model.hpp"

namespace modq {

struct SimConfig {
    ModelParams model;
    double horizon = 0.0;       // simulated time per replication
    double warmup = -1.0;       // negative: defaults to horizon/10
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    // service discipline is FCFS; no alternative is implemented

    void validate() const;
    double effective_warmup() const { return warmup < 0.0 ? 0.1 * horizon : warmup; }
};

struct Estimate {
    double mean = 0.0;
    double halfwidth = 0.0;  // 99% Student-t over replication means; 0 for one rep
};

struct SimEstimate {
    Estimate pi0, pi_10, pi_01;  // boundary-state time fractions
    Estimate el, eq;             // customers in system / waiting
    // Mean time fraction with n customers; index n, defined for n >= 2
    // (boundary states carry the n <= 1 mass).
    std::vector<double> pi_n;
    std::uint64_t common_departures = 0;  // simultaneous two-customer departures
    std::uint64_t single_departures = 0;

    // Diagnostics, pooled over replications.
    double time_in_state2 = 0.0;
    std::uint64_t from2_to_empty = 0, from2_to_10 = 0, from2_to_01 = 0, from2_up = 0;
    double time_ge2 = 0.0;        // time with both servers busy
    std::uint64_t exits_ge2 = 0;  // events leaving a state with n >= 2
    // Arrival-observed state fractions (PASTA check): same state layout as
    // the chain module, index 0 -> empty, 1 -> (1,0), 2 -> (0,1), i -> i-1
    // customers.
    std::vector<double> arrival_seen;
    std::uint64_t arrivals = 0;
};

// One replication, seeded from config.seed. If `trace` is given, up to
// `trace_cap` events are written as CSV (time,event,state_before,state_after).
SimEstimate simulate(const SimConfig& config, std::ostream* trace = nullptr,
                     std::size_t trace_cap = 10000);

// Independent replications on split streams (config.replications >= 2), with
// 99% Student-t halfwidths over replication means. Deterministic for a given
// seed regardless of thread count; threads == 0 picks hardware concurrency.
SimEstimate replicate(const SimConfig& config, unsigned threads = 0);

}  // namespace modq
