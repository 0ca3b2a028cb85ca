#include "modq/chain.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "modq/analytic.hpp"

namespace modq {

void ModelParams::validate() const {
    mo.validate();
    if (!(lambda > 0.0))
        throw std::invalid_argument("ModelParams: lambda must be > 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("ModelParams: p must be in [0,1]");
}

double GeneratorMatrix::rate(std::size_t row, std::size_t col) const {
    auto it = entries.find({row, col});
    return it == entries.end() ? 0.0 : it->second;
}

std::size_t GeneratorMatrix::customers(std::size_t index) const {
    if (kind != ChainKind::Heterogeneous) return index;
    if (index == 0) return 0;
    if (index <= 2) return 1;
    return index - 1;
}

std::string GeneratorMatrix::label(std::size_t index) const {
    if (kind == ChainKind::Heterogeneous) {
        if (index == 1) return "(1,0)";
        if (index == 2) return "(0,1)";
    }
    return std::to_string(customers(index));
}

namespace {

// Inserts off-diagonal rates (dropping zeros and columns past the
// truncation), then closes each row with diagonal = -row sum. Dropping the
// top row's arrival rate this way is exactly the reflecting truncation.
class Builder {
  public:
    Builder(ChainKind kind, std::size_t dim) {
        g_.kind = kind;
        g_.dimension = dim;
    }

    void add(std::size_t row, std::size_t col, double rate) {
        if (col >= g_.dimension || rate == 0.0) return;
        g_.entries[{row, col}] += rate;
    }

    GeneratorMatrix finish() {
        std::vector<double> row_sum(g_.dimension, 0.0);
        for (const auto& [key, rate] : g_.entries) row_sum[key.first] += rate;
        for (std::size_t i = 0; i < g_.dimension; ++i)
            g_.entries[{i, i}] = -row_sum[i];
        return std::move(g_);
    }

  private:
    GeneratorMatrix g_;
};

}  // namespace

GeneratorMatrix build_het(const ModelParams& model, std::size_t levels) {
    model.validate();
    if (levels < 5)
        throw std::invalid_argument("build_het: need levels >= 5 to hold all boundary rows");
    const double lam = model.lambda, p = model.p, q = 1.0 - model.p;
    const double mu1 = model.mo.mu1, mu2 = model.mo.mu2, mu12 = model.mo.mu12;

    Builder b(ChainKind::Heterogeneous, levels);
    b.add(0, 1, p * lam);
    b.add(0, 2, q * lam);
    b.add(1, 0, mu1 + mu12);  // (1,0): service completion at server 1
    b.add(1, 3, lam);
    b.add(2, 0, mu2 + mu12);  // (0,1)
    b.add(2, 3, lam);
    b.add(3, 0, mu12);        // state 2: common shock empties the system
    b.add(3, 1, mu2);         // server-2 completion leaves (1,0)
    b.add(3, 2, mu1);
    b.add(3, 4, lam);
    b.add(4, 1, p * mu12);    // state 3: the survivor is routed by p
    b.add(4, 2, q * mu12);
    b.add(4, 3, mu1 + mu2);
    b.add(4, 5, lam);
    for (std::size_t i = 5; i < levels; ++i) {
        b.add(i, i - 2, mu12);
        b.add(i, i - 1, mu1 + mu2);
        b.add(i, i + 1, lam);
    }
    return b.finish();
}

GeneratorMatrix build_hom(const ModelParams& model, std::size_t levels) {
    model.validate();
    if (model.mo.mu1 != model.mo.mu2)
        throw std::invalid_argument("build_hom: requires mu1 == mu2 exactly");
    if (levels < 4)
        throw std::invalid_argument("build_hom: need levels >= 4");
    const double lam = model.lambda, mu = model.mo.mu1, mu12 = model.mo.mu12;

    Builder b(ChainKind::Homogeneous, levels);
    b.add(0, 1, lam);
    b.add(1, 0, mu + mu12);
    b.add(1, 2, lam);
    for (std::size_t i = 2; i < levels; ++i) {
        b.add(i, i - 2, mu12);
        b.add(i, i - 1, 2.0 * mu);
        b.add(i, i + 1, lam);
    }
    return b.finish();
}

GeneratorMatrix build_bulk(double lambda, double mu12, std::size_t levels) {
    if (!(lambda > 0.0) || !(mu12 > 0.0))
        throw std::invalid_argument("build_bulk: lambda and mu12 must be > 0");
    if (levels < 4)
        throw std::invalid_argument("build_bulk: need levels >= 4");

    Builder b(ChainKind::Bulk, levels);
    b.add(0, 1, lambda);
    b.add(1, 0, mu12);  // partial batch
    b.add(1, 2, lambda);
    for (std::size_t i = 2; i < levels; ++i) {
        b.add(i, i - 2, mu12);  // no single-step-down transitions
        b.add(i, i + 1, lambda);
    }
    return b.finish();
}

std::vector<double> solve_truncated(const GeneratorMatrix& g) {
    const auto n = static_cast<Eigen::Index>(g.dimension);
    if (n < 2) throw std::invalid_argument("solve_truncated: dimension too small");

    // pi*Q = 0 with the last balance column replaced by the normalization
    // row: transpose and solve M^T x = e_n directly.
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(g.entries.size() + g.dimension);
    for (const auto& [key, rate] : g.entries) {
        const auto row = static_cast<Eigen::Index>(key.first);
        const auto col = static_cast<Eigen::Index>(key.second);
        if (col == n - 1) continue;
        trips.emplace_back(col, row, rate);
    }
    for (Eigen::Index i = 0; i < n; ++i) trips.emplace_back(n - 1, i, 1.0);

    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(m);
    lu.factorize(m);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("solve_truncated: singular truncated generator (dim " +
                                 std::to_string(g.dimension) + "): " + lu.lastErrorMessage());

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs[n - 1] = 1.0;
    Eigen::VectorXd x = lu.solve(rhs);

    // Residual gate against the original generator.
    std::vector<double> residual(g.dimension, 0.0);
    double max_rate = 0.0;
    for (const auto& [key, rate] : g.entries) {
        residual[key.second] += x[static_cast<Eigen::Index>(key.first)] * rate;
        max_rate = std::max(max_rate, std::abs(rate));
    }
    double res = 0.0;
    for (double v : residual) res = std::max(res, std::abs(v));
    if (!(res < 1e-12)) {
        std::ostringstream msg;
        msg << "solve_truncated: residual gate failed: ||pi*Q||_inf = " << res
            << " (dim " << g.dimension << ", max |rate| " << max_rate << ")";
        throw std::runtime_error(msg.str());
    }
    return {x.data(), x.data() + n};
}

std::size_t default_levels(const ModelParams& model) {
    const double r = tail_root(model.mo, model.lambda);
    const double needed = std::log(1e-14) / std::log(r);
    return std::max<std::size_t>(60, static_cast<std::size_t>(std::ceil(needed)) + 2);
}

namespace {

// state labels such as (1,0) contain commas and need CSV quoting
std::string csv_field(const std::string& s) {
    return s.find(',') == std::string::npos ? s : '"' + s + '"';
}

}  // namespace

void dump_csv(const GeneratorMatrix& g, std::ostream& os) {
    os << "row,col,rate\n";
    char buf[40];
    for (const auto& [key, rate] : g.entries) {
        std::snprintf(buf, sizeof buf, "%.12g", rate);
        os << csv_field(g.label(key.first)) << ',' << csv_field(g.label(key.second))
           << ',' << buf << '\n';
    }
}

}  // namespace modq
