#pragma once

// Finite truncations of the three transition rate matrices (heterogeneous Q,
// homogeneous Q0, bulk Q_b) and a direct numerical solve of pi*Q = 0. The
// truncated solve is the independent oracle against which the closed forms
// in analytic.hpp are checked.

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "modq/model.hpp"

namespace modq {

enum class ChainKind { Heterogeneous, Homogeneous, Bulk };
enum class Truncation { ReflectingAtTop };

// State ordering is frozen: for the heterogeneous chain, index 0 is the
// empty system, 1 is (1,0), 2 is (0,1), and index i >= 3 holds i-1
// customers. Homogeneous and bulk chains use index == customer count.
struct GeneratorMatrix {
    ChainKind kind = ChainKind::Heterogeneous;
    std::size_t dimension = 0;
    Truncation truncation = Truncation::ReflectingAtTop;
    // Nonzero rates only, including diagonals. Keyed (row, col) so iteration
    // order is deterministic.
    std::map<std::pair<std::size_t, std::size_t>, double> entries;

    double rate(std::size_t row, std::size_t col) const;
    std::size_t customers(std::size_t index) const;
    std::string label(std::size_t index) const;  // "0", "(1,0)", "(0,1)", "2", ...
};

// Heterogeneous chain on {0, (1,0), (0,1), 2, 3, ...} truncated to `levels`
// states, reflecting at the top (the top arrival rate is deleted and the
// diagonal adjusted). levels >= 5 so all boundary rows exist.
GeneratorMatrix build_het(const ModelParams& model, std::size_t levels);

// Homogeneous chain (mu1 == mu2 exactly) on {0, 1, 2, ...}; levels >= 4.
GeneratorMatrix build_hom(const ModelParams& model, std::size_t levels);

// Bulk-service M/M^2/1 chain: only two-step-down departures; levels >= 4.
GeneratorMatrix build_bulk(double lambda, double mu12, std::size_t levels);

// Stationary vector of the truncated generator: solves pi*Q = 0 with one
// balance column replaced by the normalization row, then verifies
// ||pi*Q||_inf < 1e-12. Throws std::runtime_error with diagnostics if the
// system is singular or the residual gate fails.
std::vector<double> solve_truncated(const GeneratorMatrix& g);

// Default truncation level: max(60, smallest N with r^N < 1e-14), using the
// analytic tail root. Requires a stable model.
std::size_t default_levels(const ModelParams& model);

// Debug dump, one "row-label,col-label,rate" line per nonzero entry.
void dump_csv(const GeneratorMatrix& g, std::ostream& os);

}  // namespace modq
