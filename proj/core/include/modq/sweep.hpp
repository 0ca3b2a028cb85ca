#pragma once

// Equal-load sweeps of E[Q] versus the dependence rate mu12, against the two
// limiting references (independent two-server model and the bulk-service
// single-server model), plus CSV/SVG emission.
//
// The load convention: all models share traffic intensity rho and the same
// mean drift to the left, drift_left (default 15), so lambda = rho*drift_left
// and mu12 ranges over [0, drift_left/2]. Homogeneous sweeps split the
// remaining drift evenly (mu = drift_left/2 - mu12); heterogeneous sweeps
// split it by theta = mu1/mu2 > 1.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace modq {

struct SweepConfig {
    double rho = 0.5;
    double drift_left = 15.0;
    double theta = 1.0;   // mu1/mu2; 1 for homogeneous sweeps
    double p = 1.0;       // empty-system routing used by heterogeneous sweeps
    std::size_t grid_n = 151;
    std::vector<double> grid;  // explicit mu12 grid; empty -> grid_n even points

    std::vector<double> effective_grid() const;
    void validate() const;
};

struct SweepRow {
    double mu12;
    double mu1;
    double mu2;
    double eq_dep;    // E[Q] of the dependent model at this mu12
    double eq_indep;  // E[Q] of the independent reference (mu12 = 0 split)
    double eq_bulk;   // E[Q] of the bulk limit (mu12 = drift_left/2)
    double ratio;     // eq_dep / eq_indep
};

struct RatioSummary {
    double max_ratio;
    double argmax_mu12;
};

// Homogeneous sweep (theta must be 1). The mu12 = drift_left/2 endpoint is
// evaluated through the bulk solution.
std::vector<SweepRow> sweep_hom(const SweepConfig& cfg);

// Heterogeneous sweep, theta > 1.
std::vector<SweepRow> sweep_het(const SweepConfig& cfg);

RatioSummary ratio_summary(const std::vector<SweepRow>& rows);

// Convenience: default homogeneous sweep (drift_left 15, 151-point grid).
RatioSummary ratio_summary(double rho);

enum class EmitFormat { Csv, Svg };

// CSV schema: header exactly "mu12,mu1,mu2,eq_dep,eq_indep,eq_bulk,ratio",
// UTF-8, LF, '.' decimal, %.12g. Byte-deterministic for fixed input.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os);

// Self-contained SVG 1.1 line chart, 800x600: the dependent curve plus the
// two horizontal reference lines (exactly three polyline elements).
void emit_svg(const std::vector<SweepRow>& rows, std::ostream& os);

// Writes to a file; throws std::runtime_error if the path is unwritable.
void emit(const std::vector<SweepRow>& rows, EmitFormat format, const std::string& path);

}  // namespace modq
