#include "modq/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "modq/analytic.hpp"

namespace modq {

namespace {

std::string g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void SweepConfig::validate() const {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("SweepConfig: rho must be in (0,1)");
    if (!(drift_left > 0.0))
        throw std::invalid_argument("SweepConfig: drift_left must be > 0");
    if (!(theta >= 1.0))
        throw std::invalid_argument("SweepConfig: theta must be >= 1 (mu1 >= mu2)");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("SweepConfig: p must be in [0,1]");
    if (grid.empty() && grid_n < 2)
        throw std::invalid_argument("SweepConfig: grid_n must be >= 2");
    const double half = drift_left / 2.0;
    for (double v : grid)
        if (!(v >= 0.0 && v <= half))
            throw std::out_of_range("SweepConfig: grid value outside [0, drift_left/2]");
}

std::vector<double> SweepConfig::effective_grid() const {
    if (!grid.empty()) return grid;
    const double half = drift_left / 2.0;
    std::vector<double> g(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i)
        g[i] = half * static_cast<double>(i) / static_cast<double>(grid_n - 1);
    return g;
}

std::vector<SweepRow> sweep_hom(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.theta != 1.0)
        throw std::invalid_argument("sweep_hom: theta must be 1; use sweep_het");
    const double half = cfg.drift_left / 2.0;
    const double lam = cfg.rho * cfg.drift_left;

    // Reference lines: independent homogeneous M/M/2 and the pure-bulk limit,
    // both at the same load.
    const double eq_indep =
        moments(solve_hom({lam, 0.5, {half, half, 0.0}})).eq;
    const double eq_bulk = moments(solve_bulk(lam, half)).eq;

    std::vector<SweepRow> rows;
    for (double mu12 : cfg.effective_grid()) {
        if (!(mu12 >= 0.0 && mu12 <= half))
            throw std::out_of_range("sweep_hom: mu12 outside [0, drift_left/2]");
        const double mu = half - mu12;
        const double eq_dep =
            mu == 0.0 ? eq_bulk : moments(solve_hom({lam, 0.5, {mu, mu, mu12}})).eq;
        rows.push_back({mu12, mu, mu, eq_dep, eq_indep, eq_bulk, eq_dep / eq_indep});
    }
    return rows;
}

std::vector<SweepRow> sweep_het(const SweepConfig& cfg) {
    cfg.validate();
    if (!(cfg.theta > 1.0))
        throw std::invalid_argument("sweep_het: theta must be > 1 (mu1 > mu2)");
    const double half = cfg.drift_left / 2.0;
    const double lam = cfg.rho * cfg.drift_left;

    const double mu2_ref = cfg.drift_left / (cfg.theta + 1.0);
    const double eq_indep = mm2_het_reference(lam, cfg.theta * mu2_ref, mu2_ref).eq0;
    const double eq_bulk = moments(solve_bulk(lam, half)).eq;

    std::vector<SweepRow> rows;
    for (double mu12 : cfg.effective_grid()) {
        if (!(mu12 >= 0.0 && mu12 <= half))
            throw std::out_of_range("sweep_het: mu12 outside [0, drift_left/2]");
        const double mu2 = (cfg.drift_left - 2.0 * mu12) / (cfg.theta + 1.0);
        const double mu1 = cfg.theta * mu2;
        const double eq_dep = moments(solve_het({lam, cfg.p, {mu1, mu2, mu12}})).eq;
        rows.push_back({mu12, mu1, mu2, eq_dep, eq_indep, eq_bulk, eq_dep / eq_indep});
    }
    return rows;
}

RatioSummary ratio_summary(const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("ratio_summary: no rows");
    RatioSummary out{rows.front().ratio, rows.front().mu12};
    for (const auto& row : rows)
        if (row.ratio > out.max_ratio) {
            out.max_ratio = row.ratio;
            out.argmax_mu12 = row.mu12;
        }
    return out;
}

RatioSummary ratio_summary(double rho) {
    SweepConfig cfg;
    cfg.rho = rho;
    return ratio_summary(sweep_hom(cfg));
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << "mu12,mu1,mu2,eq_dep,eq_indep,eq_bulk,ratio\n";
    for (const auto& r : rows)
        os << g12(r.mu12) << ',' << g12(r.mu1) << ',' << g12(r.mu2) << ','
           << g12(r.eq_dep) << ',' << g12(r.eq_indep) << ',' << g12(r.eq_bulk)
           << ',' << g12(r.ratio) << '\n';
}

namespace {

std::string f2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

double nice_step(double range, int target_ticks) {
    const double raw = range / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
    return step * mag;
}

}  // namespace

void emit_svg(const std::vector<SweepRow>& rows, std::ostream& os) {
    if (rows.empty()) throw std::invalid_argument("emit_svg: no rows");
    const double left = 70, right = 780, top = 20, bottom = 550;

    double x_min = rows.front().mu12, x_max = rows.front().mu12, y_max = 0.0;
    for (const auto& r : rows) {
        x_min = std::min(x_min, r.mu12);
        x_max = std::max(x_max, r.mu12);
        y_max = std::max({y_max, r.eq_dep, r.eq_indep, r.eq_bulk});
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;

    const auto sx = [&](double v) { return left + (v - x_min) / (x_max - x_min) * (right - left); };
    const auto sy = [&](double v) { return bottom - v / y_max * (bottom - top); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
          "width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

    // axes + ticks (line/text elements only; series are the only polylines)
    os << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(bottom) << "\" x2=\""
       << f2(right) << "\" y2=\"" << f2(bottom) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(top) << "\" x2=\""
       << f2(left) << "\" y2=\"" << f2(bottom) << "\" stroke=\"black\"/>\n";

    const double xstep = nice_step(x_max - x_min, 6);
    for (double v = std::ceil(x_min / xstep) * xstep; v <= x_max + 1e-12 * xstep; v += xstep) {
        const double x = sx(v);
        os << "<line x1=\"" << f2(x) << "\" y1=\"" << f2(bottom) << "\" x2=\"" << f2(x)
           << "\" y2=\"" << f2(bottom + 5) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << f2(x) << "\" y=\"" << f2(bottom + 20)
           << "\" font-size=\"12\" text-anchor=\"middle\">" << g12(v) << "</text>\n";
    }
    const double ystep = nice_step(y_max, 6);
    for (double v = 0.0; v <= y_max + 1e-12 * ystep; v += ystep) {
        const double y = sy(v);
        os << "<line x1=\"" << f2(left - 5) << "\" y1=\"" << f2(y) << "\" x2=\"" << f2(left)
           << "\" y2=\"" << f2(y) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << f2(left - 8) << "\" y=\"" << f2(y + 4)
           << "\" font-size=\"12\" text-anchor=\"end\">" << g12(v) << "</text>\n";
    }
    os << "<text x=\"" << f2((left + right) / 2) << "\" y=\"585\" font-size=\"13\" "
          "text-anchor=\"middle\">mu12</text>\n";
    os << "<text x=\"16\" y=\"" << f2((top + bottom) / 2)
       << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << f2((top + bottom) / 2) << ")\">E[Q]</text>\n";

    const auto series = [&](const char* color, const char* dash, auto value) {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\"" << dash << " points=\"";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i) os << ' ';
            os << f2(sx(rows[i].mu12)) << ',' << f2(sy(value(rows[i])));
        }
        os << "\"/>\n";
    };
    series("#1f77b4", " stroke-width=\"2\"", [](const SweepRow& r) { return r.eq_dep; });
    series("#2ca02c", " stroke-dasharray=\"6 3\"", [](const SweepRow& r) { return r.eq_indep; });
    series("#d62728", " stroke-dasharray=\"2 3\"", [](const SweepRow& r) { return r.eq_bulk; });

    os << "<text x=\"80\" y=\"36\" font-size=\"12\" fill=\"#1f77b4\">dependent E[Q]</text>\n";
    os << "<text x=\"80\" y=\"52\" font-size=\"12\" fill=\"#2ca02c\">independent reference</text>\n";
    os << "<text x=\"80\" y=\"68\" font-size=\"12\" fill=\"#d62728\">bulk reference</text>\n";
    os << "</svg>\n";
}

void emit(const std::vector<SweepRow>& rows, EmitFormat format, const std::string& path) {
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw std::runtime_error("emit: cannot open for writing: " + path);
    if (format == EmitFormat::Csv)
        emit_csv(rows, ofs);
    else
        emit_svg(rows, ofs);
    ofs.flush();
    if (!ofs.good()) throw std::runtime_error("emit: write failed: " + path);
}

}  // namespace modq
