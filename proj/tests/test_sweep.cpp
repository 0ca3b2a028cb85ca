#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "modq/analytic.hpp"
#include "modq/sweep.hpp"

using namespace modq;

TEST_CASE("sweep_hom: row identities") {
    SweepConfig cfg;
    cfg.rho = 0.5;
    const auto rows = sweep_hom(cfg);
    REQUIRE(rows.size() == 151);

    for (const auto& row : rows) {
        CHECK(row.mu1 == row.mu2);
        CHECK(row.mu1 + row.mu2 + 2.0 * row.mu12 == doctest::Approx(15.0).epsilon(1e-12));
        // load identity: every row sits at the configured utilization
        const Stability st = stability({7.5, 0.5, {row.mu1, row.mu2, row.mu12}});
        CHECK(st.rho == doctest::Approx(0.5).epsilon(1e-12));
    }
    // mu12 = 0 row is the independent reference itself
    CHECK(rows.front().mu12 == 0.0);
    CHECK(rows.front().ratio == 1.0);
    CHECK(rows.front().eq_dep == rows.front().eq_indep);
    // mu12 = 7.5 endpoint is the bulk limit
    CHECK(rows.back().mu12 == 7.5);
    CHECK(rows.back().eq_dep == rows.back().eq_bulk);
    // the independent reference column carries the known closed form
    CHECK(rows.front().eq_indep ==
          doctest::Approx(2.0 * 0.125 / (1.0 - 0.25)).epsilon(1e-12));
    CHECK(rows.front().eq_bulk == doctest::Approx(0.618033988749895).epsilon(1e-13));
}

TEST_CASE("sweep_hom: ratio anchors at the three loads") {
    // frozen from the closed forms; these match the coarser published
    // approximations 2.9757 / 1.8541 / 1.5454 within 5e-4
    CHECK(ratio_summary(0.1).max_ratio == doctest::Approx(2.975608).epsilon(2e-6));
    CHECK(ratio_summary(0.5).max_ratio == doctest::Approx(1.854102).epsilon(2e-6));
    CHECK(ratio_summary(0.9).max_ratio == doctest::Approx(1.545400).epsilon(2e-6));
    CHECK(ratio_summary(0.5).argmax_mu12 == 7.5);
}

TEST_CASE("sweep_hom: conjectured monotonicity holds on the default grid") {
    for (double rho : {0.1, 0.5, 0.9}) {
        SweepConfig cfg;
        cfg.rho = rho;
        const auto rows = sweep_hom(cfg);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            INFO("rho=", rho, " between mu12=", rows[i - 1].mu12, " and ", rows[i].mu12);
            CHECK(rows[i].eq_dep >= rows[i - 1].eq_dep - 1e-12);
        }
    }
}

TEST_CASE("sweep_het: theta split and limits") {
    SweepConfig cfg;
    cfg.rho = 0.5;
    cfg.theta = 2.0;
    const auto rows = sweep_het(cfg);
    for (const auto& row : rows) {
        CHECK(row.mu1 == doctest::Approx(2.0 * row.mu2).epsilon(1e-12));
        CHECK(row.mu1 + row.mu2 + 2.0 * row.mu12 == doctest::Approx(15.0).epsilon(1e-12));
    }
    // mu12 = 0: dependent solve equals the independent reference formulas
    CHECK(std::abs(rows.front().eq_dep - rows.front().eq_indep) < 1e-9);
}

TEST_CASE("sweep_het: large theta at light load dips below independence") {
    SweepConfig cfg;
    cfg.rho = 0.1;
    cfg.theta = 15.0;
    const auto rows = sweep_het(cfg);
    bool dips = false;
    for (const auto& row : rows)
        if (row.mu12 > 0.0 && row.eq_dep < row.eq_indep) dips = true;
    CHECK(dips);
}

TEST_CASE("sweep_het: high load is monotone and near-linear") {
    SweepConfig cfg;
    cfg.rho = 0.9;
    cfg.theta = 2.0;
    const auto rows = sweep_het(cfg);
    double max_dev = 0.0, max_val = 0.0;
    const double y0 = rows.front().eq_dep, y1 = rows.back().eq_dep;
    const double x0 = rows.front().mu12, x1 = rows.back().mu12;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].eq_dep >= rows[i - 1].eq_dep - 1e-12);
        const double chord = y0 + (y1 - y0) * (rows[i].mu12 - x0) / (x1 - x0);
        max_dev = std::max(max_dev, std::abs(rows[i].eq_dep - chord));
        max_val = std::max(max_val, rows[i].eq_dep);
    }
    CHECK(max_dev / max_val < 0.02);
}

TEST_CASE("sweep: usage errors") {
    SweepConfig cfg;
    cfg.theta = 0.5;
    CHECK_THROWS_AS(sweep_het(cfg), std::invalid_argument);
    cfg.theta = 2.0;
    CHECK_THROWS_AS(sweep_hom(cfg), std::invalid_argument);
    cfg.theta = 1.0;
    cfg.grid = {8.0};  // above drift_left/2
    CHECK_THROWS_AS(sweep_hom(cfg), std::out_of_range);
    cfg.grid.clear();
    cfg.rho = 1.2;
    CHECK_THROWS_AS(sweep_hom(cfg), std::invalid_argument);
}

TEST_CASE("emit_csv: schema, determinism, round trip") {
    SweepConfig cfg;
    cfg.grid_n = 6;
    const auto rows = sweep_hom(cfg);
    std::ostringstream a, b;
    emit_csv(rows, a);
    emit_csv(rows, b);
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "mu12,mu1,mu2,eq_dep,eq_indep,eq_bulk,ratio");
    std::size_t n = 0;
    while (std::getline(in, line)) {
        CHECK(line.find('.') != std::string::npos);  // '.' decimal separator
        // parsing the emitted text reproduces the emitted text: %.12g fixpoint
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12g", std::stod(field));
            CHECK(field == buf);
        }
        ++n;
    }
    CHECK(n == rows.size());
    CHECK(a.str().find('\r') == std::string::npos);  // LF only
}

TEST_CASE("emit_svg: structure and determinism") {
    SweepConfig cfg;
    cfg.rho = 0.5;
    cfg.grid_n = 21;
    const auto rows = sweep_hom(cfg);
    std::ostringstream a, b;
    emit_svg(rows, a);
    emit_svg(rows, b);
    CHECK(a.str() == b.str());
    const std::string svg = a.str();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);

    std::size_t polylines = 0, paths = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
        ++polylines;
    for (std::size_t pos = 0; (pos = svg.find("<path", pos)) != std::string::npos; ++pos)
        ++paths;
    CHECK(polylines == 3);
    CHECK(paths == 0);
}

TEST_CASE("emit: unwritable path raises") {
    SweepConfig cfg;
    cfg.grid_n = 3;
    const auto rows = sweep_hom(cfg);
    CHECK_THROWS_AS(emit(rows, EmitFormat::Csv, "/nonexistent-dir/x.csv"), std::runtime_error);
}
