#include "modq/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modq {

double ClosedFormSolution::pi(std::size_t k) const {
    if (k == 0) return pi0;
    if (k == 1 && kind == SolutionKind::Heterogeneous) return *pi_10 + *pi_01;
    return C * std::pow(r, static_cast<double>(k));
}

Stability stability(const ModelParams& model) {
    model.validate();
    const double drift_left = model.mo.mu1 + model.mo.mu2 + 2.0 * model.mo.mu12;
    return {model.lambda < drift_left, model.lambda / drift_left};
}

double tail_root(const MOParams& mo, double lambda) {
    mo.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("tail_root: lambda must be > 0");
    const double s = mo.mu1 + mo.mu2 + mo.mu12;
    if (!(lambda < s + mo.mu12))
        throw std::domain_error("tail_root: unstable, requires lambda < mu1 + mu2 + 2*mu12");
    const double delta = s * s + 4.0 * lambda * mo.mu12;
    // Conjugate form of the quadratic root: no subtraction of near-equal
    // quantities, and the mu12 factor cancels so mu12 == 0 needs no branch.
    return 2.0 * lambda / (s + std::sqrt(delta));
}

namespace {

void check_residual(const char* who, const ModelParams& model,
                    const ClosedFormSolution& sol) {
    const double res = balance_residual(model, sol);
    if (!(res < 1e-8)) {
        std::ostringstream msg;
        msg << who << ": balance residual " << res << " exceeds 1e-8 (lambda="
            << model.lambda << " mu1=" << model.mo.mu1 << " mu2=" << model.mo.mu2
            << " mu12=" << model.mo.mu12 << " p=" << model.p << " r=" << sol.r << ")";
        throw std::runtime_error(msg.str());
    }
}

}  // namespace

ClosedFormSolution solve_het(const ModelParams& model) {
    const auto [stable, rho] = stability(model);
    if (!stable)
        throw std::domain_error("solve_het: unstable, requires lambda < mu1 + mu2 + 2*mu12");
    const double lam = model.lambda, p = model.p;
    const double mu1 = model.mo.mu1, mu2 = model.mo.mu2, mu12 = model.mo.mu12;

    ClosedFormSolution sol;
    sol.kind = SolutionKind::Heterogeneous;
    sol.rho = rho;
    const double s = mu1 + mu2 + mu12;
    sol.delta = s * s + 4.0 * lam * mu12;
    const double r = tail_root(model.mo, lam);
    sol.r = r;

    const double A = lam - p * mu1 + mu1 - p * mu12 * (r * r + r + 1.0) + mu12 - mu2 * r;
    const double B = lam - p * mu1 + mu1 + mu12 + p * mu2;
    const double P = lam * mu12 * r + lam * mu12 + lam * mu2 + mu1 * mu12 * p * r * r
                   + mu1 * mu12 * r + mu1 * mu12 + mu1 * mu2 * r + mu1 * mu2
                   + mu12 * mu12 * r + mu12 * mu12 - mu12 * mu2 * p * r * r
                   + mu12 * mu2 - mu2 * mu2 * r;
    sol.A = A;
    sol.B = B;
    sol.P_of_r = P;
    sol.C = 1.0 / (r * P / (lam * B) + r / (1.0 - r));
    sol.pi0 = sol.C * r * P / (lam * B);
    sol.pi_01 = sol.C * r * A / B;
    sol.pi_10 = sol.C * r * (B - A) / B;

    check_residual("solve_het", model, sol);
    return sol;
}

ClosedFormSolution solve_hom(const ModelParams& model) {
    if (model.mo.mu1 != model.mo.mu2)
        throw std::invalid_argument("solve_hom: requires mu1 == mu2 exactly");
    const auto [stable, rho] = stability(model);
    if (!stable)
        throw std::domain_error("solve_hom: unstable, requires lambda < 2*(mu + mu12)");
    const double lam = model.lambda, mu = model.mo.mu1, mu12 = model.mo.mu12;

    ClosedFormSolution sol;
    sol.kind = SolutionKind::Homogeneous;
    sol.rho = rho;
    const double s = 2.0 * mu + mu12;
    sol.delta = s * s + 4.0 * lam * mu12;
    const double r = tail_root(model.mo, lam);
    sol.r = r;

    const double boundary = ((mu + mu12) * r + mu12 * r * r) / lam;
    sol.C = 1.0 / (boundary + r / (1.0 - r));
    sol.pi0 = sol.C * boundary;
    // Simplified boundary algebra of the merged-state form.
    sol.B = lam + mu + mu12;
    sol.P_of_r = (lam + mu + mu12) * (mu12 * (1.0 + r) + mu);

    check_residual("solve_hom", model, sol);
    return sol;
}

ClosedFormSolution solve_bulk(double lambda, double mu12) {
    if (!(lambda > 0.0) || !(mu12 > 0.0))
        throw std::invalid_argument("solve_bulk: lambda and mu12 must be > 0");
    if (!(lambda < 2.0 * mu12))
        throw std::domain_error("solve_bulk: unstable, requires lambda < 2*mu12");

    ClosedFormSolution sol;
    sol.kind = SolutionKind::Bulk;
    sol.rho = lambda / (2.0 * mu12);
    sol.delta = mu12 * mu12 + 4.0 * lambda * mu12;
    sol.r = 2.0 * lambda / (mu12 + std::sqrt(sol.delta));
    sol.C = 1.0 - sol.r;
    sol.pi0 = sol.C;

    const ModelParams as_model{lambda, 0.0, {0.0, 0.0, mu12}};
    check_residual("solve_bulk", as_model, sol);
    return sol;
}

Moments moments(const ClosedFormSolution& sol) {
    const double one_minus = 1.0 - sol.r;
    return {sol.C * sol.r / (one_minus * one_minus),
            sol.C * sol.r * sol.r * sol.r / (one_minus * one_minus)};
}

ReferenceMM2 mm2_het_reference(double lambda, double mu1, double mu2) {
    if (!(mu1 > mu2))
        throw std::invalid_argument("mm2_het_reference: requires mu1 > mu2");
    if (!(lambda > 0.0))
        throw std::invalid_argument("mm2_het_reference: lambda must be > 0");
    if (!(lambda < mu1 + mu2))
        throw std::domain_error("mm2_het_reference: unstable, requires lambda < mu1 + mu2");

    ReferenceMM2 out;
    out.rho0 = lambda / (mu1 + mu2);
    out.c_star = lambda * (lambda + mu2) / ((1.0 + 2.0 * out.rho0) * mu1 * mu2)
               / (1.0 - out.rho0);
    out.p0 = 1.0 / (1.0 + out.c_star);
    out.p_10 = (1.0 + out.rho0) / (1.0 + 2.0 * out.rho0) * lambda / mu1 * out.p0;
    out.p_01 = out.rho0 / (1.0 + 2.0 * out.rho0) * lambda / mu2 * out.p0;
    out.p1 = out.p_10 + out.p_01;
    const double d = (1.0 - out.rho0) * (1.0 - out.rho0);
    out.el0 = out.p1 / d;
    out.eq0 = out.rho0 * out.rho0 * out.p1 / d;
    return out;
}

double balance_residual(const ModelParams& model, const ClosedFormSolution& sol) {
    const double lam = model.lambda;
    const double mu1 = model.mo.mu1, mu2 = model.mo.mu2, mu12 = model.mo.mu12;
    const auto pik = [&](std::size_t k) { return sol.C * std::pow(sol.r, double(k)); };

    double res = 0.0;
    const auto track = [&](double v) { res = std::max(res, std::abs(v)); };

    // Generic interior equations, out to where the tail is negligible.
    std::size_t top = 3;
    while (pik(top) > 1e-18 && top < 200) ++top;

    if (sol.kind == SolutionKind::Heterogeneous) {
        const double p = model.p, q = 1.0 - model.p;
        const double pi0 = sol.pi0, pi10 = *sol.pi_10, pi01 = *sol.pi_01;
        track(-lam * pi0 + (mu1 + mu12) * pi10 + (mu2 + mu12) * pi01 + mu12 * pik(2));
        track(p * lam * pi0 - (lam + mu1 + mu12) * pi10 + mu2 * pik(2) + p * mu12 * pik(3));
        track(q * lam * pi0 - (lam + mu2 + mu12) * pi01 + mu1 * pik(2) + q * mu12 * pik(3));
        track(lam * (pi10 + pi01) - (lam + mu1 + mu2 + mu12) * pik(2)
              + (mu1 + mu2) * pik(3) + mu12 * pik(4));
        for (std::size_t i = 3; i <= top; ++i)
            track(lam * pik(i - 1) - (lam + mu1 + mu2 + mu12) * pik(i)
                  + (mu1 + mu2) * pik(i + 1) + mu12 * pik(i + 2));
    } else {
        // Merged-state equations; with mu == 0 these are the bulk equations.
        const double mu = mu1;
        track(-lam * sol.pi0 + (mu + mu12) * pik(1) + mu12 * pik(2));
        track(lam * sol.pi0 - (lam + mu + mu12) * pik(1) + 2.0 * mu * pik(2) + mu12 * pik(3));
        for (std::size_t i = 2; i <= top; ++i)
            track(lam * pik(i - 1) - (lam + 2.0 * mu + mu12) * pik(i)
                  + 2.0 * mu * pik(i + 1) + mu12 * pik(i + 2));
    }
    return res;
}

}  // namespace modq
