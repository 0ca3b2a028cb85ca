#pragma once

// Closed-form stationary distributions and moments of the M/M_D/2 queue:
// the heterogeneous solution, its homogeneous (mu1 == mu2) reduction, the
// bulk-service M/M^2/1 limit, and the independent-server reference model the
// dependent solutions collapse to as mu12 -> 0.
//
// Every solution has a geometric tail pi_k = C * r^k (k >= 2) where r is the
// root in (0,1) of  mu12 r^2 + (mu1+mu2+mu12) r - lambda = 0.  Stability is
// lambda < mu1 + mu2 + 2*mu12.

#include <cstddef>
#include <optional>

#include "modq/model.hpp"

namespace modq {

enum class SolutionKind { Heterogeneous, Homogeneous, Bulk };

struct ClosedFormSolution {
    SolutionKind kind = SolutionKind::Heterogeneous;
    double r = 0.0;      // geometric tail ratio, in (0,1)
    double delta = 0.0;  // discriminant (mu1+mu2+mu12)^2 + 4*lambda*mu12
    double rho = 0.0;    // lambda / (mu1 + mu2 + 2*mu12)
    double C = 0.0;      // tail normalizer, pi_k = C r^k for k >= 2
    double pi0 = 0.0;

    // Boundary algebra of the heterogeneous form; B and P_of_r also carry
    // their simplified values in the homogeneous form, and the split of the
    // one-customer level only exists for heterogeneous solutions.
    std::optional<double> A;
    std::optional<double> B;
    std::optional<double> P_of_r;
    std::optional<double> pi_10;
    std::optional<double> pi_01;

    // P(k customers in system). k == 1 is pi_10 + pi_01 for heterogeneous
    // solutions and C*r otherwise; k >= 2 is C*r^k.
    double pi(std::size_t k) const;
};

struct Stability {
    bool stable;
    double rho;
};

struct Moments {
    double el;  // expected customers in system
    double eq;  // expected customers waiting
};

// Independent heterogeneous M/M/2 reference (mu1 > mu2, arrivals to the
// empty system join server 1).
struct ReferenceMM2 {
    double rho0;    // lambda / (mu1 + mu2)
    double c_star;
    double p0;
    double p_10;
    double p_01;
    double p1;      // p_10 + p_01
    double el0;
    double eq0;
};

Stability stability(const ModelParams& model);

// The tail root, computed in the cancellation-free conjugate form
// r = 2*lambda / ((mu1+mu2+mu12) + sqrt(delta)); exact at mu12 == 0 where it
// degenerates to lambda/(mu1+mu2). Throws std::domain_error when unstable.
double tail_root(const MOParams& mo, double lambda);

// Full heterogeneous solution. The result is validated against the balance
// equations at construction; a residual above 1e-8 aborts with diagnostics.
ClosedFormSolution solve_het(const ModelParams& model);

// Homogeneous solution; requires model.mo.mu1 == model.mo.mu2 exactly.
ClosedFormSolution solve_hom(const ModelParams& model);

// Bulk-service M/M^2/1 solution; requires lambda < 2*mu12.
ClosedFormSolution solve_bulk(double lambda, double mu12);

// E[L] = C r/(1-r)^2 and E[Q] = C r^3/(1-r)^2; the geometric tail makes the
// same expressions valid for all three solution kinds.
Moments moments(const ClosedFormSolution& sol);

// Independent-server reference (requires mu1 > mu2 and lambda < mu1 + mu2).
ReferenceMM2 mm2_het_reference(double lambda, double mu1, double mu2);

// Max absolute residual of the stationary balance equations evaluated on a
// closed-form solution. Heterogeneous solutions are checked against the full
// five-equation family, homogeneous/bulk against the merged-state family.
double balance_residual(const ModelParams& model, const ClosedFormSolution& sol);

}  // namespace modq
