#pragma once

// Marshall-Olkin bivariate exponential (MO-BVE) kernel.
//
// The law of a pair (X1, X2) of service times killed by three independent
// exponential shock clocks: rate mu1 kills only server 1, mu2 kills only
// server 2, mu12 kills both at once. The joint distribution has exponential
// marginals, survival function exp(-(mu1*x + mu2*y + mu12*max(x,y))), and a
// singular component on the diagonal X1 = X2 carrying probability
// mu12/(mu1+mu2+mu12).

#include "modq/rng.hpp"

namespace modq {

struct MOParams {
    double mu1 = 0.0;   // rate of the shock killing only server 1
    double mu2 = 0.0;   // rate of the shock killing only server 2
    double mu12 = 0.0;  // rate of the common shock killing both

    // Rates must be nonnegative and each marginal a proper exponential
    // (mu_i + mu12 > 0). Throws std::invalid_argument.
    void validate() const;
};

struct MOProperties {
    double marginal_rate_1;  // mu1 + mu12
    double marginal_rate_2;  // mu2 + mu12
    double min_rate;         // rate of min(X1,X2) = mu1 + mu2 + mu12
    double p_equal;          // P(X1 = X2) = mu12 / min_rate
    double correlation;      // corr(X1,X2), equals p_equal for this law
    double p_x_less_y;       // P(X1 < X2) = mu1 / min_rate
};

// One draw from the shock model. common_shock is true iff the common clock
// fired first, in which case x1 == x2 bit-exactly.
struct ServicePair {
    double x1;
    double x2;
    bool common_shock;
};

enum class ServerId { Server1 = 1, Server2 = 2 };

// The joint density lives on two different reference measures: area off the
// diagonal, length along it. Values on the two supports are not comparable
// and must never be mixed, hence the tag.
enum class DensitySupport { OffDiagonal, Diagonal };

struct DensityValue {
    double value;
    DensitySupport support;
};

// P(X1 > x, X2 > y). Throws std::domain_error for negative arguments.
double survival(const MOParams& mo, double x, double y);

// Joint density at (x, y), x,y > 0. Off the diagonal this is the absolutely
// continuous part (derived from the survival function); at x == y it is the
// one-dimensional diagonal density mu12 * exp(-(mu1+mu2+mu12) x).
DensityValue density(const MOParams& mo, double x, double y);

MOProperties derived_properties(const MOParams& mo);

// Conditional density of the other server's time at y, given that server
// `given` finished at `at` (absolutely continuous region only, y != at; the
// diagonal carries a conditional atom which is not a density).
double conditional_density(const MOParams& mo, ServerId given, double at, double y);

// Exact sampler via the three shock clocks. Draw order is T1, T2, T12, so
// output is deterministic given the stream state.
ServicePair sample(const MOParams& mo, RandomStream& rng);

}  // namespace modq
