#include "modq/mo_bve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modq {

void MOParams::validate() const {
    if (!(mu1 >= 0.0) || !(mu2 >= 0.0) || !(mu12 >= 0.0))
        throw std::invalid_argument("MOParams: shock rates must be nonnegative");
    if (!(mu1 + mu12 > 0.0) || !(mu2 + mu12 > 0.0))
        throw std::invalid_argument("MOParams: each marginal needs mu_i + mu12 > 0");
}

double survival(const MOParams& mo, double x, double y) {
    mo.validate();
    if (!(x >= 0.0) || !(y >= 0.0))
        throw std::domain_error("survival: x and y must be >= 0");
    return std::exp(-(mo.mu1 * x + mo.mu2 * y + mo.mu12 * std::max(x, y)));
}

DensityValue density(const MOParams& mo, double x, double y) {
    mo.validate();
    if (!(x > 0.0) || !(y > 0.0))
        throw std::domain_error("density: x and y must be > 0");
    if (x == y)
        return {mo.mu12 * survival(mo, x, x), DensitySupport::Diagonal};
    // Absolutely continuous part, written through the survival function so
    // the exponent comes from one place only.
    const double factor = (y < x) ? mo.mu2 * (mo.mu1 + mo.mu12)
                                  : mo.mu1 * (mo.mu2 + mo.mu12);
    return {factor * survival(mo, x, y), DensitySupport::OffDiagonal};
}

MOProperties derived_properties(const MOParams& mo) {
    mo.validate();
    const double min_rate = mo.mu1 + mo.mu2 + mo.mu12;
    MOProperties out;
    out.marginal_rate_1 = mo.mu1 + mo.mu12;
    out.marginal_rate_2 = mo.mu2 + mo.mu12;
    out.min_rate = min_rate;
    out.p_equal = mo.mu12 / min_rate;
    out.correlation = mo.mu12 / min_rate;
    out.p_x_less_y = mo.mu1 / min_rate;
    return out;
}

double conditional_density(const MOParams& mo, ServerId given, double at, double y) {
    mo.validate();
    if (!(at > 0.0) || !(y > 0.0))
        throw std::domain_error("conditional_density: times must be > 0");
    if (y == at)
        throw std::domain_error(
            "conditional_density: the diagonal y == at carries an atom, not a density");
    // joint / marginal; the marginal of the conditioning server is
    // Exp(mu_i + mu12).
    const double marginal_rate = (given == ServerId::Server1) ? mo.mu1 + mo.mu12
                                                              : mo.mu2 + mo.mu12;
    const double joint = (given == ServerId::Server1) ? density(mo, at, y).value
                                                      : density(mo, y, at).value;
    return joint / (marginal_rate * std::exp(-marginal_rate * at));
}

ServicePair sample(const MOParams& mo, RandomStream& rng) {
    mo.validate();
    const double t1 = rng.exponential(mo.mu1);
    const double t2 = rng.exponential(mo.mu2);
    const double t12 = rng.exponential(mo.mu12);
    ServicePair out;
    out.common_shock = t12 < t1 && t12 < t2;
    out.x1 = std::min(t1, t12);
    out.x2 = std::min(t2, t12);
    return out;
}

}  // namespace modq
