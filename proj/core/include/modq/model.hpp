#pragma once

#include "modq/mo_bve.hpp"

namespace modq {

// Full specification of one M/M_D/2 instance: Poisson arrival rate, the
// routing probability p for an arrival to the empty system (server 1 with
// probability p, server 2 with q = 1-p), and the MO-BVE service law.
struct ModelParams {
    double lambda = 0.0;
    double p = 0.5;
    MOParams mo;

    void validate() const;
};

}  // namespace modq
