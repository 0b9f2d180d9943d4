#pragma once

#include "adplan/pricing.hpp"

namespace adplan {

struct SolverOptions {
    double tol = 1e-6;       // on objective values
    int grid = 512;          // candidate prices for one-dimensional searches
    int grid2 = 64;          // per-axis grid for (p*, q*) searches
    int polish_iter = 200;   // simplex iterations
    double damping = 0.5;    // fixed-point update weight on the new partials
    int max_iter = 200;      // fixed-point iterations
    int threads = 1;
    PricingOptions pricing;
};

}  // namespace adplan
