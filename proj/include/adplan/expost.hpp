#pragma once

#include "adplan/cost.hpp"
#include "adplan/distribution.hpp"
#include "adplan/objective.hpp"
#include "adplan/options.hpp"
#include "adplan/plan.hpp"

#include <string>

namespace adplan {

// Pointwise maximiser of a consumer's marginal contribution at target p_star.
class GreedyMap {
public:
    GreedyMap(CostFunction cost, double p_star, Partials partials);

    double p_star() const { return p_star_; }
    const Partials& partials() const { return partials_; }
    // argmax_{y >= x} cs * y + cost * c(x, y)
    double gamma(double x) const;
    // Gamma above p_star. Below it, the better of staying at x and jumping to
    // max(Gamma(x), p_star); ties jump.
    double lambda(double x) const;
    // inf{x >= 0 : lambda(x) >= p_star}
    double lambda_inv_at_pstar() const { return lambda_inv_; }

private:
    CostFunction cost_;
    double p_star_;
    Partials partials_;
    double ratio_;
    double lambda_inv_;
};

GreedyMap locally_greedy_map(const CostFunction& cost, double p_star, const Partials& partials);

// Segments of x -> max(p_star, min(base(x), p_star q_star / survival(x))) on
// [from, support_hi). A stretch where the value equals p_star becomes a
// constant segment; `base_is_identity` writes the base stretch as identity.
std::vector<Segment> capped_top_segments(const Distribution& dist, double from, double p_star,
                                         double q_star, const RealFn& base, bool base_is_identity,
                                         const std::string& base_name,
                                         const std::vector<double>& base_params);

enum class Status { ok, corner, nonconverged, infeasible };

const char* to_string(Status s);

struct ConstrainedGreedySolution {
    double p_star = 0.0;
    double q_star = 0.0;
    double x_q = 0.0;        // survival quantile of q_star; identity below
    double x_lambda = 0.0;   // Lambda^{-1}(p_star)
    TransportPlan plan;
    MarketOutcome outcome;
    Partials partials;
    int fixed_point_iters = 0;
    int search_iters = 0;
    PriceCheck price_check;
    Status status = Status::ok;
    std::string diagnostic;
};

// Fails with infeasible_target when p_star * q_star < r^M or, with `verify`,
// when some other price does at least as well as p_star.
ConstrainedGreedySolution build_constrained_greedy(const Distribution& dist,
                                                   const CostFunction& cost, double p_star,
                                                   double q_star, const Partials& partials,
                                                   const Objective& objective, bool verify = true,
                                                   const Baseline* base = nullptr);

struct FixedPoint {
    Partials partials;
    ConstrainedGreedySolution solution;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

// Damped iteration partials -> plan -> welfare -> partials. Fails with
// non_convergence after max_iter.
FixedPoint fixed_point_partials(const Distribution& dist, const CostFunction& cost,
                                const Objective& objective, double p_star, double q_star,
                                double damping = 0.5, int max_iter = 200);

// Search over (p*, q*) with q* = r/p* + s (1 - r/p*), s in [0, 1].
ConstrainedGreedySolution solve_expost(const Distribution& dist, const CostFunction& cost,
                                       const Objective& objective, const SolverOptions& opts = {});

}  // namespace adplan
