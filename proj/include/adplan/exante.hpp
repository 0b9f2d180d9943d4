#pragma once

#include "adplan/cost.hpp"
#include "adplan/distribution.hpp"
#include "adplan/objective.hpp"
#include "adplan/options.hpp"
#include "adplan/plan.hpp"

namespace adplan {

enum class Binding { foc, upward_deviation, corner };

const char* to_string(Binding b);

// Producer first-order conditions at (p_lower, p_star):
//   upper = survival(p_lower) - int_{p_lower}^{p_star} c_y(x, p_star) dF
//   lower = c(p_lower, p_star) - p_star
struct FocResiduals {
    double upper = 0.0;
    double lower = 0.0;
};

struct IntervalSolution {
    double p_star = 0.0;
    double p_lower = 0.0;
    TransportPlan plan;
    MarketOutcome outcome;
    Binding binding = Binding::corner;
    FocResiduals foc;
    // Residual of whichever condition pins p_lower (zero at a corner).
    double binding_residual = 0.0;
    PriceCheck price_check;
};

// Welfare of the plan that moves [p_lower, p_star) to p_star, priced at p_star.
Welfare interval_welfare(const Distribution& dist, const CostFunction& cost, double p_lower,
                         double p_star);

FocResiduals interval_foc(const Distribution& dist, const CostFunction& cost, double p_lower,
                          double p_star);

// inf{x >= lo : c(x, p) <= p}
double producer_lower(const Distribution& dist, const CostFunction& cost, double p);

// Highest candidate target price for producer-type searches: p * survival of
// the producer lower end drops below r^M past it.
double producer_price_cap(const Distribution& dist, const CostFunction& cost, const Baseline& base);

IntervalSolution solve_producer_optimal(const Distribution& dist, const CostFunction& cost,
                                        const SolverOptions& opts = {});
IntervalSolution solve_consumer_optimal_exante(const Distribution& dist, const CostFunction& cost,
                                               const SolverOptions& opts = {});
IntervalSolution solve_weighted_exante(const Distribution& dist, const CostFunction& cost,
                                       double alpha, const SolverOptions& opts = {});
// Any objective evaluated on the interval family by a nested search.
IntervalSolution solve_interval_general(const Distribution& dist, const CostFunction& cost,
                                        const Objective& objective, const SolverOptions& opts = {});

}  // namespace adplan
