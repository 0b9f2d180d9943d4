#pragma once

#include "adplan/checks.hpp"
#include "adplan/cost.hpp"
#include "adplan/distribution.hpp"
#include "adplan/expost.hpp"
#include "adplan/options.hpp"
#include "adplan/plan.hpp"

#include <array>
#include <string>
#include <vector>

namespace adplan {

struct UniformSolution {
    double shift = 0.0;   // additive d, or multiplicative level z
    double factor = 1.0;  // A(z) for the multiplicative kind
    double price = 0.0;
    TransportPlan plan;
    MarketOutcome outcome;
    // Additive: survival(p - d) - c_d'(d) and p f(p - d) - c_d'(d).
    std::array<double, 2> foc_residuals{0.0, 0.0};
};

enum class UniformGoal { producer, consumer_exante };

// Everyone shifted up by the same d, priced by the monopolist's best response.
UniformSolution solve_uniform_additive(const Distribution& dist, const CostFunction& cost,
                                       UniformGoal goal, const SolverOptions& opts = {});

// Everyone scaled by A(z) = t with psi'(t) = r^M. Without `A_inverse`,
// A(z) = 1 + z.
UniformSolution solve_uniform_multiplicative(const Distribution& dist, const CostFunction& cost,
                                             const RealFn& A_inverse = nullptr,
                                             const SolverOptions& opts = {});

enum class SweepFamily { beta_alpha, exponential_lambda, cost_scale_a };

const char* to_string(SweepFamily f);
SweepFamily sweep_family_from(const std::string& name);

struct SweepRow {
    std::string family;
    double param = 0.0;
    std::string regime;  // no_ads, uniform_producer, flexible_producer, flexible_consumer
    double price = 0.0;
    double quantity = 0.0;
    double ps = 0.0;
    double cs_exante = 0.0;
    double cs_expost = 0.0;
    double total_cost = 0.0;
    Status status = Status::ok;
    std::string diagnostic;
};

// beta_alpha uses beta(param, 2) and exponential_lambda exponential(param),
// both with `cost`; cost_scale_a uses uniform[0,1] with quadratic cost of
// scale param. Four rows per value, in regime order.
std::vector<SweepRow> run_comparison_sweep(SweepFamily family, const std::vector<double>& values,
                                           const CostFunction& cost, const SolverOptions& opts = {});

// Price ordering, consumer-gain and (for cost_scale_a) ratio checks over a
// sweep. Beta-family findings are notes only.
CheckReport sweep_orderings(const std::vector<SweepRow>& rows);

// (p* - p^M) / (p^U - p^M) for one parameter value of a sweep.
double targeted_to_uniform_ratio(const std::vector<SweepRow>& rows, double param);

}  // namespace adplan
