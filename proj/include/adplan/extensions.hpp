#pragma once

#include "adplan/checks.hpp"
#include "adplan/cost.hpp"
#include "adplan/distribution.hpp"
#include "adplan/expost.hpp"
#include "adplan/objective.hpp"
#include "adplan/options.hpp"
#include "adplan/plan.hpp"

#include <string>

namespace adplan {

// Unit-elastic signal distribution: G(x) = 1 - p_rs / x on [p_rs, B) and an
// atom of mass p_rs / B at B.
struct UnitElasticInfoStructure {
    double p_rs = 0.0;
    double B = 0.0;

    double atom_mass() const { return B > 0.0 ? p_rs / B : 1.0; }
    double cdf(double x) const;
    double mean() const;
    // int_0^t G(x) dx
    double integrated_cdf(double t) const;
    Demand demand() const;
};

// Smallest p whose structure is a mean-preserving contraction of dist, by
// bisection on p to `tol`.
UnitElasticInfoStructure rs_information_structure(const Distribution& dist, double tol = 1e-8);

// Check of int_0^t G <= int_0^t F on 1001 points up to max(upper, mean),
// plus t = B when B lies beyond them.
Check convex_order_check(const UnitElasticInfoStructure& rs, const Distribution& dist);

enum class JointMode { producer, consumer_exante, consumer_expost };

const char* to_string(JointMode m);

struct JointValue {
    JointMode mode = JointMode::producer;
    double value = 0.0;
    double info_only = 0.0;
    double manipulation_only = 0.0;
    // value - max(info_only, manipulation_only); for consumer_exante, the
    // value manipulation adds on top of the information structure.
    double margin = 0.0;
    double shift = 0.0;              // producer: the uniform shift after pooling
    UnitElasticInfoStructure rs;     // consumer modes
    std::string construction;
    bool lower_bound = false;        // consumer_expost is constructive only
};

JointValue joint_values(const Distribution& dist, const CostFunction& cost, JointMode mode,
                        const SolverOptions& opts = {});

struct RegulationPolicy {
    double p_lower = 0.0;
    double p_star = 0.0;
    TransportPlan firm_plan;
    double cs_value = 0.0;
    double baseline_cs = 0.0;
    // PS - cost - r^M of the firm's plan.
    double indifference_residual = 0.0;
    // Best truncated-plan or null-plan profit minus the prescribed plan's.
    double best_response_gap = 0.0;
    Status status = Status::ok;
    std::string diagnostic;

    // Largest allowed shift for a consumer with valuation x.
    double limit(double x) const { return x >= p_lower && x < p_star ? p_star - x : 0.0; }
};

RegulationPolicy solve_regulation(const Distribution& dist, const CostFunction& cost,
                                  const SolverOptions& opts = {});

struct TwistSolution {
    WelfareMode mode = WelfareMode::exante;
    double p_star = 0.0;
    double q_star = 0.0;
    double x_q = 0.0;
    TransportPlan plan;
    MarketOutcome outcome;
    PriceCheck price_check;
    Check single_crossing{"single_crossing"};
    Status status = Status::ok;
    std::string diagnostic;
};

// Plans may shift consumers down: identity below x_q, then
// max(p*, min(base(x), p* q* / survival(x))) with base the identity (exante)
// or the greedy map (expost).
TwistSolution solve_twist(const Distribution& dist, const CostFunction& cost, WelfareMode mode,
                          const Objective& objective, const SolverOptions& opts = {});

// Above x_q, the types shifted down (T(x) < x) form a single interval:
// forward shifts on either side of it, backward ones inside.
Check twist_single_crossing(const TransportPlan& plan, const Distribution& dist, double x_q);

enum class UncertaintyMode { expectation, maxmin };

struct UncertaintySolution {
    UncertaintyMode mode = UncertaintyMode::expectation;
    double beta = 0.0;
    double p_star = 0.0;
    double q_star = 0.0;
    double p_lower = 0.0;
    TransportPlan plan;
    MarketOutcome outcome;
    Status status = Status::ok;
};

UncertaintySolution solve_welfare_uncertainty(const Distribution& dist, const CostFunction& cost,
                                              double beta, UncertaintyMode mode,
                                              const SolverOptions& opts = {});

}  // namespace adplan
