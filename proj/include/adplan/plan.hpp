#pragma once

#include "adplan/checks.hpp"
#include "adplan/cost.hpp"
#include "adplan/distribution.hpp"
#include "adplan/objective.hpp"
#include "adplan/pricing.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace adplan {

struct Identity {};

struct Constant {
    double target;
};

// A nondecreasing map on its segment. `name` and `params` describe it in the
// plan record.
struct Curve {
    RealFn map;
    std::string name;
    std::vector<double> params;
};

using Rule = std::variant<Identity, Constant, Curve>;

// Rule applied on [lo, hi).
struct Segment {
    double lo;
    double hi;
    Rule rule;

    double apply(double x) const;
    bool is_identity() const { return std::holds_alternative<Identity>(rule); }
    bool is_constant() const { return std::holds_alternative<Constant>(rule); }
    bool is_curve() const { return std::holds_alternative<Curve>(rule); }
};

// Deterministic monotone advertising plan x -> T(x).
struct TransportPlan {
    std::vector<Segment> segments;
    bool directional = true;

    // Identity outside the segments.
    double operator()(double x) const;
    // One `segment <lo> <hi> <rule> [params...]` line per segment.
    std::string serialize() const;
};

TransportPlan identity_plan(const Distribution& dist);
// Identity outside [p_lower, p_star), constant p_star inside.
TransportPlan interval_plan(const Distribution& dist, double p_lower, double p_star);
TransportPlan shift_plan(const Distribution& dist, double d);
TransportPlan scale_plan(const Distribution& dist, double factor);

// inf{x in [seg.lo, seg.hi) : T(x) >= y}; seg.hi when no such x exists.
double segment_threshold(const Segment& seg, double y, const Distribution& dist);

// y -> mu({x : T(x) >= y}), with plan-induced atoms listed explicitly.
Demand pushforward_survival(const TransportPlan& plan, const Distribution& dist);

struct MarketOutcome {
    double price = 0.0;
    double quantity = 0.0;
    double ps = 0.0;
    double cs_exante = 0.0;
    double cs_expost = 0.0;
    double total_cost = 0.0;
    double objective_value = 0.0;

    Welfare welfare() const { return {ps, cs_exante, cs_expost, total_cost}; }
};

// Full welfare accounting. Without a price the monopolist's lowest optimal
// price against the pushforward is used.
MarketOutcome outcome_of(const TransportPlan& plan, const Distribution& dist,
                         const CostFunction& cost, const Objective& objective,
                         std::optional<double> price = std::nullopt,
                         const PricingOptions& pricing = {});

// Integral of T over buyers at `price`, used by the accounting identity.
double buyer_valuation_mass(const TransportPlan& plan, const Distribution& dist, double price);

CheckReport validate_plan(const TransportPlan& plan, const Distribution& dist);

}  // namespace adplan
