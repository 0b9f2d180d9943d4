#pragma once

#include "adplan/checks.hpp"
#include "adplan/cost.hpp"
#include "adplan/distribution.hpp"
#include "adplan/objective.hpp"
#include "adplan/plan.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adplan {

inline constexpr int oracle_max_valuations = 12;
inline constexpr int oracle_max_targets = 24;

struct DiscreteInstance {
    std::vector<double> valuations;  // sorted
    std::vector<double> masses;
    std::vector<double> targets;     // sorted, contains the valuations
    std::vector<double> price_grid;
    // cost[i][j] = c(valuations[i], targets[j]); infinite for backward moves
    // when directional.
    std::vector<std::vector<double>> cost;
    bool directional = true;
};

// Valuations at survival quantiles (k - 0.5) / N; targets are the valuations
// plus evenly spaced points up to the top of the support. Prices are the
// targets unless `price_grid_size` > 0 asks for an even grid instead.
DiscreteInstance discretize(const Distribution& dist, const CostFunction& cost, int N, int M,
                            int price_grid_size = 0, bool directional = true);

// Nondecreasing maps valuation index -> target index, by dynamic programming
// over (valuation, target) pairs. Backward moves are excluded when directional.
std::uint64_t count_monotone_maps(const DiscreteInstance& inst);

// C(M + N - 1, N), the unconstrained count.
std::uint64_t stars_and_bars(int N, int M);

struct DiscreteOutcome {
    std::vector<int> map;  // target index per valuation
    double price = 0.0;
    Welfare welfare;
    double value = 0.0;
};

// The monopolist's lowest optimal grid price for the map, then welfare.
DiscreteOutcome evaluate_map(const DiscreteInstance& inst, const std::vector<int>& map,
                             const Objective& objective);

struct OracleResult {
    DiscreteOutcome best;
    std::uint64_t maps_evaluated = 0;
    std::uint64_t branches_pruned = 0;
};

// Exhaustive optimum; ties go to the lexicographically smallest map.
// Weighted objectives prune prefixes whose optimistic bound cannot beat the
// incumbent.
OracleResult oracle_solve(const DiscreteInstance& inst, const Objective& objective, int threads = 1);

// Each valuation's image rounded to the nearest target at or above it
// (directional) or the nearest target.
std::vector<int> snap_plan(const TransportPlan& plan, const DiscreteInstance& inst);

struct Certificate {
    std::string label;
    double oracle_value = 0.0;
    double snapped_value = 0.0;
    double gap = 0.0;
    double slack = 0.0;
    bool passed = false;
    DiscreteOutcome oracle;
    DiscreteOutcome snapped;
};

Certificate crosscheck(const TransportPlan& plan, const DiscreteInstance& inst, const Objective& objective,
                       double slack, const std::string& label = "", int threads = 1);

// No type moved to a target strictly between its valuation and the price,
// none moved strictly above the price.
Check forbidden_maps_check(const DiscreteInstance& inst, const DiscreteOutcome& outcome);

std::string format_map(const DiscreteInstance& inst, const std::vector<int>& map);

}  // namespace adplan
