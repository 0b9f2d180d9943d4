#include "adplan/errors.hpp"
#include "adplan/exante.hpp"
#include "adplan/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace adplan;
using doctest::Approx;

namespace {

const Distribution& unif() {
    static const Distribution u = Distribution::uniform(0, 1);
    return u;
}

const CostFunction& quad4() {
    static const CostFunction c = CostFunction::additive_power(4, 2);
    return c;
}

bool is_identity_at(const DiscreteInstance& inst, const std::vector<int>& map, int i) {
    return inst.targets[map[i]] == inst.valuations[i];
}

// Identity outside one run of consecutive valuations that share a target.
bool interval_shaped(const DiscreteInstance& inst, const std::vector<int>& map) {
    int n = static_cast<int>(map.size());
    int first = -1;
    int last = -1;
    for (int i = 0; i < n; ++i) {
        if (!is_identity_at(inst, map, i)) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) return true;
    for (int i = first; i <= last; ++i)
        if (map[i] != map[last]) return false;
    return true;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("mid-quantile valuations") {
    DiscreteInstance inst = discretize(unif(), quad4(), 4, 8);
    REQUIRE(inst.valuations.size() == 4);
    CHECK(inst.valuations[0] == Approx(0.125));
    CHECK(inst.valuations[1] == Approx(0.375));
    CHECK(inst.valuations[2] == Approx(0.625));
    CHECK(inst.valuations[3] == Approx(0.875));
    double total = 0.0;
    for (double m : inst.masses) total += m;
    CHECK(total == Approx(1.0).epsilon(1e-15));
    for (double v : inst.valuations) CHECK(std::binary_search(inst.targets.begin(), inst.targets.end(), v));
}

TEST_CASE("cost matrix") {
    DiscreteInstance inst = discretize(unif(), quad4(), 6, 12);
    for (size_t i = 0; i < inst.valuations.size(); ++i) {
        for (size_t j = 0; j < inst.targets.size(); ++j) {
            if (inst.targets[j] < inst.valuations[i]) {
                CHECK(std::isinf(inst.cost[i][j]));
            } else {
                CHECK(inst.cost[i][j] == Approx(quad4()(inst.valuations[i], inst.targets[j])));
            }
        }
    }
}

TEST_CASE("enumeration counts") {
    CHECK(stars_and_bars(6, 12) == 12376);
    DiscreteInstance free = discretize(unif(), quad4(), 6, 12, 0, false);
    CHECK(count_monotone_maps(free) == 12376);
    DiscreteInstance dir = discretize(unif(), quad4(), 6, 12);
    std::uint64_t n = count_monotone_maps(dir);
    CHECK(n == 3876);
    CHECK(n <= stars_and_bars(6, 12));
    OracleResult r0 = oracle_solve(free, Objective::weighted(0.0, WelfareMode::expost));
    CHECK(r0.maps_evaluated + r0.branches_pruned > 0);
}

TEST_CASE("directional enumeration never moves mass backward") {
    DiscreteInstance dir = discretize(unif(), quad4(), 5, 10);
    for (auto kind : {0.0, 0.5, 1.0}) {
        OracleResult r = oracle_solve(dir, Objective::weighted(kind, WelfareMode::expost));
        for (size_t i = 0; i < r.best.map.size(); ++i) CHECK(dir.targets[r.best.map[i]] >= dir.valuations[i]);
    }
}

TEST_CASE("prohibitive cost keeps the identity") {
    auto huge = CostFunction::additive_power(1e6, 2);
    DiscreteInstance inst = discretize(unif(), huge, 6, 12);
    OracleResult r = oracle_solve(inst, Objective::weighted(0.0, WelfareMode::exante));
    for (int i = 0; i < 6; ++i) CHECK(is_identity_at(inst, r.best.map, i));
    // the grid price is the best valuation times the mass at or above it
    std::vector<int> id(6);
    for (int i = 0; i < 6; ++i) id[i] = static_cast<int>(std::lower_bound(inst.targets.begin(), inst.targets.end(), inst.valuations[i]) - inst.targets.begin());
    DiscreteOutcome o = evaluate_map(inst, id, Objective::weighted(0.0, WelfareMode::exante));
    CHECK(r.best.price == o.price);
    double best = 0.0;
    for (int i = 0; i < 6; ++i) best = std::max(best, inst.valuations[i] * (6 - i) / 6.0);
    CHECK(o.welfare.ps == Approx(best));
}

TEST_CASE("ex-ante consumer optimum has the interval shape") {
    DiscreteInstance inst = discretize(unif(), quad4(), 6, 12);
    OracleResult r = oracle_solve(inst, Objective::weighted(1.0, WelfareMode::exante));
    CHECK(interval_shaped(inst, r.best.map));
    CHECK(forbidden_maps_check(inst, r.best).passed);
    OracleResult p = oracle_solve(inst, Objective::weighted(0.0, WelfareMode::exante));
    CHECK(forbidden_maps_check(inst, p.best).passed);
}

TEST_CASE("producer certificate passes at slack 0.02") {
    DiscreteInstance inst = discretize(unif(), quad4(), 6, 12);
    IntervalSolution s = solve_producer_optimal(unif(), quad4());
    Certificate c = crosscheck(s.plan, inst, Objective::weighted(0.0, WelfareMode::exante), 0.02, "producer");
    CHECK(c.passed);
    CHECK(c.gap >= -1e-12);
}

TEST_CASE("a corrupted plan fails its certificate") {
    DiscreteInstance inst = discretize(unif(), quad4(), 6, 12);
    IntervalSolution s = solve_producer_optimal(unif(), quad4());
    TransportPlan bad = interval_plan(unif(), s.p_lower + 0.2, s.p_star);
    Certificate c = crosscheck(bad, inst, Objective::weighted(0.0, WelfareMode::exante), 0.02, "corrupted");
    CHECK_FALSE(c.passed);
    CHECK(c.gap > 0.0);
}

TEST_CASE("two-sided maps do at least as well") {
    DiscreteInstance dir = discretize(unif(), quad4(), 6, 12);
    DiscreteInstance free = discretize(unif(), quad4(), 6, 12, 0, false);
    for (double alpha : {0.0, 1.0}) {
        for (auto mode : {WelfareMode::exante, WelfareMode::expost}) {
            auto obj = Objective::weighted(alpha, mode);
            CHECK(oracle_solve(free, obj).best.value >= oracle_solve(dir, obj).best.value - 1e-12);
        }
    }
}

TEST_CASE("oracle output is reproducible across thread counts") {
    DiscreteInstance inst = discretize(unif(), quad4(), 6, 12);
    auto obj = Objective::weighted(1.0, WelfareMode::expost);
    OracleResult a = oracle_solve(inst, obj, 1);
    OracleResult b = oracle_solve(inst, obj, 1);
    OracleResult c = oracle_solve(inst, obj, 4);
    CHECK(a.best.map == b.best.map);
    CHECK(a.best.map == c.best.map);
    CHECK(a.best.value == c.best.value);
    CHECK(a.best.price == c.best.price);
    CHECK(format_map(inst, a.best.map) == format_map(inst, c.best.map));
}

TEST_CASE("snapping rounds images up") {
    DiscreteInstance inst = discretize(unif(), quad4(), 6, 12);
    IntervalSolution s = solve_consumer_optimal_exante(unif(), quad4());
    std::vector<int> snapped = snap_plan(s.plan, inst);
    for (size_t i = 0; i < snapped.size(); ++i) {
        double y = s.plan(inst.valuations[i]);
        CHECK(inst.targets[snapped[i]] >= y - 1e-12);
        if (snapped[i] > 0) CHECK(inst.targets[snapped[i] - 1] < y - 1e-12);
        if (i > 0) CHECK(snapped[i] >= snapped[i - 1]);
    }
}

TEST_CASE("size limits") {
    CHECK_THROWS_AS(discretize(unif(), quad4(), oracle_max_valuations + 1, 24), Error);
    try {
        discretize(unif(), quad4(), 6, oracle_max_targets + 1);
        FAIL("expected size_limit");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::size_limit);
    }
}

}  // TEST_SUITE
