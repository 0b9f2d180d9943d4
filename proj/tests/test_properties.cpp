#include "adplan/benchmarks.hpp"
#include "adplan/exante.hpp"
#include "adplan/expost.hpp"
#include "adplan/extensions.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

using namespace adplan;

namespace {

const CostFunction& quad4() {
    static const CostFunction c = CostFunction::additive_power(4, 2);
    return c;
}

std::vector<std::pair<std::string, Distribution>> distributions() {
    return {{"uniform", Distribution::uniform(0, 1)},
            {"uniform_shifted", Distribution::uniform(0.5, 2)},
            {"beta22", Distribution::beta(2, 2)},
            {"beta13", Distribution::beta(1, 3)},
            {"exponential1", Distribution::exponential(1)},
            {"exponential2", Distribution::exponential(2)},
            {"tabulated", Distribution::tabulated({0, 0.3, 0.6, 1}, {0, 0.5, 0.7, 1})}};
}

struct CorpusPlan {
    std::string name;
    Distribution dist;
    TransportPlan plan;
};

// Directional plans of every kind the library produces.
std::vector<CorpusPlan> corpus() {
    std::vector<CorpusPlan> out;
    for (const auto& [name, d] : distributions()) {
        double lo = d.support_lo();
        double span = d.upper() - lo;
        out.push_back({name + "/identity", d, identity_plan(d)});
        out.push_back({name + "/interval", d, interval_plan(d, lo + 0.2 * span, lo + 0.4 * span)});
        out.push_back({name + "/shift", d, shift_plan(d, 0.1)});
        out.push_back({name + "/scale", d, scale_plan(d, 1.3)});
        out.push_back({name + "/producer", d, solve_producer_optimal(d, quad4()).plan});
        out.push_back({name + "/consumer", d, solve_consumer_optimal_exante(d, quad4()).plan});
    }
    auto u = Distribution::uniform(0, 1);
    out.push_back({"uniform/expost", u, solve_expost(u, quad4(), Objective::weighted(1.0, WelfareMode::expost)).plan});
    out.push_back({"uniform/regulation", u, solve_regulation(u, quad4()).firm_plan});
    auto obj = Objective::weighted(1.0, WelfareMode::expost);
    out.push_back({"uniform/greedy", u,
                   build_constrained_greedy(u, quad4(), 0.3, 0.9, {0.0, 1.0, 0.0, -1.0}, obj, false).plan});
    return out;
}

const std::vector<CorpusPlan>& shared_corpus() {
    static const std::vector<CorpusPlan> c = corpus();
    return c;
}

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> g(n + 1);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / n;
    g[n] = hi;
    return g;
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("survival is nonincreasing and the quantile inverts it") {
    for (const auto& [name, d] : distributions()) {
        CAPTURE(name);
        double prev = 1.0;
        for (double x : grid(d.support_lo() - 0.1, d.upper() + 0.1, 1000)) {
            double s = d.survival(x);
            CHECK(s <= prev + 1e-15);
            prev = s;
        }
        for (int i = 1; i < 100; ++i) {
            double q = i / 100.0;
            CHECK(std::abs(d.survival(d.quantile_survival(q)) - q) < 1e-8);
        }
    }
}

TEST_CASE("monopoly price is a global maximizer") {
    for (const auto& [name, d] : distributions()) {
        CAPTURE(name);
        PricePoint m = monopoly_price(d);
        for (double p : grid(d.support_lo(), d.upper(), 10000)) CHECK(m.profit >= p * d.survival(p) - 1e-8);
        CHECK(std::abs(m.profit - m.price * d.survival(m.price)) < 1e-12);
    }
}

TEST_CASE("ties go to the lowest price") {
    // unit-elastic demand with an atom on top: every price in [0.2, 0.8]
    // earns 0.2, and the flat stretch starts at the listed kink
    Demand d;
    d.survival = [](double y) { return y <= 0.2 ? 1.0 : y <= 0.8 ? 0.2 / y : 0.0; };
    d.atoms = {{0.8, 0.25}};
    d.kinks = {0.2};
    d.lo = 0.0;
    d.hi = 1.0;
    CHECK(std::abs(monopoly_price(d).price - 0.2) < 1e-9);
}

TEST_CASE("cost assumptions hold for the parametric kinds") {
    for (double a : {0.5, 1.0, 4.0, 100.0}) {
        for (double k : {2.0, 2.5, 3.0, 4.0}) {
            CAPTURE(a);
            CAPTURE(k);
            CHECK(check_cost_assumptions(CostFunction::additive_power(a, k), 16).all_passed());
        }
        for (double x_lo : {0.05, 0.1, 0.5}) {
            CostBox box{x_lo, x_lo + 1.0, 1.0};
            CHECK(check_cost_assumptions(CostFunction::multiplicative_quadratic(a), 16, box).all_passed());
        }
    }
}

TEST_CASE("directional pushforwards dominate the original") {
    for (const auto& c : shared_corpus()) {
        CAPTURE(c.name);
        CHECK(validate_plan(c.plan, c.dist).get("directional").passed);
        Demand d = pushforward_survival(c.plan, c.dist);
        for (double y : grid(c.dist.support_lo(), c.dist.upper() * 1.5, 1000))
            CHECK(d.survival(y) >= c.dist.survival(y) - 1e-10);
    }
}

TEST_CASE("accounting identity and surplus ordering") {
    for (const auto& c : shared_corpus()) {
        CAPTURE(c.name);
        auto obj = Objective::weighted(1.0, WelfareMode::expost);
        MarketOutcome at_best = outcome_of(c.plan, c.dist, quad4(), obj);
        std::vector<double> prices{at_best.price};
        for (int k = 0; k < 5; ++k) prices.push_back(c.dist.support_lo() + ref::weyl(k + 1) * (c.dist.upper() - c.dist.support_lo()));
        for (double p : prices) {
            MarketOutcome o = outcome_of(c.plan, c.dist, quad4(), obj, p);
            CHECK(std::abs(o.ps + o.cs_expost - buyer_valuation_mass(c.plan, c.dist, p)) < 1e-8);
            CHECK(o.cs_exante <= o.cs_expost + 1e-12);
        }
    }
}

TEST_CASE("identity plans reproduce the baseline") {
    for (const auto& [name, d] : distributions()) {
        CAPTURE(name);
        MarketOutcome o = outcome_of(identity_plan(d), d, quad4(), Objective::weighted(0.0, WelfareMode::exante));
        PricePoint m = monopoly_price(d);
        CHECK(o.price == m.price);
        CHECK(o.total_cost == 0.0);
        CHECK(std::abs(o.ps - m.profit) < 1e-12);
    }
}

TEST_CASE("ex-ante solutions have the interval shape and are implementable") {
    for (const auto& [name, d] : distributions()) {
        CAPTURE(name);
        Baseline base(d);
        for (int which = 0; which < 3; ++which) {
            IntervalSolution s = which == 0   ? solve_producer_optimal(d, quad4())
                                 : which == 1 ? solve_consumer_optimal_exante(d, quad4())
                                              : solve_weighted_exante(d, quad4(), 0.5);
            CAPTURE(which);
            CHECK(s.price_check.ok);
            Demand dem = pushforward_survival(s.plan, d);
            CHECK(std::abs(monopoly_price(dem).price - s.p_star) < 1e-6);
            for (const Segment& seg : s.plan.segments) {
                if (seg.is_identity()) {
                    CHECK((seg.hi <= s.p_lower + 1e-12 || seg.lo >= s.p_star - 1e-12));
                } else {
                    REQUIRE(seg.is_constant());
                    CHECK(std::get<Constant>(seg.rule).target == s.p_star);
                    CHECK(seg.lo == s.p_lower);
                    CHECK(seg.hi == std::min(s.p_star, d.support_hi()));
                }
            }
            if (which == 0) CHECK(s.outcome.objective_value >= base.revenue() - 1e-9);
            if (which == 1) {
                MarketOutcome none = outcome_of(identity_plan(d), d, quad4(), Objective::weighted(1.0, WelfareMode::exante));
                CHECK(s.outcome.objective_value >= none.cs_exante - 1e-9);
            }
        }
    }
}

TEST_CASE("interval optima dominate nearby intervals") {
    auto u = Distribution::uniform(0, 1);
    for (double alpha : {0.0, 0.5, 1.0}) {
        CAPTURE(alpha);
        auto obj = Objective::weighted(alpha, WelfareMode::exante);
        IntervalSolution s = solve_weighted_exante(u, quad4(), alpha);
        double best = s.outcome.objective_value;
        int tried = 0;
        for (int k = 1; tried < 50; ++k) {
            double pl = s.p_lower + 0.1 * (ref::weyl(2 * k) - 0.5);
            double ps = s.p_star + 0.1 * (ref::weyl(2 * k + 1) - 0.5);
            if (pl < 0.0 || pl >= ps) continue;
            ++tried;
            MarketOutcome o = outcome_of(interval_plan(u, pl, ps), u, quad4(), obj);
            CHECK(best >= o.objective_value - 1e-6);
        }
    }
}

TEST_CASE("ex-post plans: regions, incentive compatibility and distortions") {
    for (const auto& [name, d] : distributions()) {
        CAPTURE(name);
        auto obj = Objective::weighted(1.0, WelfareMode::expost);
        ConstrainedGreedySolution s = solve_expost(d, quad4(), obj);
        REQUIRE(s.status != Status::infeasible);
        // identity below x_q, the atom at p* up to x_lambda, then the capped map
        CHECK(s.x_q <= s.x_lambda + 1e-12);
        for (double x : grid(d.support_lo(), d.upper(), 400)) {
            double y = s.plan(x);
            if (x < s.x_q - 1e-9) {
                CHECK(y == x);
            } else if (x < s.x_lambda - 1e-9) {
                CHECK(y == s.p_star);
            } else if (x > s.x_lambda + 1e-9) {
                CHECK(y >= s.p_star);
            }
        }
        Demand dem = pushforward_survival(s.plan, d);
        double target = s.p_star * dem.survival(s.p_star);
        CHECK(std::abs(target - s.p_star * s.q_star) < 1e-8);
        std::vector<double> prices = grid(d.support_lo(), s.plan(d.upper()) + 0.1, 10000);
        for (const Atom& a : dem.atoms) prices.push_back(a.location);
        for (double p : prices) CHECK(p * dem.survival(p) <= s.p_star * s.q_star + 1e-6);

        GreedyMap g(quad4(), s.p_star, s.partials);
        for (double x : grid(d.support_lo(), d.upper(), 400)) {
            if (x < s.x_q) continue;
            if (x < s.x_lambda - 1e-9) CHECK(s.plan(x) >= g.lambda(x) - 1e-9);
            if (x > s.x_lambda + 1e-9) CHECK(s.plan(x) <= g.lambda(x) + 1e-9);
        }
        MarketOutcome none = outcome_of(identity_plan(d), d, quad4(), obj);
        CHECK(s.outcome.objective_value >= none.objective_value - 1e-9);
    }
}

TEST_CASE("the unit-elastic cap loosens as q* grows") {
    auto u = Distribution::uniform(0, 1);
    auto obj = Objective::weighted(1.0, WelfareMode::expost);
    Partials w{0.0, 1.0, 0.0, -1.0};
    std::vector<ConstrainedGreedySolution> sols;
    for (double q : {0.84, 0.9, 0.95, 1.0}) sols.push_back(build_constrained_greedy(u, quad4(), 0.3, q, w, obj, false));
    for (size_t k = 1; k < sols.size(); ++k) {
        CHECK(sols[k].x_lambda == sols[0].x_lambda);
        for (double x : grid(sols[0].x_lambda, 1.0, 200)) CHECK(sols[k].plan(x) >= sols[k - 1].plan(x) - 1e-12);
    }
}

TEST_CASE("extension invariants") {
    for (const auto& [name, d] : distributions()) {
        CAPTURE(name);
        UnitElasticInfoStructure rs = rs_information_structure(d);
        CHECK(convex_order_check(rs, d).passed);
        Demand dem = rs.demand();
        for (double p : grid(rs.p_rs, rs.B, 50)) CHECK(std::abs(p * dem.survival(p) - rs.p_rs) < 1e-6);
        JointValue j = joint_values(d, quad4(), JointMode::producer);
        CHECK(j.value > std::max(j.info_only, j.manipulation_only));
    }
    auto u = Distribution::uniform(0, 1);
    for (double a : {1.0, 4.0, 16.0}) {
        CAPTURE(a);
        auto cost = CostFunction::additive_power(a, 2);
        RegulationPolicy r = solve_regulation(u, cost);
        CHECK(r.best_response_gap < 1e-6);
        auto obj = Objective::weighted(1.0, WelfareMode::exante);
        TwistSolution t = solve_twist(u, cost, WelfareMode::exante, obj);
        CHECK(t.outcome.objective_value >= solve_consumer_optimal_exante(u, cost).outcome.objective_value - 1e-6);
    }
}

}  // TEST_SUITE
