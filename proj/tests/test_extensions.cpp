#include "adplan/exante.hpp"
#include "adplan/expost.hpp"
#include "adplan/extensions.hpp"
#include "reference.hpp"

#include <doctest.h>

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

}  // namespace

TEST_SUITE("extensions") {

TEST_CASE("unit-elastic structure on uniform[0,1]") {
    auto r = ref::rs_uniform();
    CHECK(r.p == Approx(0.2036321888).epsilon(1e-8));
    CHECK(r.B == Approx(0.8728143301).epsilon(1e-8));

    UnitElasticInfoStructure rs = rs_information_structure(unif());
    CHECK(std::abs(rs.p_rs - r.p) < 1e-6);
    CHECK(std::abs(rs.B - r.B) < 1e-5);
    CHECK(std::abs(rs.mean() - 0.5) < 1e-8);
    CHECK(convex_order_check(rs, unif()).passed);

    Demand d = rs.demand();
    for (int k = 0; k < 20; ++k) {
        double p = rs.p_rs + ref::weyl(k + 1) * (rs.B - rs.p_rs);
        CHECK(std::abs(p * d.survival(p) - rs.p_rs) < 1e-6);
    }
    CHECK(std::abs(rs.B * d.survival(rs.B) - rs.p_rs) < 1e-6);
}

TEST_CASE("point mass has no information to withhold") {
    auto point = Distribution::tabulated({0.4}, {1.0});
    UnitElasticInfoStructure rs = rs_information_structure(point);
    CHECK(std::abs(rs.p_rs - 0.4) < 1e-6);
    CHECK(std::abs(rs.B - 0.4) < 1e-6);
}

TEST_CASE("integrated CDF of the structure") {
    UnitElasticInfoStructure rs{0.2, 0.2 * std::exp(0.5 / 0.2 - 1.0)};
    CHECK(rs.integrated_cdf(0.1) == 0.0);
    double t = 0.5;
    CHECK(rs.integrated_cdf(t) == Approx((t - 0.2) - 0.2 * std::log(t / 0.2)).epsilon(1e-10));
    CHECK(rs.cdf(rs.B) == 1.0);
}

TEST_CASE("joint producer value") {
    JointValue j = joint_values(unif(), quad4(), JointMode::producer);
    CHECK(std::abs(j.value - 0.625) < 1e-6);
    CHECK(std::abs(j.shift - 0.25) < 1e-9);
    CHECK(j.info_only == Approx(0.5));
    CHECK(j.value > std::max(j.info_only, j.manipulation_only));
    CHECK(j.margin > 0.0);
}

TEST_CASE("joint ex-ante consumer value") {
    JointValue j = joint_values(unif(), quad4(), JointMode::consumer_exante);
    CHECK(std::abs(j.value - (0.5 - j.rs.p_rs)) < 1e-8);
    CHECK(std::abs(j.margin) < 1e-8);
    CHECK(std::abs(j.value - (0.5 - ref::rs_uniform().p)) < 1e-6);
}

TEST_CASE("joint ex-post consumer value") {
    JointValue j = joint_values(unif(), quad4(), JointMode::consumer_expost);
    double info = joint_values(unif(), quad4(), JointMode::consumer_exante).value;
    double manip = solve_expost(unif(), quad4(), Objective::weighted(1.0, WelfareMode::expost)).outcome.objective_value;
    CHECK(j.value > info);
    CHECK(j.value > manip);
    CHECK(j.margin > 0.0);
    CHECK(j.lower_bound);
}

TEST_CASE("regulation on uniform[0,1]") {
    RegulationPolicy r = solve_regulation(unif(), quad4());
    auto reference = ref::regulation_optimum(4);
    CHECK(reference.x == Approx(0.2742988521).epsilon(1e-7));
    CHECK(reference.value == Approx(0.2418148726).epsilon(1e-8));
    CHECK(r.cs_value > 0.125);
    CHECK(std::abs(r.cs_value - reference.value) < 1e-5);
    CHECK(std::abs(r.p_star - reference.x) < 1e-3);
    CHECK(std::abs(r.p_lower - ref::regulation_lower(r.p_star, 4)) < 1e-6);
    CHECK(r.p_star < 0.5);
    CHECK(std::abs(r.indifference_residual) < 1e-6);
    CHECK(r.best_response_gap < 1e-6);
    CHECK(r.limit(r.p_lower + 0.01) == Approx(r.p_star - r.p_lower - 0.01));
    CHECK(r.limit(0.9) == 0.0);
}

TEST_CASE("regulation with prohibitive cost") {
    RegulationPolicy r = solve_regulation(unif(), CostFunction::additive_power(1e6, 2));
    CHECK(std::abs(r.cs_value - 0.125) < 0.02);
    CHECK(r.cs_value >= 0.125 - 1e-9);
}

TEST_CASE("twist relaxes the directional problems") {
    auto obj = Objective::weighted(1.0, WelfareMode::exante);
    TwistSolution t = solve_twist(unif(), quad4(), WelfareMode::exante, obj);
    double directional = solve_consumer_optimal_exante(unif(), quad4()).outcome.objective_value;
    CHECK(t.outcome.objective_value >= directional - 1e-6);
    CHECK(t.single_crossing.passed);
    CHECK(t.price_check.ok);

    auto post = Objective::weighted(1.0, WelfareMode::expost);
    TwistSolution tp = solve_twist(unif(), quad4(), WelfareMode::expost, post);
    double dir_post = solve_expost(unif(), quad4(), post).outcome.objective_value;
    CHECK(tp.outcome.objective_value >= dir_post - 1e-6);
    CHECK(tp.single_crossing.passed);
}

TEST_CASE("twist matches the directional producer optimum") {
    // The producer optimum has slack IC, so backward shifts are unused.
    auto obj = Objective::weighted(0.0, WelfareMode::exante);
    TwistSolution t = solve_twist(unif(), quad4(), WelfareMode::exante, obj);
    double directional = solve_producer_optimal(unif(), quad4()).outcome.objective_value;
    CHECK(std::abs(t.outcome.objective_value - directional) < 1e-4);
}

TEST_CASE("single crossing flags a second backward run") {
    TransportPlan p;
    p.directional = false;
    p.segments = {{0.0, 1.0, Curve{[](double x) { return x + 0.1 * std::sin(12.0 * x); }, "wave", {}}}};
    CHECK_FALSE(twist_single_crossing(p, unif(), 0.0).passed);
    TransportPlan q;
    q.directional = false;
    q.segments = {{0.0, 1.0, Curve{[](double x) { return 0.3 + 0.5 * x; }, "line", {}}}};
    CHECK(twist_single_crossing(q, unif(), 0.0).passed);
}

TEST_CASE("welfare uncertainty") {
    UncertaintySolution b0 = solve_welfare_uncertainty(unif(), quad4(), 0.0, UncertaintyMode::expectation);
    CHECK(std::abs(b0.p_star - 0.25) < 1e-3);
    CHECK(std::abs(b0.q_star - 1.0) < 1e-3);

    double exante = solve_consumer_optimal_exante(unif(), quad4()).outcome.objective_value;
    UncertaintySolution b1 = solve_welfare_uncertainty(unif(), quad4(), 1.0, UncertaintyMode::expectation);
    CHECK(std::abs(b1.outcome.objective_value - exante) < 1e-4);
    UncertaintySolution mm = solve_welfare_uncertainty(unif(), quad4(), 0.5, UncertaintyMode::maxmin);
    CHECK(std::abs(mm.outcome.cs_exante - mm.outcome.total_cost - exante) < 1e-4);

    UncertaintySolution half = solve_welfare_uncertainty(unif(), quad4(), 0.5, UncertaintyMode::expectation);
    // top of the support lies on the unconstrained stretch
    for (double x : {0.97, 0.99}) CHECK(half.plan(x) - x == Approx(0.125).epsilon(1e-6));
    CHECK(half.outcome.objective_value <= b0.outcome.objective_value + 1e-9);
    CHECK(half.outcome.objective_value >= b1.outcome.objective_value - 1e-9);
}

}  // TEST_SUITE
