#include "adplan/extensions.hpp"

#include "adplan/errors.hpp"
#include "adplan/exante.hpp"
#include "adplan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Integrated CDF of dist on a grid over [0, t_end].
struct IntegratedCdf {
    std::vector<double> t;
    std::vector<double> value;

    IntegratedCdf(const Distribution& dist, double t_end, std::size_t n) {
        t = linspace(0.0, t_end, n);
        value.resize(n);
        // int_0^t F = t - E[min(X, t)]
        double below = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) below += dist.partial_expectation(t[i - 1], t[i]);
            value[i] = t[i] - below - t[i] * dist.survival(t[i]);
        }
    }

    // Exact past the grid end, where the CDF is 1 for bounded supports.
    double at_or_past_end(double x, const Distribution& dist) const {
        double below = dist.partial_expectation(0.0, x);
        return x - below - x * dist.survival(x);
    }
};

bool rs_feasible(double p, double mean, const Distribution& dist, const IntegratedCdf& F) {
    UnitElasticInfoStructure rs{p, p * std::exp(mean / p - 1.0)};
    if (!std::isfinite(rs.B)) return false;
    if (std::isfinite(dist.support_hi()) && rs.B > dist.support_hi() + 1e-12) return false;
    for (std::size_t i = 0; i < F.t.size(); ++i) {
        if (rs.integrated_cdf(F.t[i]) > F.value[i] + 1e-10) return false;
    }
    if (rs.B > F.t.back() && rs.integrated_cdf(rs.B) > F.at_or_past_end(rs.B, dist) + 1e-10) return false;
    return true;
}

ConstrainedGreedySolution consumer_expost(const Distribution& dist, const CostFunction& cost,
                                          const SolverOptions& opts) {
    return solve_expost(dist, cost, Objective::weighted(1.0, WelfareMode::expost), opts);
}

}  // namespace

double UnitElasticInfoStructure::cdf(double x) const {
    if (x < p_rs) return 0.0;
    if (x < B) return 1.0 - p_rs / x;
    return 1.0;
}

double UnitElasticInfoStructure::mean() const {
    return B > p_rs ? p_rs * (1.0 + std::log(B / p_rs)) : p_rs;
}

double UnitElasticInfoStructure::integrated_cdf(double t) const {
    if (t <= p_rs) return 0.0;
    double top = std::min(t, B);
    double v = (top - p_rs) - p_rs * std::log(top / p_rs);
    return t > B ? v + (t - B) : v;
}

Demand UnitElasticInfoStructure::demand() const {
    Demand d;
    double p = p_rs;
    double b = B;
    d.survival = [p, b](double y) {
        if (y <= p) return 1.0;
        if (y <= b) return p / y;
        return 0.0;
    };
    d.atoms = {{B, atom_mass()}};
    d.kinks = {p_rs};
    d.lo = 0.0;
    d.hi = std::max(B, p_rs);
    return d;
}

UnitElasticInfoStructure rs_information_structure(const Distribution& dist, double tol) {
    const double mean = dist.mean();
    if (!(mean > 0.0) || !std::isfinite(mean)) fail(ErrorKind::invalid_input, "information design needs a positive finite mean");
    double t_end = std::max(dist.upper(), mean);
    // Every other point is a point of the convex_order_check grid.
    IntegratedCdf F(dist, t_end, 2001);
    double lo = mean * 1e-9;
    double hi = mean;
    if (!rs_feasible(hi, mean, dist, F)) fail(ErrorKind::numeric_failure, "pooling at the mean fails the convex-order check");
    if (rs_feasible(lo, mean, dist, F)) hi = lo;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (rs_feasible(mid, mean, dist, F)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {hi, hi * std::exp(mean / hi - 1.0)};
}

Check convex_order_check(const UnitElasticInfoStructure& rs, const Distribution& dist) {
    Check c("convex_order");
    IntegratedCdf F(dist, std::max(dist.upper(), dist.mean()), 1001);
    auto test = [&](double t, double f) {
        double g = rs.integrated_cdf(t);
        if (g > f + 1e-9) {
            std::ostringstream w;
            w << "t=" << t << " G=" << g << " F=" << f;
            c.flag(w.str());
        }
    };
    for (std::size_t i = 0; i < F.t.size(); ++i) test(F.t[i], F.value[i]);
    if (rs.B > F.t.back()) test(rs.B, F.at_or_past_end(rs.B, dist));
    return c;
}

const char* to_string(JointMode m) {
    switch (m) {
    case JointMode::producer: return "producer";
    case JointMode::consumer_exante: return "consumer_exante";
    case JointMode::consumer_expost: return "consumer_expost";
    }
    return "?";
}

JointValue joint_values(const Distribution& dist, const CostFunction& cost, JointMode mode,
                        const SolverOptions& opts) {
    if (!cost.is_additive()) fail(ErrorKind::unsupported_cost, "joint design needs an additive cost");
    JointValue out;
    out.mode = mode;
    const double mean = dist.mean();

    if (mode == JointMode::producer) {
        // Pool everyone at the mean, then shift up by d with c_d'(d) = 1.
        out.shift = cost.distance_marginal_inverse(1.0);
        out.value = mean + out.shift - cost.distance_cost(out.shift);
        out.info_only = mean;
        out.manipulation_only = solve_producer_optimal(dist, cost, opts).outcome.objective_value;
        out.margin = out.value - std::max(out.info_only, out.manipulation_only);
        out.construction = "pool_then_shift";
        return out;
    }

    out.rs = rs_information_structure(dist);
    out.info_only = mean - out.rs.p_rs;
    if (mode == JointMode::consumer_exante) {
        // Under the unit-elastic structure the lowest optimal price is already
        // the bottom of its support, so no plan can lower it further.
        PricePoint pp = monopoly_price(out.rs.demand(), opts.pricing);
        double with_manipulation = out.rs.mean() - pp.price;
        out.value = out.info_only;
        out.manipulation_only = solve_consumer_optimal_exante(dist, cost, opts).outcome.objective_value;
        out.margin = with_manipulation - out.info_only;
        out.construction = "unit_elastic";
        return out;
    }

    ConstrainedGreedySolution manip = consumer_expost(dist, cost, opts);
    out.manipulation_only = manip.outcome.objective_value;

    // Spread the top atom along the unit-elastic curve, capped by the greedy map.
    const double p = out.rs.p_rs;
    const double B = out.rs.B;
    GreedyMap g(cost, p, Partials{0.0, 1.0, 0.0, -1.0});
    const double cap = g.lambda(B);
    auto gain = [&](double s) {
        double y = s > 0.0 ? std::min(cap, p / s) : cap;
        return (y - B) - cost(B, y);
    };
    double s_top = out.rs.atom_mass();
    double s_kink = std::min(s_top, p / cap);
    double spread = integrate(gain, 0.0, s_kink) + integrate(gain, s_kink, s_top);
    double value_spread = out.info_only + spread;

    // Pool each atom-forming segment of the manipulation optimum at its mean
    // before moving it: same final valuations, lower cost by convexity.
    double savings = 0.0;
    for (const auto& seg : manip.plan.segments) {
        if (!seg.is_constant()) continue;
        double m = dist.mass(seg.lo, seg.hi);
        if (!(m > 0.0)) continue;
        double t = std::get<Constant>(seg.rule).target;
        double centre = dist.partial_expectation(seg.lo, seg.hi) / m;
        double full = dist.integrate([&](double x) { return cost(x, t); }, seg.lo, seg.hi);
        savings += full - m * cost(centre, t);
    }
    double value_pool = out.manipulation_only + savings;

    out.value = std::max(value_spread, value_pool);
    out.construction = value_pool > value_spread ? "pool_segments" : "spread_atom";
    out.margin = out.value - std::max(out.info_only, out.manipulation_only);
    out.lower_bound = true;
    return out;
}

RegulationPolicy solve_regulation(const Distribution& dist, const CostFunction& cost,
                                  const SolverOptions& opts) {
    Baseline base(dist, opts.pricing);
    const double r = base.revenue();
    const double lo = dist.support_lo();

    auto firm_profit = [&](double t, double p) {
        double c = dist.integrate([&](double x) { return cost(x, p); }, t, p);
        return p * dist.survival(t) - c;
    };
    auto lower_of = [&](double p) {
        double top = producer_lower(dist, cost, p);
        if (firm_profit(top, p) < r - 1e-12) return -inf;
        if (firm_profit(p, p) >= r) return p;
        return find_root([&](double t) { return firm_profit(t, p) - r; }, top, p, 1e-14);
    };
    auto cs_of = [&](double p) {
        double t = lower_of(p);
        if (!std::isfinite(t)) return -inf;
        return dist.partial_expectation(t, inf) - p * dist.survival(t);
    };

    RegulationPolicy out;
    out.baseline_cs = dist.partial_expectation(base.price(), inf) - r;
    Maximum best = maximize_scan(cs_of, lo, base.price(), opts.grid, 6, 1e-12, opts.threads);
    if (!std::isfinite(best.value) || !(best.value > out.baseline_cs)) {
        out.p_star = base.price();
        out.p_lower = base.price();
        out.firm_plan = identity_plan(dist);
        out.cs_value = out.baseline_cs;
        out.status = Status::corner;
        out.diagnostic = "no candidate improves on no regulation";
        return out;
    }
    out.p_star = best.x;
    out.p_lower = lower_of(best.x);
    out.cs_value = best.value;
    out.firm_plan = interval_plan(dist, out.p_lower, out.p_star);
    out.indifference_residual = firm_profit(out.p_lower, out.p_star) - r;

    // The firm may shift only a top part [t, p*) of the allowed interval and
    // reprice, or not advertise.
    auto repriced = [&](double t) {
        TransportPlan plan = interval_plan(dist, t, out.p_star);
        PricePoint pp = monopoly_price(pushforward_survival(plan, dist), opts.pricing);
        double c = dist.integrate([&](double x) { return cost(x, out.p_star); }, t, out.p_star);
        return pp.profit - c;
    };
    double prescribed = repriced(out.p_lower);
    double best_alt = r;
    for (double t : linspace(out.p_lower, out.p_star, 200)) best_alt = std::max(best_alt, repriced(t));
    out.best_response_gap = best_alt - prescribed;
    return out;
}

Check twist_single_crossing(const TransportPlan& plan, const Distribution& dist, double x_q) {
    Check c("single_crossing");
    int backward_runs = 0;
    bool in_run = false;
    for (double x : linspace(x_q, std::nextafter(dist.upper(), x_q), 1000)) {
        bool backward = plan(x) - x < -1e-12;
        if (backward && !in_run) {
            ++backward_runs;
            if (backward_runs > 1) {
                std::ostringstream w;
                w << "second backward region starts at x=" << x;
                c.flag(w.str());
            }
        }
        in_run = backward;
    }
    return c;
}

TwistSolution solve_twist(const Distribution& dist, const CostFunction& cost, WelfareMode mode,
                          const Objective& objective, const SolverOptions& opts) {
    Baseline base(dist, opts.pricing);
    const double lo = dist.support_lo();
    const double p_hi = producer_price_cap(dist, cost, base);
    const MarketOutcome id = outcome_of(identity_plan(dist), dist, cost, objective, std::nullopt, opts.pricing);
    Partials start{};
    if (mode == WelfareMode::expost) start = objective.partials(id.welfare());

    auto q_of = [&](double p, double s) {
        double f = dist.survival(p);
        return f + s * (1.0 - f);
    };
    auto build = [&](double p, double q, const Partials& partials) {
        double x_q = std::max(dist.quantile_survival(q), lo);
        TransportPlan plan;
        plan.directional = false;
        if (x_q > lo) plan.segments.push_back({lo, x_q, Identity{}});
        std::vector<Segment> top;
        if (mode == WelfareMode::exante) {
            top = capped_top_segments(dist, x_q, p, q, [](double x) { return x; }, true, "identity", {});
        } else {
            GreedyMap g(cost, p, partials);
            top = capped_top_segments(dist, x_q, p, q, [g](double x) { return g.lambda(x); }, false, "greedy",
                                      {p, partials.ps, partials.cs, partials.cs_exante, partials.cost});
        }
        for (auto& s : top) plan.segments.push_back(std::move(s));
        return plan;
    };
    // Returns the objective value; partials iterate to a fixed point when
    // they depend on the plan.
    auto evaluate = [&](double p, double s, TwistSolution* keep) {
        if (!(p > 0.0)) return -inf;
        double q = q_of(p, s);
        if (!(q > 0.0)) return -inf;
        double x_q = std::max(dist.quantile_survival(q), lo);
        if (base.best_profit_below(x_q) >= p * q - 1e-9) return -inf;
        try {
            Partials partials = start;
            TransportPlan plan;
            MarketOutcome o;
            int iters = mode == WelfareMode::expost && !objective.constant_partials() ? opts.max_iter : 1;
            for (int it = 0; it < iters; ++it) {
                plan = build(p, q, partials);
                o = outcome_of(plan, dist, cost, objective, p);
                if (iters == 1) break;
                Partials fresh = objective.partials(o.welfare());
                double diff = std::max({std::abs(fresh.ps - partials.ps), std::abs(fresh.cs - partials.cs),
                                        std::abs(fresh.cs_exante - partials.cs_exante),
                                        std::abs(fresh.cost - partials.cost)});
                if (diff < 1e-8) break;
                if (it + 1 == iters) return -inf;
                partials = {opts.damping * fresh.ps + (1 - opts.damping) * partials.ps,
                            opts.damping * fresh.cs + (1 - opts.damping) * partials.cs,
                            opts.damping * fresh.cs_exante + (1 - opts.damping) * partials.cs_exante,
                            opts.damping * fresh.cost + (1 - opts.damping) * partials.cost};
            }
            if (keep) {
                keep->p_star = p;
                keep->q_star = q;
                keep->x_q = x_q;
                keep->plan = plan;
                keep->outcome = o;
            }
            return o.objective_value;
        } catch (const Error&) {
            return -inf;
        }
    };

    Box2 box{{std::max(lo, 1e-9), 0.0}, {p_hi, 1.0}};
    GridSearch2 found = grid_polish_2d([&](const Point2& z) { return evaluate(z[0], z[1], nullptr); },
                                       [&](const Point2& z) { return evaluate(z[0], z[1], nullptr); }, box,
                                       opts.grid2, opts.threads, opts.polish_iter);

    TwistSolution out;
    out.mode = mode;
    auto corner = [&](const std::string& why) {
        out.p_star = base.price();
        out.q_star = dist.survival(base.price());
        out.x_q = base.price();
        out.plan = identity_plan(dist);
        out.plan.directional = false;
        out.outcome = id;
        out.price_check = verify_target_price(demand_of(dist), out.p_star);
        out.status = Status::corner;
        out.diagnostic = why;
        return out;
    };
    if (!std::isfinite(found.grid_value)) return corner("no candidate target verified");
    if (!(found.value > id.objective_value)) return corner("no advertising is optimal");

    evaluate(found.x[0], found.x[1], &out);
    out.price_check = verify_target_price(pushforward_survival(out.plan, dist), out.p_star);
    if (!out.price_check.ok) {
        evaluate(found.grid_x[0], found.grid_x[1], &out);
        out.price_check = verify_target_price(pushforward_survival(out.plan, dist), out.p_star);
        if (!out.price_check.ok) return corner("target price failed verification");
        out.diagnostic = "polished target failed verification; grid optimum kept";
    }
    out.single_crossing = twist_single_crossing(out.plan, dist, out.x_q);
    return out;
}

UncertaintySolution solve_welfare_uncertainty(const Distribution& dist, const CostFunction& cost,
                                              double beta, UncertaintyMode mode,
                                              const SolverOptions& opts) {
    if (!(beta >= 0.0 && beta <= 1.0)) fail(ErrorKind::invalid_objective, "beta must lie in [0, 1]");
    UncertaintySolution out;
    out.mode = mode;
    out.beta = beta;
    if (mode == UncertaintyMode::maxmin) {
        IntervalSolution s = solve_consumer_optimal_exante(dist, cost, opts);
        out.p_star = s.p_star;
        out.p_lower = s.p_lower;
        out.q_star = dist.survival(s.p_lower);
        out.plan = s.plan;
        out.outcome = s.outcome;
        out.status = s.price_check.ok ? Status::ok : Status::infeasible;
        return out;
    }
    ConstrainedGreedySolution s = solve_expost(dist, cost, Objective::uncertainty_mix(beta), opts);
    out.p_star = s.p_star;
    out.q_star = s.q_star;
    out.p_lower = s.x_q;
    out.plan = s.plan;
    out.outcome = s.outcome;
    out.status = s.status;
    return out;
}

}  // namespace adplan
