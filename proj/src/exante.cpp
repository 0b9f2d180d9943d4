#include "adplan/exante.hpp"

#include "adplan/errors.hpp"
#include "adplan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Lowest p_lower that keeps p_star * survival(p_lower) >= r.
double binding_lower(const Distribution& dist, double r, double p_star) {
    if (!(p_star > 0.0) || r / p_star > 1.0) return -inf;
    return dist.quantile_survival(r / p_star);
}

IntervalSolution identity_corner(const Distribution& dist, const CostFunction& cost,
                                 const Objective& objective, const Baseline& base,
                                 const SolverOptions& opts) {
    IntervalSolution s;
    s.p_star = base.price();
    s.p_lower = base.price();
    s.plan = identity_plan(dist);
    s.binding = Binding::corner;
    s.outcome = outcome_of(s.plan, dist, cost, objective, std::nullopt, opts.pricing);
    s.price_check = verify_target_price(demand_of(dist), s.p_star);
    return s;
}

IntervalSolution finish(const Distribution& dist, const CostFunction& cost,
                        const Objective& objective, double p_lower, double p_star, Binding binding, double residual,
                        const SolverOptions& opts) {
    IntervalSolution s;
    s.p_star = p_star;
    s.p_lower = std::max(p_lower, dist.support_lo());
    s.plan = interval_plan(dist, s.p_lower, p_star);
    s.binding = binding;
    s.binding_residual = residual;
    s.foc = interval_foc(dist, cost, s.p_lower, p_star);
    s.price_check = verify_target_price(pushforward_survival(s.plan, dist), p_star);
    std::optional<double> price;
    if (s.price_check.ok) price = p_star;
    s.outcome = outcome_of(s.plan, dist, cost, objective, price, opts.pricing);
    return s;
}

double identity_value(const Distribution& dist, const Objective& objective, const Baseline& base) {
    Welfare w = interval_welfare(dist, CostFunction::additive_power(1.0, 2.0), base.price(),
                                 base.price());
    return objective.value(w);
}

}  // namespace

const char* to_string(Binding b) {
    switch (b) {
    case Binding::foc: return "foc";
    case Binding::upward_deviation: return "upward_deviation";
    case Binding::corner: return "corner";
    }
    return "?";
}

Welfare interval_welfare(const Distribution& dist, const CostFunction& cost, double p_lower,
                         double p_star) {
    p_lower = std::clamp(p_lower, dist.support_lo(), std::max(p_star, dist.support_lo()));
    Welfare w;
    double buyers = dist.survival(p_lower);
    w.ps = p_star * buyers;
    w.cs_exante = dist.partial_expectation(p_lower, inf) - w.ps;
    w.cs_expost = dist.partial_expectation(p_star, inf) - p_star * dist.survival(p_star);
    if (p_lower < p_star && dist.mass(p_lower, p_star) > 0.0) {
        if (!std::isfinite(cost(p_lower, p_star)) && dist.density(p_lower) > 0.0) {
            w.cost = inf;
        } else {
            try {
                w.cost = dist.integrate([&](double x) { return cost(x, p_star); }, p_lower, p_star);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::numeric_failure) throw;
                w.cost = inf;
            }
        }
    }
    return w;
}

FocResiduals interval_foc(const Distribution& dist, const CostFunction& cost, double p_lower,
                          double p_star) {
    FocResiduals r;
    double marginal = 0.0;
    if (p_lower < p_star) {
        try {
            marginal = dist.integrate([&](double x) { return cost.dy(x, p_star); }, p_lower, p_star);
        } catch (const Error&) {
            marginal = inf;
        }
    }
    r.upper = dist.survival(p_lower) - marginal;
    r.lower = cost(p_lower, p_star) - p_star;
    return r;
}

double producer_lower(const Distribution& dist, const CostFunction& cost, double p) {
    double lo = dist.support_lo();
    if (p <= lo) return lo;
    if (cost(lo, p) <= p) return lo;
    return find_root([&](double x) { return cost(x, p) - p; }, lo, p, 1e-14);
}

// Candidates extend past the support when manipulation is cheap.
double producer_price_cap(const Distribution& dist, const CostFunction& cost, const Baseline& base) {
    double p_hi = std::max(dist.quantile_survival(1e-4), base.price());
    for (int i = 0; i < 80; ++i) {
        double pl = producer_lower(dist, cost, p_hi);
        if (p_hi * dist.survival(pl) < base.revenue()) break;
        p_hi *= 1.5;
    }
    return p_hi;
}

IntervalSolution solve_producer_optimal(const Distribution& dist, const CostFunction& cost,
                                        const SolverOptions& opts) {
    Baseline base(dist, opts.pricing);
    Objective obj = Objective::weighted(0.0, WelfareMode::exante);
    auto value = [&](double p) {
        Welfare w = interval_welfare(dist, cost, producer_lower(dist, cost, p), p);
        return w.ps - w.cost;
    };
    double p_hi = producer_price_cap(dist, cost, base);
    Maximum best = maximize_scan(value, dist.support_lo(), p_hi, opts.grid, 6, 1e-12, opts.threads);
    if (!(best.value > base.revenue())) return identity_corner(dist, cost, obj, base, opts);
    double pl = producer_lower(dist, cost, best.x);
    Binding b = pl <= dist.support_lo() ? Binding::corner : Binding::foc;
    double residual = b == Binding::foc ? cost(pl, best.x) - best.x : 0.0;
    return finish(dist, cost, obj, pl, best.x, b, residual, opts);
}

IntervalSolution solve_consumer_optimal_exante(const Distribution& dist, const CostFunction& cost,
                                               const SolverOptions& opts) {
    Baseline base(dist, opts.pricing);
    Objective obj = Objective::weighted(1.0, WelfareMode::exante);
    const double r = base.revenue();
    auto value = [&](double p) {
        double pl = binding_lower(dist, r, p);
        if (!std::isfinite(pl)) return -inf;
        Welfare w = interval_welfare(dist, cost, std::min(pl, p), p);
        return w.cs_exante - w.cost;
    };
    double a = std::max(dist.support_lo(), r);
    Maximum best = maximize_scan(value, a, base.price(), opts.grid, 6, 1e-12, opts.threads);
    double v0 = identity_value(dist, obj, base);
    if (!(best.value > v0) || best.x >= base.price()) return identity_corner(dist, cost, obj, base, opts);
    double pl = std::min(binding_lower(dist, r, best.x), best.x);
    double residual = best.x * dist.survival(pl) - r;
    return finish(dist, cost, obj, pl, best.x, Binding::upward_deviation, residual, opts);
}

IntervalSolution solve_weighted_exante(const Distribution& dist, const CostFunction& cost,
                                       double alpha, const SolverOptions& opts) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorKind::invalid_objective, "alpha must lie in [0, 1]");
    Baseline base(dist, opts.pricing);
    Objective obj = Objective::weighted(alpha, WelfareMode::exante);
    const double r = base.revenue();
    const double lo = dist.support_lo();

    auto foc_lower = [&](double p) {
        auto g = [&](double x) { return alpha * (x - p) + (1 - alpha) * p - cost(x, p); };
        if (g(lo) >= 0.0) return lo;
        if (g(p) <= 0.0) return p;
        return find_root(g, lo, p, 1e-14);
    };
    // Returns p_lower, with `bound` set when the deviation constraint pins it.
    auto lower_of = [&](double p, bool* bound) {
        double pb = binding_lower(dist, r, p);
        double pf = foc_lower(p);
        if (bound) *bound = pb < pf;
        return std::min({pf, pb, p});
    };
    auto value = [&](double p) {
        if (!std::isfinite(binding_lower(dist, r, p))) return -inf;
        return obj.value(interval_welfare(dist, cost, lower_of(p, nullptr), p));
    };

    double a = std::max(lo, r);
    double p_hi = producer_price_cap(dist, cost, base);
    Maximum best = maximize_scan(value, a, p_hi, opts.grid, 6, 1e-12, opts.threads);
    if (!(best.value > identity_value(dist, obj, base))) return identity_corner(dist, cost, obj, base, opts);

    bool bound = false;
    double pl = lower_of(best.x, &bound);
    Binding b = bound ? Binding::upward_deviation : (pl <= lo ? Binding::corner : Binding::foc);
    double residual = 0.0;
    if (b == Binding::upward_deviation) {
        residual = best.x * dist.survival(pl) - r;
    } else if (b == Binding::foc) {
        residual = alpha * (pl - best.x) + (1 - alpha) * best.x - cost(pl, best.x);
    }
    return finish(dist, cost, obj, pl, best.x, b, residual, opts);
}

IntervalSolution solve_interval_general(const Distribution& dist, const CostFunction& cost,
                                        const Objective& objective, const SolverOptions& opts) {
    Baseline base(dist, opts.pricing);
    const double r = base.revenue();
    const double lo = dist.support_lo();

    auto inner = [&](double p) {
        double pb = binding_lower(dist, r, p);
        if (!std::isfinite(pb)) return Maximum{p, -inf};
        double top = std::min(p, pb);
        auto f = [&](double pl) { return objective.value(interval_welfare(dist, cost, pl, p)); };
        if (!(top > lo)) return Maximum{lo, f(lo)};
        return maximize_scan(f, lo, top, 64, 3);
    };
    auto outer = [&](double p) { return inner(p).value; };

    double a = std::max(lo, r);
    double p_hi = producer_price_cap(dist, cost, base);
    Maximum best = maximize_scan(outer, a, p_hi, std::min(opts.grid, 128), 4, 1e-12, opts.threads);
    if (!(best.value > identity_value(dist, objective, base))) {
        return identity_corner(dist, cost, objective, base, opts);
    }
    Maximum in = inner(best.x);
    double pb = binding_lower(dist, r, best.x);
    bool bound = in.x >= std::min(best.x, pb) - 1e-9 && pb < best.x;
    Binding b = bound ? Binding::upward_deviation : (in.x <= lo ? Binding::corner : Binding::foc);
    double residual = b == Binding::upward_deviation ? best.x * dist.survival(in.x) - r : 0.0;
    return finish(dist, cost, objective, in.x, best.x, b, residual, opts);
}

}  // namespace adplan
