#include "adplan/expost.hpp"

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

double sup_norm(const Partials& a, const Partials& b) {
    return std::max({std::abs(a.ps - b.ps), std::abs(a.cs - b.cs),
                     std::abs(a.cs_exante - b.cs_exante), std::abs(a.cost - b.cost)});
}

Partials blend(const Partials& fresh, const Partials& old, double w) {
    return {w * fresh.ps + (1 - w) * old.ps, w * fresh.cs + (1 - w) * old.cs,
            w * fresh.cs_exante + (1 - w) * old.cs_exante, w * fresh.cost + (1 - w) * old.cost};
}

FixedPoint iterate_partials(const Distribution& dist, const CostFunction& cost,
                            const Objective& objective, double p_star, double q_star,
                            double damping, int max_iter, Partials start, const Baseline& base) {
    if (!(damping > 0.0 && damping <= 1.0)) fail(ErrorKind::invalid_input, "damping must lie in (0, 1]");
    FixedPoint fp;
    Partials current = start;
    for (int it = 1; it <= max_iter; ++it) {
        fp.solution = build_constrained_greedy(dist, cost, p_star, q_star, current, objective, false, &base);
        Partials fresh = objective.partials(fp.solution.outcome.welfare());
        fp.residual = sup_norm(fresh, current);
        fp.iterations = it;
        fp.partials = current;
        if (fp.residual < 1e-8) {
            fp.converged = true;
            break;
        }
        current = blend(fresh, current, damping);
    }
    fp.solution.fixed_point_iters = fp.iterations;
    return fp;
}

ConstrainedGreedySolution identity_solution(const Distribution& dist, const CostFunction& cost,
                                            const Objective& objective, const Baseline& base,
                                            const SolverOptions& opts, std::string why) {
    ConstrainedGreedySolution s;
    s.p_star = base.price();
    s.q_star = dist.survival(base.price());
    s.x_q = base.price();
    s.x_lambda = base.price();
    s.plan = identity_plan(dist);
    s.outcome = outcome_of(s.plan, dist, cost, objective, std::nullopt, opts.pricing);
    s.price_check = verify_target_price(demand_of(dist), s.p_star);
    s.status = Status::corner;
    s.diagnostic = std::move(why);
    return s;
}

}  // namespace

GreedyMap::GreedyMap(CostFunction cost, double p_star, Partials partials)
    : cost_(std::move(cost)), p_star_(p_star), partials_(partials) {
    if (partials_.cs < 0.0 || !(partials_.cost < 0.0)) {
        fail(ErrorKind::invalid_objective, "greedy map needs dCS >= 0 and dC < 0");
    }
    ratio_ = partials_.cs / -partials_.cost;
    lambda_inv_ = p_star_ > 0.0
                      ? first_true([this](double t) { return lambda(t) >= p_star_; }, 0.0, p_star_, 1e-14)
                      : 0.0;
}

double GreedyMap::gamma(double x) const { return cost_.solve_marginal(x, ratio_); }

double GreedyMap::lambda(double x) const {
    double g = gamma(x);
    if (x >= p_star_) return g;
    double y = std::max(g, p_star_);
    double c = cost_(x, y);
    if (!std::isfinite(c)) return x;
    double v = partials_.ps * p_star_ + partials_.cs * (y - p_star_) +
               partials_.cs_exante * (x - p_star_) + partials_.cost * c;
    return v >= 0.0 ? y : x;
}

GreedyMap locally_greedy_map(const CostFunction& cost, double p_star, const Partials& partials) {
    return GreedyMap(cost, p_star, partials);
}

const char* to_string(Status s) {
    switch (s) {
    case Status::ok: return "ok";
    case Status::corner: return "corner";
    case Status::nonconverged: return "nonconverged";
    case Status::infeasible: return "infeasible";
    }
    return "?";
}

std::vector<Segment> capped_top_segments(const Distribution& dist, double from, double p_star,
                                         double q_star, const RealFn& base, bool base_is_identity,
                                         const std::string& base_name,
                                         const std::vector<double>& base_params) {
    std::vector<Segment> out;
    const double hi = dist.support_hi();
    if (!(from < hi)) return out;
    const double pq = p_star * q_star;
    auto cap = [dist, pq](double x) {
        double s = dist.survival(x);
        return s > 0.0 ? pq / s : inf;
    };
    // 0: floor at p_star, 1: base map, 2: unit-elastic cap
    auto cls = [&](double x) {
        double b = base(x);
        double u = cap(x);
        if (std::min(b, u) <= p_star) return 0;
        return b <= u ? 1 : 2;
    };

    double right = std::isfinite(hi) ? std::nextafter(hi, from) : std::max(dist.upper(), from + 1.0);
    std::vector<double> xs = linspace(from, right, 256);
    std::vector<std::pair<double, int>> starts{{from, cls(from)}};
    int prev = starts.front().second;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double l0 = xs[i - 1];
        for (int guard = 0; guard < 8 && cls(xs[i]) != prev; ++guard) {
            double l = l0;
            double r = xs[i];
            while (r - l > 1e-13 && r - l > 4e-16 * std::abs(r)) {
                double m = 0.5 * (l + r);
                if (cls(m) == prev) {
                    l = m;
                } else {
                    r = m;
                }
            }
            int c_at = cls(r);
            if (r - starts.back().first < 1e-12) {
                starts.back().second = c_at;
            } else {
                starts.push_back({r, c_at});
            }
            prev = c_at;
            l0 = r;
        }
    }

    auto rule_of = [&](int c) -> Rule {
        if (c == 0) return Constant{p_star};
        if (c == 1) {
            if (base_is_identity) return Identity{};
            return Curve{base, base_name, base_params};
        }
        return Curve{cap, "unit_elastic", {p_star, q_star}};
    };
    for (std::size_t k = 0; k < starts.size(); ++k) {
        if (k > 0 && starts[k].second == starts[k - 1].second) continue;
        double seg_hi = hi;
        for (std::size_t j = k + 1; j < starts.size(); ++j) {
            if (starts[j].second != starts[k].second) {
                seg_hi = starts[j].first;
                break;
            }
        }
        out.push_back({starts[k].first, seg_hi, rule_of(starts[k].second)});
    }
    return out;
}

ConstrainedGreedySolution build_constrained_greedy(const Distribution& dist,
                                                   const CostFunction& cost, double p_star,
                                                   double q_star, const Partials& partials,
                                                   const Objective& objective, bool verify,
                                                   const Baseline* base) {
    if (!(q_star > 0.0 && q_star <= 1.0)) fail(ErrorKind::invalid_input, "q* must lie in (0, 1]");
    std::optional<Baseline> own;
    if (!base) base = &own.emplace(dist);
    const double r = base->revenue();
    if (p_star * q_star < r - 1e-8) {
        std::ostringstream msg;
        msg << "p* q* = " << p_star * q_star << " is below the no-advertising profit " << r;
        fail(ErrorKind::infeasible_target, msg.str());
    }

    GreedyMap g(cost, p_star, partials);
    ConstrainedGreedySolution s;
    s.p_star = p_star;
    s.q_star = q_star;
    s.partials = partials;
    const double lo = dist.support_lo();
    s.x_q = std::max(dist.quantile_survival(q_star), lo);
    s.x_lambda = std::max(g.lambda_inv_at_pstar(), lo);

    auto& segs = s.plan.segments;
    if (s.x_q > lo) segs.push_back({lo, s.x_q, Identity{}});
    double top = std::max(s.x_q, s.x_lambda);
    if (s.x_lambda > s.x_q) segs.push_back({s.x_q, s.x_lambda, Constant{p_star}});
    auto lambda = [g](double x) { return g.lambda(x); };
    auto rest = capped_top_segments(dist, top, p_star, q_star, lambda, false, "greedy",
                                    {p_star, partials.ps, partials.cs, partials.cs_exante, partials.cost});
    for (auto& seg : rest) {
        if (!segs.empty() && seg.is_constant() && segs.back().is_constant()) {
            segs.back().hi = seg.hi;
        } else {
            segs.push_back(std::move(seg));
        }
    }

    if (verify) {
        s.price_check = verify_target_price(pushforward_survival(s.plan, dist), p_star);
        if (!s.price_check.ok) {
            std::ostringstream msg;
            msg << "price " << p_star << " is not implementable: deviation to "
                << s.price_check.best_other_price << " earns " << s.price_check.best_other_profit
                << " against " << s.price_check.target_profit;
            fail(ErrorKind::infeasible_target, msg.str());
        }
    }
    s.outcome = outcome_of(s.plan, dist, cost, objective, p_star);
    return s;
}

FixedPoint fixed_point_partials(const Distribution& dist, const CostFunction& cost,
                                const Objective& objective, double p_star, double q_star,
                                double damping, int max_iter) {
    Baseline base(dist);
    MarketOutcome id = outcome_of(identity_plan(dist), dist, cost, objective);
    FixedPoint fp = iterate_partials(dist, cost, objective, p_star, q_star, damping, max_iter,
                                     objective.partials(id.welfare()), base);
    if (!fp.converged) {
        std::ostringstream msg;
        msg << "fixed point did not converge in " << max_iter << " iterations (residual "
            << fp.residual << ")";
        fail(ErrorKind::non_convergence, msg.str());
    }
    int iters = fp.iterations;
    fp.solution = build_constrained_greedy(dist, cost, p_star, q_star, fp.partials, objective, true, &base);
    fp.solution.fixed_point_iters = iters;
    return fp;
}

ConstrainedGreedySolution solve_expost(const Distribution& dist, const CostFunction& cost,
                                       const Objective& objective, const SolverOptions& opts) {
    Baseline base(dist, opts.pricing);
    const double r = base.revenue();
    const double p_hi = std::max(producer_price_cap(dist, cost, base), r * (1 + 1e-9));
    const bool constant = objective.constant_partials();
    const MarketOutcome id = outcome_of(identity_plan(dist), dist, cost, objective, std::nullopt, opts.pricing);
    Partials start;
    try {
        start = objective.partials(id.welfare());
    } catch (const Error&) {
        if (constant) throw;
        start = Partials{};
    }

    auto q_of = [r](double p, double s) { return std::min(1.0, r / p + s * (1 - r / p)); };
    // Value of a candidate; `warm` carries partials between sequential calls.
    auto evaluate = [&](double p, double s, Partials* warm) {
        if (!(p >= r) || p <= 0.0) return -inf;
        double q = q_of(p, s);
        if (!(q > 0.0)) return -inf;
        double x_q = dist.quantile_survival(q);
        if (base.best_profit_below(x_q) >= p * q - 1e-9) return -inf;
        try {
            if (constant) {
                return build_constrained_greedy(dist, cost, p, q, start, objective, false, &base)
                    .outcome.objective_value;
            }
            FixedPoint fp = iterate_partials(dist, cost, objective, p, q, opts.damping, opts.max_iter,
                                             warm ? *warm : start, base);
            if (!fp.converged) return -inf;
            if (warm) *warm = fp.partials;
            return fp.solution.outcome.objective_value;
        } catch (const Error&) {
            return -inf;
        }
    };

    Partials warm = start;
    Box2 box{{r, 0.0}, {p_hi, 1.0}};
    GridSearch2 found = grid_polish_2d([&](const Point2& z) { return evaluate(z[0], z[1], nullptr); },
                                       [&](const Point2& z) { return evaluate(z[0], z[1], &warm); }, box,
                                       opts.grid2, opts.threads, opts.polish_iter);
    if (!std::isfinite(found.grid_value)) {
        return identity_solution(dist, cost, objective, base, opts, "no candidate target verified");
    }
    const double best = found.value;
    const Point2 x = found.x;
    const int search_iters = found.iterations;

    if (!(best > id.objective_value)) {
        return identity_solution(dist, cost, objective, base, opts, "no advertising is optimal");
    }

    auto finalize = [&](Point2 z) {
        double q = q_of(z[0], z[1]);
        ConstrainedGreedySolution sol;
        if (constant) {
            sol = build_constrained_greedy(dist, cost, z[0], q, start, objective, true, &base);
            sol.fixed_point_iters = 1;
        } else {
            Partials w = warm;
            FixedPoint fp = iterate_partials(dist, cost, objective, z[0], q, opts.damping, opts.max_iter, w, base);
            sol = build_constrained_greedy(dist, cost, z[0], q, fp.partials, objective, true, &base);
            sol.fixed_point_iters = fp.iterations;
            if (!fp.converged) {
                sol.status = Status::nonconverged;
                std::ostringstream msg;
                msg << "fixed point residual " << fp.residual << " after " << fp.iterations << " iterations";
                sol.diagnostic = msg.str();
            }
        }
        sol.search_iters = search_iters;
        return sol;
    };
    try {
        return finalize(x);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::infeasible_target) throw;
        try {
            auto sol = finalize(found.grid_x);
            sol.diagnostic = std::string("polished target failed verification: ") + e.what();
            return sol;
        } catch (const Error& e2) {
            if (e2.kind() != ErrorKind::infeasible_target) throw;
            return identity_solution(dist, cost, objective, base, opts, e2.what());
        }
    }
}

}  // namespace adplan
