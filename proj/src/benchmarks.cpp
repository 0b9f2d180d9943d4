#include "adplan/benchmarks.hpp"

#include "adplan/errors.hpp"
#include "adplan/exante.hpp"
#include "adplan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Demand shifted_demand(const Distribution& dist, double d) {
    Demand dem;
    dem.survival = [dist, d](double p) { return dist.survival(p - d); };
    for (const auto& a : dist.atoms()) dem.atoms.push_back({a.location + d, a.mass});
    dem.lo = dist.support_lo() + d;
    dem.hi = dist.upper() + d;
    return dem;
}

SweepRow row_of(const std::string& family, double param, const std::string& regime,
                const MarketOutcome& o, Status status) {
    SweepRow r;
    r.family = family;
    r.param = param;
    r.regime = regime;
    r.price = o.price;
    r.quantity = o.quantity;
    r.ps = o.ps;
    r.cs_exante = o.cs_exante;
    r.cs_expost = o.cs_expost;
    r.total_cost = o.total_cost;
    r.status = status;
    return r;
}

Status status_of(const IntervalSolution& s) {
    if (!s.price_check.ok) return Status::infeasible;
    bool identity = s.plan.segments.size() == 1 && s.plan.segments.front().is_identity();
    return identity ? Status::corner : Status::ok;
}

const SweepRow* find_row(const std::vector<SweepRow>& rows, double param, const std::string& regime) {
    for (const auto& r : rows) {
        if (r.param == param && r.regime == regime) return &r;
    }
    return nullptr;
}

void record(Check& c, bool ok, const std::string& witness, bool soft) {
    if (ok) return;
    if (soft) {
        c.note("not observed: " + witness);
    } else {
        c.flag(witness);
    }
}

}  // namespace

UniformSolution solve_uniform_additive(const Distribution& dist, const CostFunction& cost,
                                       UniformGoal goal, const SolverOptions& opts) {
    if (!cost.is_additive()) fail(ErrorKind::unsupported_cost, "uniform shifts need an additive cost");
    const double mean = dist.mean();
    auto price_at = [&](double d) { return monopoly_price(shifted_demand(dist, d), opts.pricing); };
    auto value = [&](double d) {
        PricePoint pp = price_at(d);
        if (goal == UniformGoal::producer) return pp.profit - cost.distance_cost(d);
        double p = pp.price;
        double csa = dist.partial_expectation(p - d, inf) - p * dist.survival(p - d);
        return csa - cost.distance_cost(d);
    };

    double d_max = 1.0;
    for (int i = 0; i < 60 && cost.distance_cost(d_max) < mean + d_max; ++i) d_max *= 2.0;
    Maximum best = maximize_scan(value, 0.0, d_max, 128, 6, 1e-12, opts.threads);
    if (value(0.0) >= best.value - 1e-12) best = {0.0, value(0.0)};

    UniformSolution s;
    s.shift = best.x;
    s.price = price_at(best.x).price;
    s.plan = shift_plan(dist, best.x);
    Objective obj = Objective::weighted(goal == UniformGoal::producer ? 0.0 : 1.0, WelfareMode::exante);
    s.outcome = outcome_of(s.plan, dist, cost, obj, s.price, opts.pricing);
    double m = cost.distance_marginal(best.x);
    s.foc_residuals = {dist.survival(s.price - best.x) - m, s.price * dist.density(s.price - best.x) - m};
    return s;
}

UniformSolution solve_uniform_multiplicative(const Distribution& dist, const CostFunction& cost,
                                             const RealFn& A_inverse, const SolverOptions& opts) {
    if (cost.is_additive()) fail(ErrorKind::unsupported_cost, "scaling needs a multiplicative cost");
    Baseline base(dist, opts.pricing);
    const double r = base.revenue();
    double hi = 2.0;
    for (int i = 0; cost.psi_prime(hi) < r; ++i) {
        if (i > 200 || !std::isfinite(hi)) fail(ErrorKind::invalid_cost, "psi' never reaches r^M");
        hi = 1.0 + 2.0 * (hi - 1.0);
    }
    double t = find_root([&](double u) { return cost.psi_prime(u) - r; }, 1.0, hi, 1e-15);

    UniformSolution s;
    s.factor = t;
    s.shift = A_inverse ? A_inverse(t) : t - 1.0;
    s.price = t * base.price();
    s.plan = scale_plan(dist, t);
    s.outcome = outcome_of(s.plan, dist, cost, Objective::weighted(0.0, WelfareMode::exante), s.price,
                           opts.pricing);
    return s;
}

const char* to_string(SweepFamily f) {
    switch (f) {
    case SweepFamily::beta_alpha: return "beta_alpha";
    case SweepFamily::exponential_lambda: return "exponential_lambda";
    case SweepFamily::cost_scale_a: return "cost_scale_a";
    }
    return "?";
}

SweepFamily sweep_family_from(const std::string& name) {
    if (name == "beta_alpha") return SweepFamily::beta_alpha;
    if (name == "exponential_lambda") return SweepFamily::exponential_lambda;
    if (name == "cost_scale_a") return SweepFamily::cost_scale_a;
    fail(ErrorKind::invalid_input, "unknown sweep family: " + name);
}

std::vector<SweepRow> run_comparison_sweep(SweepFamily family, const std::vector<double>& values,
                                           const CostFunction& cost, const SolverOptions& opts) {
    static const char* regimes[] = {"no_ads", "uniform_producer", "flexible_producer", "flexible_consumer"};
    const std::string fam = to_string(family);
    std::vector<SweepRow> rows(values.size() * 4);
    SolverOptions inner = opts;
    inner.threads = 1;
    parallel_for(rows.size(), opts.threads, [&](std::size_t k) {
        double v = values[k / 4];
        std::string regime = regimes[k % 4];
        try {
            Distribution dist = family == SweepFamily::beta_alpha           ? Distribution::beta(v, 2.0)
                                : family == SweepFamily::exponential_lambda ? Distribution::exponential(v)
                                                                            : Distribution::uniform(0, 1);
            CostFunction c = family == SweepFamily::cost_scale_a ? CostFunction::additive_power(v, 2.0) : cost;
            Objective producer = Objective::weighted(0.0, WelfareMode::exante);
            switch (k % 4) {
            case 0:
                rows[k] = row_of(fam, v, regime, outcome_of(identity_plan(dist), dist, c, producer), Status::ok);
                break;
            case 1:
                rows[k] = row_of(fam, v, regime,
                                 solve_uniform_additive(dist, c, UniformGoal::producer, inner).outcome, Status::ok);
                break;
            case 2: {
                auto s = solve_producer_optimal(dist, c, inner);
                rows[k] = row_of(fam, v, regime, s.outcome, status_of(s));
                break;
            }
            default: {
                auto s = solve_consumer_optimal_exante(dist, c, inner);
                rows[k] = row_of(fam, v, regime, s.outcome, status_of(s));
                break;
            }
            }
        } catch (const Error& e) {
            rows[k] = SweepRow{};
            rows[k].family = fam;
            rows[k].param = v;
            rows[k].regime = regime;
            rows[k].status = e.kind() == ErrorKind::non_convergence ? Status::nonconverged : Status::infeasible;
            rows[k].diagnostic = e.what();
        }
    });
    return rows;
}

double targeted_to_uniform_ratio(const std::vector<SweepRow>& rows, double param) {
    const SweepRow* m = find_row(rows, param, "no_ads");
    const SweepRow* u = find_row(rows, param, "uniform_producer");
    const SweepRow* f = find_row(rows, param, "flexible_producer");
    if (!m || !u || !f) fail(ErrorKind::invalid_input, "sweep lacks a regime for this parameter");
    return (f->price - m->price) / (u->price - m->price);
}

CheckReport sweep_orderings(const std::vector<SweepRow>& rows) {
    Check prices("prices_increase");
    Check gain("consumer_gain");
    Check ratio("ratio_increasing");
    std::map<std::string, std::vector<double>> params;
    for (const auto& r : rows) {
        auto& v = params[r.family];
        if (std::find(v.begin(), v.end(), r.param) == v.end()) v.push_back(r.param);
    }
    for (auto& [family, values] : params) {
        bool soft = family == "beta_alpha";
        std::sort(values.begin(), values.end());
        std::vector<SweepRow> fam;
        for (const auto& r : rows) {
            if (r.family == family) fam.push_back(r);
        }
        double last_ratio = -inf;
        for (double v : values) {
            const SweepRow* m = find_row(fam, v, "no_ads");
            const SweepRow* u = find_row(fam, v, "uniform_producer");
            const SweepRow* f = find_row(fam, v, "flexible_producer");
            const SweepRow* c = find_row(fam, v, "flexible_consumer");
            std::ostringstream w;
            w << family << "=" << v;
            if (!m || !u || !f || !c) {
                prices.flag(w.str() + " missing regime");
                continue;
            }
            record(prices, m->price <= u->price + 1e-9 && u->price < f->price, w.str(), soft);
            record(gain, c->price < m->price && c->cs_exante > m->cs_exante, w.str(), soft);
            if (family == "cost_scale_a") {
                double q = (f->price - m->price) / (u->price - m->price);
                record(ratio, q > last_ratio, w.str() + " ratio " + format_real(q), false);
                last_ratio = q;
            }
        }
    }
    CheckReport rep;
    rep.checks = {prices, gain, ratio};
    return rep;
}

}  // namespace adplan
