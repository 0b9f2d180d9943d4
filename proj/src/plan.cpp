#include "adplan/plan.hpp"

#include "adplan/errors.hpp"
#include "adplan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Finite right end used when evaluating a segment that runs to +inf.
double segment_right(const Segment& seg, const Distribution& dist) {
    return std::isfinite(seg.hi) ? seg.hi : std::max(dist.upper(), seg.lo);
}

std::string point(double x, double t) {
    std::ostringstream s;
    s << "T(" << x << ")=" << t;
    return s.str();
}

}  // namespace

double Segment::apply(double x) const {
    if (const auto* c = std::get_if<Constant>(&rule)) return c->target;
    if (const auto* c = std::get_if<Curve>(&rule)) return c->map(x);
    return x;
}

double TransportPlan::operator()(double x) const {
    for (const auto& seg : segments) {
        if (x >= seg.lo && x < seg.hi) return seg.apply(x);
    }
    // The closed right end of a bounded support belongs to the last segment.
    if (!segments.empty() && x == segments.back().hi) return segments.back().apply(x);
    return x;
}

std::string TransportPlan::serialize() const {
    std::ostringstream s;
    for (const auto& seg : segments) {
        s << "segment " << format_real(seg.lo) << " " << format_real(seg.hi) << " ";
        if (const auto* c = std::get_if<Constant>(&seg.rule)) {
            s << "constant " << format_real(c->target);
        } else if (const auto* c = std::get_if<Curve>(&seg.rule)) {
            s << "curve " << c->name;
            for (double p : c->params) s << " " << format_real(p);
        } else {
            s << "identity";
        }
        s << "\n";
    }
    return s.str();
}

TransportPlan identity_plan(const Distribution& dist) {
    TransportPlan plan;
    plan.segments.push_back({dist.support_lo(), dist.support_hi(), Identity{}});
    return plan;
}

TransportPlan interval_plan(const Distribution& dist, double p_lower, double p_star) {
    double lo = dist.support_lo();
    double hi = dist.support_hi();
    p_lower = std::max(p_lower, lo);
    if (!(p_lower < p_star) || !(p_lower < hi)) return identity_plan(dist);
    TransportPlan plan;
    if (p_lower > lo) plan.segments.push_back({lo, p_lower, Identity{}});
    double top = std::min(p_star, hi);
    plan.segments.push_back({p_lower, top, Constant{p_star}});
    if (top < hi) plan.segments.push_back({top, hi, Identity{}});
    return plan;
}

TransportPlan shift_plan(const Distribution& dist, double d) {
    if (d == 0.0) return identity_plan(dist);
    TransportPlan plan;
    plan.segments.push_back(
        {dist.support_lo(), dist.support_hi(), Curve{[d](double x) { return x + d; }, "shift", {d}}});
    return plan;
}

TransportPlan scale_plan(const Distribution& dist, double factor) {
    if (factor == 1.0) return identity_plan(dist);
    TransportPlan plan;
    plan.segments.push_back({dist.support_lo(), dist.support_hi(),
                             Curve{[factor](double x) { return factor * x; }, "scale", {factor}}});
    return plan;
}

double segment_threshold(const Segment& seg, double y, const Distribution& dist) {
    if (const auto* c = std::get_if<Constant>(&seg.rule)) return c->target >= y ? seg.lo : seg.hi;
    if (seg.is_identity()) return y <= seg.lo ? seg.lo : (y < seg.hi ? y : seg.hi);
    const auto& g = std::get<Curve>(seg.rule).map;
    if (g(seg.lo) >= y) return seg.lo;
    double right = segment_right(seg, dist);
    if (!std::isfinite(seg.hi)) {
        int grow = 0;
        while (g(right) < y && grow++ < 60) right = 2.0 * right + 1.0;
    }
    if (g(right) < y) return seg.hi;
    return first_true([&](double x) { return g(x) >= y; }, seg.lo, right, 1e-13);
}

Demand pushforward_survival(const TransportPlan& plan, const Distribution& dist) {
    for (std::size_t i = 1; i < plan.segments.size(); ++i) {
        const auto& a = plan.segments[i - 1];
        const auto& b = plan.segments[i];
        if (b.apply(b.lo) < a.apply(std::nextafter(a.hi, a.lo)) - 1e-12) {
            fail(ErrorKind::invalid_plan, "plan is not monotone at x=" + format_real(b.lo));
        }
    }
    Demand d;
    d.survival = [plan, dist](double y) {
        double s = 0.0;
        for (const auto& seg : plan.segments) {
            s += dist.mass(segment_threshold(seg, y, dist), seg.hi);
        }
        return std::clamp(s, 0.0, 1.0);
    };
    double lo = inf;
    double hi = 0.0;
    for (const auto& seg : plan.segments) {
        double right = segment_right(seg, dist);
        double v_lo = seg.apply(seg.lo);
        double v_hi = seg.apply(right);
        lo = std::min(lo, v_lo);
        if (std::isfinite(v_hi)) hi = std::max(hi, v_hi);
        if (const auto* c = std::get_if<Constant>(&seg.rule)) {
            double m = dist.mass(seg.lo, seg.hi);
            if (m > 0.0) d.atoms.push_back({c->target, m});
        } else {
            d.kinks.push_back(v_lo);
            for (const auto& atom : dist.atoms()) {
                if (atom.location >= seg.lo && atom.location < seg.hi) {
                    d.atoms.push_back({seg.apply(atom.location), atom.mass});
                }
            }
        }
    }
    d.lo = std::max(0.0, lo);
    d.hi = std::max(hi, d.lo);
    return d;
}

double buyer_valuation_mass(const TransportPlan& plan, const Distribution& dist, double price) {
    double total = 0.0;
    for (const auto& seg : plan.segments) {
        double x0 = segment_threshold(seg, price, dist);
        if (!(x0 < seg.hi)) continue;
        if (const auto* c = std::get_if<Constant>(&seg.rule)) {
            total += c->target * dist.mass(x0, seg.hi);
        } else if (seg.is_identity()) {
            total += dist.partial_expectation(x0, seg.hi);
        } else {
            total += dist.integrate(std::get<Curve>(seg.rule).map, x0, seg.hi);
        }
    }
    return total;
}

MarketOutcome outcome_of(const TransportPlan& plan, const Distribution& dist,
                         const CostFunction& cost, const Objective& objective,
                         std::optional<double> price, const PricingOptions& pricing) {
    MarketOutcome out;
    out.price = price ? *price : monopoly_price(pushforward_survival(plan, dist), pricing).price;
    const double p = out.price;
    for (const auto& seg : plan.segments) {
        double m_seg = dist.mass(seg.lo, seg.hi);
        if (!seg.is_identity() && m_seg > 0.0) {
            double c_lo = cost(seg.lo, seg.apply(seg.lo));
            bool lo_charged = seg.lo > dist.support_lo() || dist.survival(seg.lo) > 0.0;
            if (!std::isfinite(c_lo) && lo_charged && dist.density(seg.lo) > 0.0) {
                fail(ErrorKind::infeasible_plan,
                     "cost is infinite near x=" + format_real(seg.lo) + " on a segment with mass " +
                         format_real(m_seg));
            }
            try {
                out.total_cost += dist.integrate(
                    [&](double x) { return cost(x, seg.apply(x)); }, seg.lo, seg.hi);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::numeric_failure) throw;
                fail(ErrorKind::infeasible_plan, std::string("cost integral failed: ") + e.what());
            }
        }

        double x0 = segment_threshold(seg, p, dist);
        if (!(x0 < seg.hi)) continue;
        double m_buy = dist.mass(x0, seg.hi);
        double xm = dist.partial_expectation(x0, seg.hi);
        double csa = xm - p * m_buy;
        out.quantity += m_buy;
        out.cs_exante += csa;
        if (const auto* c = std::get_if<Constant>(&seg.rule)) {
            out.cs_expost += (c->target - p) * m_buy;
        } else if (seg.is_identity()) {
            out.cs_expost += csa;
        } else {
            const auto& g = std::get<Curve>(seg.rule).map;
            out.cs_expost += dist.integrate([&](double x) { return g(x) - p; }, x0, seg.hi);
        }
    }
    out.quantity = std::clamp(out.quantity, 0.0, 1.0);
    out.ps = p * out.quantity;
    out.objective_value = objective.value(out.welfare());
    return out;
}

CheckReport validate_plan(const TransportPlan& plan, const Distribution& dist) {
    Check partition{"partition"};
    Check monotone{"monotone"};
    Check directional{"directional"};
    Check mean{"finite_mean"};
    Check atoms{"atomless_initial"};
    Check density{"positive_density"};

    const auto& segs = plan.segments;
    if (segs.empty()) {
        partition.flag("no segments");
    } else {
        if (std::abs(segs.front().lo - dist.support_lo()) > 1e-12) {
            partition.flag("first segment starts at " + format_real(segs.front().lo));
        }
        bool last_ok = std::isinf(dist.support_hi()) ? std::isinf(segs.back().hi)
                                                     : std::abs(segs.back().hi - dist.support_hi()) <= 1e-12;
        if (!last_ok) partition.flag("last segment ends at " + format_real(segs.back().hi));
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (!(segs[i].hi > segs[i].lo)) partition.flag("empty segment at " + format_real(segs[i].lo));
            if (i > 0 && segs[i].lo != segs[i - 1].hi) partition.flag("gap at " + format_real(segs[i].lo));
        }
    }

    std::vector<double> xs = linspace(dist.support_lo(), dist.upper(), 1000);
    for (const auto& seg : segs) {
        if (!seg.is_curve()) continue;
        double right = segment_right(seg, dist);
        for (double x : linspace(seg.lo, std::nextafter(right, seg.lo), 256)) xs.push_back(x);
    }
    for (const auto& seg : segs) {
        xs.push_back(seg.lo);
        if (std::isfinite(seg.hi)) xs.push_back(std::nextafter(seg.hi, seg.lo));
    }
    std::sort(xs.begin(), xs.end());
    double prev_t = -inf;
    double prev_x = -inf;
    for (double x : xs) {
        double t = plan(x);
        if (t < prev_t - 1e-12) monotone.flag(point(prev_x, prev_t) + " > " + point(x, t));
        if (plan.directional && t < x - 1e-12) directional.flag(point(x, t));
        prev_t = t;
        prev_x = x;
    }

    try {
        double m = buyer_valuation_mass(plan, dist, 0.0);
        if (!std::isfinite(m)) mean.flag("pushforward mean is not finite");
    } catch (const Error& e) {
        mean.flag(e.what());
    }
    if (dist.has_atoms()) {
        atoms.note("initial distribution has atoms; only deterministic maps are represented");
    }
    for (const auto& gap : dist.density_gaps()) {
        density.note("density vanishes on [" + format_real(gap.first) + ", " +
                     format_real(gap.second) + ")");
    }

    CheckReport report;
    report.checks = {partition, monotone, directional, mean, atoms, density};
    return report;
}

}  // namespace adplan
