#include "adplan/pricing.hpp"

#include "adplan/errors.hpp"
#include "adplan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

Demand demand_of(const Distribution& dist) {
    Demand d;
    d.survival = [dist](double y) { return dist.survival(y); };
    d.atoms = dist.atoms();
    d.lo = dist.support_lo();
    d.hi = dist.upper();
    return d;
}

PricePoint monopoly_price(const Demand& demand, const PricingOptions& options) {
    if (!demand.survival || !(demand.hi >= demand.lo) || !std::isfinite(demand.hi)) {
        fail(ErrorKind::invalid_input, "demand needs a survival function and a finite scan range");
    }
    auto profit = [&](double p) { return p * demand.survival(p); };

    std::vector<PricePoint> seen;
    int n = std::max(options.scan_points, 2);
    std::vector<double> grid = linspace(demand.lo, demand.hi, static_cast<std::size_t>(n));
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = profit(grid[i]);
        seen.push_back({grid[i], vals[i]});
    }
    for (const auto& atom : demand.atoms) {
        if (atom.location >= demand.lo && atom.location <= demand.hi) {
            seen.push_back({atom.location, profit(atom.location)});
        }
    }
    for (double k : demand.kinks) {
        if (k >= demand.lo && k <= demand.hi) seen.push_back({k, profit(k)});
    }

    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        bool left = i == 0 || vals[i] >= vals[i - 1];
        bool right = i + 1 == grid.size() || vals[i] >= vals[i + 1];
        if (left && right) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](std::size_t l, std::size_t r) { return vals[l] > vals[r]; });
    if (peaks.size() > 8) peaks.resize(8);
    for (std::size_t i : peaks) {
        if (grid.size() < 3 || !(demand.hi > demand.lo)) break;
        double l = grid[i == 0 ? 0 : i - 1];
        double r = grid[std::min(i + 1, grid.size() - 1)];
        Maximum m = maximize_bracket(profit, l, r, 52);
        seen.push_back({m.x, m.value});
    }

    double best = -inf;
    for (const auto& s : seen) best = std::max(best, s.profit);
    if (!(best > 0.0)) fail(ErrorKind::invalid_input, "demand is degenerate (no positive profit)");
    PricePoint out{inf, best};
    for (const auto& s : seen) {
        if (s.profit >= best - options.tie_tol && s.price < out.price) out = s;
    }
    return out;
}

PricePoint monopoly_price(const Distribution& dist, const PricingOptions& options) {
    return monopoly_price(demand_of(dist), options);
}

PriceCheck verify_target_price(const Demand& demand, double target, int scan_points,
                               double tie_tol) {
    PriceCheck out;
    out.target_profit = target * demand.survival(target);
    out.best_other_price = target;
    out.best_other_profit = -inf;
    double hi = std::max(demand.hi, target);
    std::vector<double> prices = linspace(demand.lo, hi, static_cast<std::size_t>(std::max(scan_points, 2)));
    for (const auto& atom : demand.atoms) prices.push_back(atom.location);
    for (double k : demand.kinks) prices.push_back(k);
    try {
        prices.push_back(monopoly_price(demand).price);
    } catch (const Error&) {
    }
    bool ok = true;
    const double near = 1e-7 * std::max(1.0, std::abs(target));
    for (double p : prices) {
        if (std::abs(p - target) <= near || p < 0.0) continue;
        double v = p * demand.survival(p);
        if (v > out.best_other_profit) {
            out.best_other_profit = v;
            out.best_other_price = p;
        }
        if (p > target && v > out.target_profit + tie_tol) ok = false;
        if (p < target && v >= out.target_profit - tie_tol) ok = false;
    }
    out.ok = ok && out.target_profit > 0.0;
    return out;
}

Baseline::Baseline(const Distribution& dist, const PricingOptions& options)
    : dist_(dist), monopoly_(monopoly_price(dist, options)) {
    grid_ = linspace(dist.support_lo(), dist.upper(), 4096);
    prefix_.resize(grid_.size());
    suffix_.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        double v = grid_[i] * dist.survival(grid_[i]);
        prefix_[i] = i == 0 ? v : std::max(prefix_[i - 1], v);
    }
    for (std::size_t i = grid_.size(); i-- > 0;) {
        double v = grid_[i] * dist.survival(grid_[i]);
        suffix_[i] = i + 1 == grid_.size() ? v : std::max(suffix_[i + 1], v);
    }
}

double Baseline::best_profit_below(double x) const {
    if (!(x > 0.0)) return -inf;
    double best = std::min(x, dist_.support_lo());
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
    auto idx = static_cast<std::size_t>(it - grid_.begin());
    if (idx > 0) best = std::max(best, prefix_[idx - 1]);
    if (monopoly_.price < x) best = std::max(best, monopoly_.profit);
    double limit = std::isfinite(x) ? x * dist_.survival(x) : 0.0;
    return std::max(best, limit);
}

double Baseline::best_profit_above(double x) const {
    double best = x * dist_.survival(x);
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    auto idx = static_cast<std::size_t>(it - grid_.begin());
    if (idx < grid_.size()) best = std::max(best, suffix_[idx]);
    if (monopoly_.price > x) best = std::max(best, monopoly_.profit);
    return best;
}

}  // namespace adplan
