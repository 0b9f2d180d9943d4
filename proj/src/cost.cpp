#include "adplan/cost.hpp"

#include "adplan/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Smallest d >= 0 with g(d) = v for increasing g with g(0) <= v.
double invert_increasing(const RealFn& g, double v) {
    double hi = 1.0;
    int grow = 0;
    while (g(hi) < v) {
        hi *= 2.0;
        if (++grow > 200) fail(ErrorKind::numeric_failure, "marginal cost never reaches target");
    }
    return find_root([&](double d) { return g(d) - v; }, 0.0, hi, 1e-14);
}

std::string point(double x, double y) {
    std::ostringstream s;
    s << "(x=" << x << ", y=" << y << ")";
    return s.str();
}

}  // namespace

CostFunction CostFunction::additive_power(double a, double k) {
    if (!(a > 0.0) || !(k >= 1.0) || !std::isfinite(a) || !std::isfinite(k)) {
        fail(ErrorKind::invalid_cost, "additive_power needs a > 0 and k >= 1");
    }
    CostFunction c;
    c.kind_ = Kind::additive_power;
    c.a_ = a;
    c.k_ = k;
    std::ostringstream s;
    s << "additive_power(a=" << a << ",k=" << k << ")";
    c.name_ = s.str();
    return c;
}

CostFunction CostFunction::additive_general(RealFn c_d, RealFn c_d_prime, std::string name) {
    if (!c_d) fail(ErrorKind::invalid_cost, "additive_general needs a distance cost");
    if (!c_d_prime) fail(ErrorKind::unsupported_cost, "additive_general needs a derivative handle");
    CostFunction c;
    c.kind_ = Kind::additive_general;
    c.f_ = std::move(c_d);
    c.fp_ = std::move(c_d_prime);
    c.name_ = std::move(name);
    return c;
}

CostFunction CostFunction::multiplicative(RealFn psi, RealFn psi_prime, std::string name,
                                          RealFn psi_second) {
    if (!psi) fail(ErrorKind::invalid_cost, "multiplicative needs psi");
    if (!psi_prime) fail(ErrorKind::unsupported_cost, "multiplicative needs a derivative handle");
    CostFunction c;
    c.kind_ = Kind::multiplicative;
    c.f_ = std::move(psi);
    c.fp_ = std::move(psi_prime);
    c.fpp_ = std::move(psi_second);
    c.name_ = std::move(name);
    return c;
}

CostFunction CostFunction::multiplicative_quadratic(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorKind::invalid_cost, "psi scale must be positive");
    std::ostringstream s;
    s << "multiplicative_quadratic(a=" << a << ")";
    CostFunction c = multiplicative([a](double t) { return a * (t - 1) * (t - 1); },
                                    [a](double t) { return 2 * a * (t - 1); }, s.str(),
                                    [a](double) { return 2 * a; });
    c.a_ = a;
    return c;
}

double CostFunction::distance_cost(double d) const {
    d = std::abs(d);
    switch (kind_) {
    case Kind::additive_power: return a_ / k_ * std::pow(d, k_);
    case Kind::additive_general: return f_(d);
    case Kind::multiplicative: break;
    }
    fail(ErrorKind::unsupported_cost, "distance cost needs an additive cost");
}

double CostFunction::distance_marginal(double d) const {
    d = std::abs(d);
    switch (kind_) {
    case Kind::additive_power: return a_ * std::pow(d, k_ - 1);
    case Kind::additive_general: return fp_(d);
    case Kind::multiplicative: break;
    }
    fail(ErrorKind::unsupported_cost, "distance marginal needs an additive cost");
}

double CostFunction::distance_marginal_inverse(double v) const {
    if (v <= 0.0) return 0.0;
    switch (kind_) {
    case Kind::additive_power:
        if (k_ == 1.0) fail(ErrorKind::unsupported_cost, "linear cost has no marginal inverse");
        return std::pow(v / a_, 1.0 / (k_ - 1));
    case Kind::additive_general: return invert_increasing(fp_, v);
    case Kind::multiplicative: break;
    }
    fail(ErrorKind::unsupported_cost, "distance marginal inverse needs an additive cost");
}

double CostFunction::psi(double t) const {
    if (kind_ != Kind::multiplicative) fail(ErrorKind::unsupported_cost, "psi needs a multiplicative cost");
    return f_(t);
}

double CostFunction::psi_prime(double t) const {
    if (kind_ != Kind::multiplicative) fail(ErrorKind::unsupported_cost, "psi' needs a multiplicative cost");
    return fp_(t);
}

double CostFunction::operator()(double x, double y) const {
    if (kind_ != Kind::multiplicative) return distance_cost(y - x);
    if (x <= 0.0) return y <= 0.0 ? 0.0 : inf;
    return f_(y / x);
}

double CostFunction::dy(double x, double y) const {
    if (kind_ != Kind::multiplicative) {
        double d = y - x;
        double m = distance_marginal(d);
        return d < 0.0 ? -m : m;
    }
    if (x <= 0.0) return inf;
    return fp_(y / x) / x;
}

double CostFunction::dyy(double x, double y) const {
    double d = std::abs(y - x);
    switch (kind_) {
    case Kind::additive_power:
        if (k_ == 1.0) return 0.0;
        return a_ * (k_ - 1) * std::pow(d, k_ - 2);
    case Kind::additive_general: {
        double h = 1e-5 * std::max(1.0, d);
        double l = std::max(0.0, d - h);
        return (fp_(d + h) - fp_(l)) / (d + h - l);
    }
    case Kind::multiplicative: {
        if (x <= 0.0) return inf;
        double t = y / x;
        if (fpp_) return fpp_(t) / (x * x);
        double h = 1e-5 * std::max(1.0, std::abs(t));
        return (fp_(t + h) - fp_(t - h)) / (2 * h) / (x * x);
    }
    }
    return 0.0;
}

double CostFunction::solve_marginal(double x, double v) const {
    if (v <= 0.0) return x;
    if (kind_ != Kind::multiplicative) return x + distance_marginal_inverse(v);
    if (x <= 0.0) return x;
    if (fpp_ && a_ > 0.0) return x * (1.0 + v * x / (2 * a_));
    // psi'(t) = v x with t >= 1
    double target = v * x;
    double hi = 2.0;
    int grow = 0;
    while (fp_(hi) < target) {
        hi = 1.0 + 2.0 * (hi - 1.0);
        if (++grow > 200) fail(ErrorKind::numeric_failure, "psi' never reaches target");
    }
    return x * find_root([&](double t) { return fp_(t) - target; }, 1.0, hi, 1e-14);
}

CostBox default_box(const CostFunction& cost) {
    CostBox box;
    if (!cost.is_additive()) box.x_lo = 0.1;
    return box;
}

CheckReport check_cost_assumptions(const CostFunction& cost, int grid_size) {
    return check_cost_assumptions(cost, grid_size, default_box(cost));
}

CheckReport check_cost_assumptions(const CostFunction& cost, int grid_size, const CostBox& box) {
    if (grid_size < 8) fail(ErrorKind::invalid_input, "grid_size must be at least 8");
    auto n = static_cast<std::size_t>(grid_size);
    std::vector<double> xs = linspace(box.x_lo, box.x_hi, n);
    std::vector<double> ys = linspace(box.x_lo, box.x_hi + box.y_span, n);
    double step = box.y_span / static_cast<double>(n);

    Check smooth{"smoothness"};
    Check zero{"zero_diagonal"};
    Check inada{"inada"};
    Check convex{"strict_convexity"};
    Check submod{"strict_submodularity"};
    Check unbounded{"unbounded_marginal"};

    for (double x : xs) {
        double c0 = cost(x, x);
        if (!(std::abs(c0) <= 1e-12)) zero.flag(point(x, x));
        double m0 = cost.dy(x, x);
        if (!(std::abs(m0) <= 1e-9)) inada.flag(point(x, x));

        for (std::size_t j = 1; j <= n; ++j) {
            double y = x + step * static_cast<double>(j);
            double cyy = cost.dyy(x, y);
            if (!(cyy > 0.0) || !std::isfinite(cyy)) convex.flag(point(x, y));
            double h = 1e-6 * std::max(1.0, y);
            double fd = (cost(x, y + h) - cost(x, y - h)) / (2 * h);
            double an = cost.dy(x, y);
            if (!(std::abs(fd - an) <= 1e-4 * (1.0 + std::abs(an)))) smooth.flag(point(x, y));
        }

        double prev = -inf;
        double first = cost.dy(x, x + 1.0);
        double last = first;
        bool increasing = true;
        for (int e = 0; e <= 6; ++e) {
            double m = cost.dy(x, x + std::pow(10.0, e));
            if (!(m > prev)) increasing = false;
            prev = m;
            last = m;
        }
        if (!increasing || !(last >= 100.0 * first) || !std::isfinite(first)) {
            unbounded.flag(point(x, x + 1e6));
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (ys[k] < xs[j]) continue;
                for (std::size_t l = k + 1; l < n; ++l) {
                    double x = xs[i], xp = xs[j], y = ys[k], yp = ys[l];
                    double lhs = cost(x, y) + cost(xp, yp);
                    double rhs = cost(x, yp) + cost(xp, y);
                    if (!(lhs < rhs)) submod.flag(point(x, y) + " " + point(xp, yp));
                }
            }
        }
    }

    CheckReport report;
    report.checks = {smooth, zero, inada, convex, submod, unbounded};
    return report;
}

}  // namespace adplan
