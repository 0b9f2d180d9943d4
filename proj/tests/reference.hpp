#pragma once

// Independent reference computations. Everything here is closed form or
// uses its own composite Simpson / bisection / golden-section code, so the
// checked numbers do not pass through the library's numerics.

#include <cmath>
#include <functional>

namespace ref {

using Fn = std::function<double(double)>;

inline double simpson(const Fn& f, double a, double b, int n = 2000) {
    if (b <= a) return 0.0;
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double bisect(const Fn& f, double a, double b, int iters = 200) {
    double fa = f(a);
    for (int i = 0; i < iters; ++i) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

struct Max {
    double x;
    double value;
};

// Grid of n points, then golden section around the best one.
inline Max grid_golden(const Fn& f, double a, double b, int n = 4000) {
    double best_x = a;
    double best = f(a);
    double h = (b - a) / n;
    for (int i = 1; i <= n; ++i) {
        double v = f(a + i * h);
        if (v > best) {
            best = v;
            best_x = a + i * h;
        }
    }
    double lo = std::max(a, best_x - h);
    double hi = std::min(b, best_x + h);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < 200; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    double x = 0.5 * (lo + hi);
    double v = f(x);
    return v >= best ? Max{x, v} : Max{best_x, best};
}

// Uniform[0,1] valuations with c = (a/2)(y - x)^2 throughout.

// Profit of moving [p - sqrt(2p/a), p) to p, priced at p.
inline double producer_profit(double p, double a) {
    double lower = std::max(0.0, p - std::sqrt(2.0 * p / a));
    double top = std::min(p, 1.0);
    double cost = 0.0;
    if (top > lower) cost = a / 2.0 * (std::pow(p - lower, 3) - std::pow(p - top, 3)) / 3.0;
    double mass = lower < 1.0 ? 1.0 - lower : 0.0;
    return p * mass - cost;
}

inline Max producer_optimum(double a) { return grid_golden([a](double p) { return producer_profit(p, a); }, 1e-6, 4.0); }

// CS^A - C for the interval [1 - 1/(4p), p) moved to p, p in [1/4, 1/2].
inline double consumer_value(double p, double a) {
    double lower = 1.0 - 0.25 / p;
    double d = p - lower;
    double csa = (1.0 - p) * (1.0 - p) / 2.0 - d * d / 2.0;
    double cost = a / 2.0 * d * d * d / 3.0;
    return csa - cost;
}

inline Max consumer_optimum(double a) {
    return grid_golden([a](double p) { return consumer_value(p, a); }, 0.25, 0.5);
}

// Binding IR lower end of the regulated interval: p (1 - t) - C(t) = 1/4.
inline double regulation_lower(double p, double a) {
    auto ir = [p, a](double t) { return p * (1.0 - t) - a / 2.0 * std::pow(p - t, 3) / 3.0 - 0.25; };
    // ir increases as t falls from p until the marginal cost reaches p
    double t_min = std::max(0.0, p - std::sqrt(2.0 * p / a));
    if (ir(t_min) < 0.0) return NAN;
    if (ir(p) >= 0.0) return p;
    return bisect(ir, t_min, p);
}

inline double regulation_cs(double p, double a) {
    double t = regulation_lower(p, a);
    if (std::isnan(t)) return -1.0;
    return (1.0 - t * t) / 2.0 - p * (1.0 - t);
}

inline Max regulation_optimum(double a) {
    return grid_golden([a](double p) { return regulation_cs(p, a); }, 1e-6, 0.5);
}

// Smallest p whose unit-elastic structure is a contraction of uniform[0,1].
struct Rs {
    double p;
    double B;
};

inline Rs rs_uniform() {
    auto B_of = [](double p) { return p * std::exp(0.5 / p - 1.0); };
    auto int_F = [](double t) { return t <= 1.0 ? t * t / 2.0 : t - 0.5; };
    auto int_G = [&](double p, double t) {
        double B = B_of(p);
        if (t <= p) return 0.0;
        double top = std::min(t, B);
        double v = (top - p) - p * std::log(top / p);
        return t > B ? v + (t - B) : v;
    };
    auto feasible = [&](double p) {
        double B = B_of(p);
        if (!(B <= 1.0 + 1e-12)) return false;
        for (int i = 0; i <= 20000; ++i) {
            double t = 1.2 * i / 20000.0;
            if (int_G(p, t) > int_F(t) + 1e-12) return false;
        }
        return true;
    };
    double lo = 0.01;
    double hi = 0.5;
    for (int i = 0; i < 60; ++i) {
        double m = 0.5 * (lo + hi);
        if (feasible(m)) {
            hi = m;
        } else {
            lo = m;
        }
    }
    return {hi, B_of(hi)};
}

// The ex-post optimal plan on uniform[0,1], a = 4.
inline double expost_map(double x) {
    if (x < 0.125) return 0.25;
    if (x < 0.75) return std::max(0.25, std::min(x + 0.25, 0.25 / (1.0 - x)));
    return x + 0.25;
}

// CS^P - C of that plan at price 1/4 (everyone buys). Each piece is
// integrated with its own formula so the jump at 1/8 does not leak into
// the Simpson end points.
inline double expost_value() {
    auto gain = [](double (*T)(double)) {
        return [T](double x) { double d = T(x) - x; return (T(x) - 0.25) - 2.0 * d * d; };
    };
    double (*pool)(double) = [](double) { return 0.25; };
    double (*elastic)(double) = [](double x) { return 0.25 / (1.0 - x); };
    double (*shift)(double) = [](double x) { return x + 0.25; };
    return simpson(gain(pool), 0.0, 0.125, 4000) + simpson(gain(elastic), 0.125, 0.75, 4000) +
           simpson(gain(shift), 0.75, 1.0, 4000);
}

// Weyl sequence in [0, 1): deterministic stand-in for random draws.
inline double weyl(int k) {
    double v = k * 0.6180339887498949;
    return v - std::floor(v);
}

}  // namespace ref
