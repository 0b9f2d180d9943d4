#include "adplan/numerics.hpp"

#include "adplan/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cstdio>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

double integrate(const RealFn& f, double a, double b, double abs_tol, double* error) {
    if (!(b > a)) {
        if (error) *error = 0.0;
        return 0.0;
    }
    double err = 0.0;
    double l1 = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 12, 1e-10, &err, &l1);
    if (error) *error = err;
    if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "integral over [" << a << ", " << b << "] is not finite";
        fail(ErrorKind::numeric_failure, msg.str());
    }
    double allowed = std::max(1e3 * abs_tol, 1e-8 * l1);
    if (err > allowed) {
        std::ostringstream msg;
        msg << "quadrature over [" << a << ", " << b << "] reached error " << err
            << " (allowed " << allowed << ")";
        fail(ErrorKind::numeric_failure, msg.str());
    }
    return value;
}

double integrate_singular(const RealFn& f, double a, double b, double abs_tol) {
    if (!(b > a)) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    double l1 = 0.0;
    double value = ts.integrate(f, a, b, 1e-10, &err, &l1);
    if (!std::isfinite(value) || err > std::max(1e3 * abs_tol, 1e-8 * l1)) {
        std::ostringstream msg;
        msg << "tanh-sinh quadrature over [" << a << ", " << b << "] failed (error " << err
            << ")";
        fail(ErrorKind::numeric_failure, msg.str());
    }
    return value;
}

double find_root(const RealFn& f, double a, double b, double x_tol) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) {
        std::ostringstream msg;
        msg << "root not bracketed on [" << a << ", " << b << "]";
        fail(ErrorKind::numeric_failure, msg.str());
    }
    if (!std::isfinite(fa) || !std::isfinite(fb)) {
        // toms748 needs finite end values; plain bisection copes with infinities.
        auto tol = [x_tol](double l, double r) { return std::abs(r - l) <= x_tol; };
        auto r = boost::math::tools::bisect(f, a, b, tol);
        return 0.5 * (r.first + r.second);
    }
    std::uintmax_t iters = 200;
    auto tol = [x_tol](double l, double r) {
        return std::abs(r - l) <= std::max(x_tol, 4 * std::numeric_limits<double>::epsilon() *
                                                      std::abs(l));
    };
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return 0.5 * (r.first + r.second);
}

double first_true(const std::function<bool(double)>& pred, double a, double b, double x_tol) {
    if (pred(a)) return a;
    if (!pred(b)) return b;
    double lo = a;
    double hi = b;
    while (hi - lo > x_tol && hi - lo > 4 * std::numeric_limits<double>::epsilon() *
                                            std::max(std::abs(lo), std::abs(hi))) {
        double mid = 0.5 * (lo + hi);
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

Maximum maximize_bracket(const RealFn& f, double a, double b, int bits) {
    if (!(b > a)) return {a, f(a)};
    auto neg = [&](double x) { return -f(x); };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::brent_find_minima(neg, a, b, bits, iters);
    return {r.first, -r.second};
}

Maximum maximize_scan(const RealFn& f, double a, double b, int n, int refine, double tie_tol,
                      int threads) {
    if (n < 2 || !(b > a)) return {a, f(a)};
    std::vector<double> xs = linspace(a, b, static_cast<std::size_t>(n));
    std::vector<double> vs(xs.size());
    parallel_for(xs.size(), threads, [&](std::size_t i) { vs[i] = f(xs[i]); });

    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        bool left = i == 0 || vs[i] >= vs[i - 1];
        bool right = i + 1 == xs.size() || vs[i] >= vs[i + 1];
        if (left && right && std::isfinite(vs[i])) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](std::size_t l, std::size_t r) { return vs[l] > vs[r]; });
    if (peaks.size() > static_cast<std::size_t>(refine)) peaks.resize(refine);

    std::vector<Maximum> found;
    for (std::size_t i = 0; i < xs.size(); ++i) found.push_back({xs[i], vs[i]});
    for (std::size_t i : peaks) {
        double l = xs[i == 0 ? 0 : i - 1];
        double r = xs[std::min(i + 1, xs.size() - 1)];
        found.push_back(maximize_bracket(f, l, r));
    }
    double best = -inf;
    for (const auto& m : found) best = std::max(best, m.value);
    Maximum out{b, best};
    for (const auto& m : found) {
        if (m.value >= best - tie_tol && m.x < out.x) out = m;
    }
    return out;
}

Maximum2 nelder_mead_box(const std::function<double(const Point2&)>& f, const Box2& box,
                         Point2 start, Point2 step, int max_iter, double f_tol) {
    auto clamp = [&](Point2 p) {
        for (int k = 0; k < 2; ++k) p[k] = std::clamp(p[k], box.lo[k], box.hi[k]);
        return p;
    };
    struct Vertex {
        Point2 x;
        double v;
    };
    std::array<Vertex, 3> s;
    s[0].x = clamp(start);
    s[1].x = clamp({start[0] + step[0], start[1]});
    s[2].x = clamp({start[0], start[1] + step[1]});
    // Keep the simplex nondegenerate when the start sits on an upper bound.
    for (int k = 0; k < 2; ++k) {
        if (s[k + 1].x[k] == s[0].x[k]) s[k + 1].x = clamp({
            k == 0 ? start[0] - step[0] : start[0], k == 1 ? start[1] - step[1] : start[1]});
    }
    for (auto& vtx : s) vtx.v = f(vtx.x);

    int it = 0;
    for (; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(), [](const Vertex& l, const Vertex& r) { return l.v > r.v; });
        if (std::isfinite(s[2].v) && std::abs(s[0].v - s[2].v) <= f_tol) break;
        Point2 c{(s[0].x[0] + s[1].x[0]) / 2, (s[0].x[1] + s[1].x[1]) / 2};
        auto along = [&](double t) {
            return clamp({c[0] + t * (s[2].x[0] - c[0]), c[1] + t * (s[2].x[1] - c[1])});
        };
        Point2 xr = along(-1.0);
        double vr = f(xr);
        if (vr > s[0].v) {
            Point2 xe = along(-2.0);
            double ve = f(xe);
            s[2] = ve > vr ? Vertex{xe, ve} : Vertex{xr, vr};
        } else if (vr > s[1].v) {
            s[2] = {xr, vr};
        } else {
            Point2 xc = vr > s[2].v ? along(-0.5) : along(0.5);
            double vc = f(xc);
            if (vc > std::max(vr, s[2].v)) {
                s[2] = {xc, vc};
            } else {
                for (int k = 1; k < 3; ++k) {
                    s[k].x = clamp({(s[0].x[0] + s[k].x[0]) / 2, (s[0].x[1] + s[k].x[1]) / 2});
                    s[k].v = f(s[k].x);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const Vertex& l, const Vertex& r) { return l.v > r.v; });
    return {s[0].x, s[0].v, it};
}

GridSearch2 grid_polish_2d(const std::function<double(const Point2&)>& grid_f,
                           const std::function<double(const Point2&)>& polish_f, const Box2& box,
                           int n, int threads, int polish_iter) {
    const auto m = static_cast<std::size_t>(std::max(n, 2));
    std::vector<double> xs = linspace(box.lo[0], box.hi[0], m);
    std::vector<double> ys = linspace(box.lo[1], box.hi[1], m);
    std::vector<double> vals(m * m);
    parallel_for(m * m, threads, [&](std::size_t k) { vals[k] = grid_f({xs[k / m], ys[k % m]}); });
    std::size_t best_k = 0;
    for (std::size_t k = 1; k < vals.size(); ++k) {
        if (vals[k] > vals[best_k]) best_k = k;
    }
    GridSearch2 out{{xs[best_k / m], ys[best_k % m]}, vals[best_k], {}, vals[best_k], 0};
    out.x = out.grid_x;
    if (!std::isfinite(out.grid_value)) return out;

    polish_f(out.x);
    const Point2 step{(box.hi[0] - box.lo[0]) / static_cast<double>(m - 1),
                      (box.hi[1] - box.lo[1]) / static_cast<double>(m - 1)};
    Maximum2 nm = nelder_mead_box(polish_f, box, out.x, step, polish_iter);
    out.iterations = nm.iterations;
    if (nm.value > out.value) {
        out.value = nm.value;
        out.x = nm.x;
    }
    for (int round = 0; round < 3; ++round) {
        double before = out.value;
        for (int axis = 0; axis < 2; ++axis) {
            double width = step[axis] / (round + 1);
            double a = std::max(box.lo[axis], out.x[axis] - width);
            double b = std::min(box.hi[axis], out.x[axis] + width);
            auto along = [&](double t) {
                Point2 z = out.x;
                z[axis] = t;
                return polish_f(z);
            };
            for (const Maximum& cand : {maximize_bracket(along, a, b, 40), Maximum{b, along(b)},
                                        Maximum{a, along(a)}}) {
                if (cand.value > out.value) {
                    out.value = cand.value;
                    out.x[axis] = cand.x;
                }
            }
        }
        if (out.value - before <= 1e-14) break;
    }
    return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::size_t first_index = n;
    std::mutex guard;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (i < first_index) {
                    first_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    out[n - 1] = b;
    return out;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace adplan
