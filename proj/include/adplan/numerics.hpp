#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace adplan {

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod on [a, b]. Throws numeric_failure when the error
// estimate exceeds the tolerance by a wide margin.
double integrate(const RealFn& f, double a, double b, double abs_tol = 1e-9,
                 double* error = nullptr);

// Same, with tanh-sinh for integrands with endpoint singularities.
double integrate_singular(const RealFn& f, double a, double b, double abs_tol = 1e-9);

// Root of f on [a, b]; f(a) and f(b) must have opposite signs (or be zero).
double find_root(const RealFn& f, double a, double b, double x_tol = 1e-13);

// Smallest x in [a, b] with pred(x) true, assuming pred is monotone
// (false then true). Returns b if pred(b) is false.
double first_true(const std::function<bool(double)>& pred, double a, double b,
                  double x_tol = 1e-13);

struct Maximum {
    double x;
    double value;
};

// Local maximizer of f on [a, b] (Brent).
Maximum maximize_bracket(const RealFn& f, double a, double b, int bits = 40);

// Scan n points over [a, b], then refine the best local brackets. Ties go to
// the smaller x.
// The grid is evaluated on up to `threads` workers.
Maximum maximize_scan(const RealFn& f, double a, double b, int n, int refine = 6,
                      double tie_tol = 1e-12, int threads = 1);

using Point2 = std::array<double, 2>;

struct Box2 {
    Point2 lo;
    Point2 hi;
};

struct Maximum2 {
    Point2 x;
    double value;
    int iterations;
};

// Nelder-Mead on a box; trial points are clamped into the box. Infeasible
// points should return -infinity.
Maximum2 nelder_mead_box(const std::function<double(const Point2&)>& f, const Box2& box,
                         Point2 start, Point2 step, int max_iter = 200, double f_tol = 1e-12);

struct GridSearch2 {
    Point2 grid_x;
    double grid_value;
    Point2 x;
    double value;
    int iterations;
};

// n x n grid of `grid_f` (parallel, ties to the lowest index, first axis
// major), then Nelder-Mead and three rounds of coordinate Brent sweeps on
// `polish_f`, which is called sequentially and may keep state.
GridSearch2 grid_polish_2d(const std::function<double(const Point2&)>& grid_f,
                           const std::function<double(const Point2&)>& polish_f, const Box2& box,
                           int n, int threads, int polish_iter);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots by the caller for deterministic reductions.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

std::vector<double> linspace(double a, double b, std::size_t n);

// Fixed, locale-free rendering used in every output file.
std::string format_real(double v);

}  // namespace adplan
