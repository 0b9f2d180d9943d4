#pragma once

#include "adplan/checks.hpp"
#include "adplan/numerics.hpp"

#include <string>
#include <vector>

namespace adplan {

// Cost c(x, y) of moving a consumer with valuation x to valuation y.
class CostFunction {
public:
    enum class Kind { additive_power, additive_general, multiplicative };

    // c = (a / k) |y - x|^k
    static CostFunction additive_power(double a, double k);
    // c = c_d(|y - x|) with user-supplied c_d and c_d'
    static CostFunction additive_general(RealFn c_d, RealFn c_d_prime, std::string name);
    // c = psi(y / x); psi'' is estimated by differences when not supplied.
    static CostFunction multiplicative(RealFn psi, RealFn psi_prime, std::string name,
                                       RealFn psi_second = nullptr);
    // psi(t) = a (t - 1)^2
    static CostFunction multiplicative_quadratic(double a);

    Kind kind() const { return kind_; }
    bool is_additive() const { return kind_ != Kind::multiplicative; }
    const std::string& name() const { return name_; }
    // Scale parameter a for the parametric kinds, 0 otherwise.
    double scale() const { return a_; }

    double operator()(double x, double y) const;
    double dy(double x, double y) const;
    double dyy(double x, double y) const;

    // Distance cost of additive kinds.
    double distance_cost(double d) const;
    double distance_marginal(double d) const;
    double distance_marginal_inverse(double v) const;

    // psi and psi' of the multiplicative kind.
    double psi(double t) const;
    double psi_prime(double t) const;

    // The y >= x solving c_y(x, y) = v, or x when v <= 0. For additive_power
    // this is closed form; otherwise the bracket [x, x + M] grows
    // geometrically before a root find.
    double solve_marginal(double x, double v) const;

private:
    CostFunction() = default;

    Kind kind_ = Kind::additive_power;
    double a_ = 0.0;
    double k_ = 2.0;
    std::string name_;
    RealFn f_;
    RealFn fp_;
    RealFn fpp_;
};

struct CostBox {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_span = 1.0;
};

CostBox default_box(const CostFunction& cost);

// Grid checks of smoothness, c(x,x) = 0, c_y(x,x) = 0, c_yy > 0, strict
// submodularity and unbounded marginal cost.
CheckReport check_cost_assumptions(const CostFunction& cost, int grid_size, const CostBox& box);
CheckReport check_cost_assumptions(const CostFunction& cost, int grid_size);

}  // namespace adplan
