#pragma once

#include "adplan/numerics.hpp"

#include <string>
#include <vector>

namespace adplan {

struct Atom {
    double location;
    double mass;
};

// Distribution of initial valuations. Survival follows the buy-at-indifference
// convention: survival(x) = mu([x, inf)) includes any atom at x.
class Distribution {
public:
    enum class Kind { uniform, beta, exponential, tabulated };

    static Distribution uniform(double lo, double hi);
    static Distribution beta(double a, double b);
    static Distribution exponential(double rate);
    // Piecewise-linear CDF through (x[i], cdf[i]). A repeated breakpoint is a
    // jump, and cdf[0] > 0 puts an atom at x[0]. The last CDF value must be 1.
    static Distribution tabulated(std::vector<double> x, std::vector<double> cdf);

    Kind kind() const { return kind_; }
    std::string describe() const;

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }  // may be +inf
    // Finite upper end used for scans and quadrature.
    double upper() const { return upper_; }

    double truncation_quantile() const { return trunc_q_; }
    void set_truncation_quantile(double q);
    double quad_tol() const { return quad_tol_; }
    void set_quad_tol(double tol) { quad_tol_ = tol; }

    double cdf(double x) const;
    double survival(double x) const;
    double density(double x) const;
    // inf{x : survival(x) <= q}, clamped to the support minimum.
    double quantile_survival(double q) const;
    // mu([a, b))
    double mass(double a, double b) const;

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool has_atoms() const { return !atoms_.empty(); }
    // Intervals of the support where a tabulated density vanishes.
    std::vector<std::pair<double, double>> density_gaps() const;

    // Integral of g over [a, b) against dF; b may be +inf.
    double integrate(const RealFn& g, double a, double b) const;
    double partial_expectation(double a, double b) const;
    double mean() const { return mean_; }

private:
    Distribution() = default;
    void finish();
    double integrate_continuous(const RealFn& g, double a, double b) const;

    Kind kind_ = Kind::uniform;
    double p1_ = 0.0;
    double p2_ = 1.0;
    double lo_ = 0.0;
    double hi_ = 1.0;
    double upper_ = 1.0;
    double trunc_q_ = 1.0 - 1e-12;
    double quad_tol_ = 1e-9;
    double mean_ = 0.5;
    std::vector<double> xs_;
    std::vector<double> cs_;
    std::vector<Atom> atoms_;
};

}  // namespace adplan
