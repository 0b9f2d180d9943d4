#include "adplan/distribution.hpp"

#include "adplan/errors.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

Distribution Distribution::uniform(double lo, double hi) {
    if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
        fail(ErrorKind::invalid_input, "uniform needs 0 <= lo < hi < inf");
    }
    Distribution d;
    d.kind_ = Kind::uniform;
    d.p1_ = lo;
    d.p2_ = hi;
    d.finish();
    return d;
}

Distribution Distribution::beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        fail(ErrorKind::invalid_input, "beta needs positive finite shape parameters");
    }
    Distribution d;
    d.kind_ = Kind::beta;
    d.p1_ = a;
    d.p2_ = b;
    d.finish();
    return d;
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        fail(ErrorKind::invalid_input, "exponential needs a positive finite rate");
    }
    Distribution d;
    d.kind_ = Kind::exponential;
    d.p1_ = rate;
    d.finish();
    return d;
}

Distribution Distribution::tabulated(std::vector<double> x, std::vector<double> cdf) {
    if (x.empty() || x.size() != cdf.size()) {
        fail(ErrorKind::invalid_input, "tabulated needs equally many breakpoints and CDF values");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || x[i] < 0.0) {
            fail(ErrorKind::invalid_input, "tabulated breakpoints must be finite and nonnegative");
        }
        if (!(cdf[i] >= 0.0 && cdf[i] <= 1.0 + 1e-12)) {
            fail(ErrorKind::invalid_input, "tabulated CDF values must lie in [0, 1]");
        }
        if (i > 0 && (x[i] < x[i - 1] || cdf[i] < cdf[i - 1])) {
            fail(ErrorKind::invalid_input, "tabulated breakpoints and CDF must be nondecreasing");
        }
    }
    if (std::abs(cdf.back() - 1.0) > 1e-12) {
        fail(ErrorKind::invalid_input, "tabulated CDF must end at 1");
    }
    cdf.back() = 1.0;
    Distribution d;
    d.kind_ = Kind::tabulated;
    d.xs_ = std::move(x);
    d.cs_ = std::move(cdf);
    d.finish();
    return d;
}

void Distribution::finish() {
    switch (kind_) {
    case Kind::uniform:
        lo_ = p1_;
        hi_ = p2_;
        upper_ = hi_;
        break;
    case Kind::beta:
        lo_ = 0.0;
        hi_ = 1.0;
        upper_ = 1.0;
        break;
    case Kind::exponential:
        lo_ = 0.0;
        hi_ = inf;
        upper_ = -std::log1p(-trunc_q_) / p1_;
        break;
    case Kind::tabulated: {
        lo_ = xs_.front();
        hi_ = xs_.back();
        upper_ = hi_;
        atoms_.clear();
        if (cs_.front() > 0.0) atoms_.push_back({xs_.front(), cs_.front()});
        for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
            if (xs_[i + 1] == xs_[i] && cs_[i + 1] > cs_[i]) {
                if (!atoms_.empty() && atoms_.back().location == xs_[i]) {
                    atoms_.back().mass += cs_[i + 1] - cs_[i];
                } else {
                    atoms_.push_back({xs_[i], cs_[i + 1] - cs_[i]});
                }
            }
        }
        break;
    }
    }
    mean_ = partial_expectation(lo_, inf);
}

void Distribution::set_truncation_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::invalid_input, "truncation quantile must lie in (0, 1)");
    trunc_q_ = q;
    finish();
}

std::string Distribution::describe() const {
    std::ostringstream s;
    switch (kind_) {
    case Kind::uniform: s << "uniform(" << p1_ << "," << p2_ << ")"; break;
    case Kind::beta: s << "beta(" << p1_ << "," << p2_ << ")"; break;
    case Kind::exponential: s << "exponential(" << p1_ << ")"; break;
    case Kind::tabulated: s << "tabulated(" << xs_.size() << " points)"; break;
    }
    return s.str();
}

double Distribution::cdf(double x) const {
    switch (kind_) {
    case Kind::uniform:
        return std::clamp((x - p1_) / (p2_ - p1_), 0.0, 1.0);
    case Kind::beta:
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return boost::math::ibeta(p1_, p2_, x);
    case Kind::exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-p1_ * x);
    case Kind::tabulated: {
        if (x < xs_.front()) return 0.0;
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        if (i + 1 >= xs_.size()) return 1.0;
        double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return cs_[i] + (cs_[i + 1] - cs_[i]) * w;
    }
    }
    return 0.0;
}

double Distribution::survival(double x) const {
    switch (kind_) {
    case Kind::uniform:
        return std::clamp((p2_ - x) / (p2_ - p1_), 0.0, 1.0);
    case Kind::beta:
        if (x <= 0.0) return 1.0;
        if (x >= 1.0) return 0.0;
        return boost::math::ibetac(p1_, p2_, x);
    case Kind::exponential:
        return x <= 0.0 ? 1.0 : std::exp(-p1_ * x);
    case Kind::tabulated: {
        // 1 - F(x-): atoms at x still count.
        if (x <= xs_.front()) return 1.0;
        auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        if (i + 1 >= xs_.size()) return 0.0;
        double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return 1.0 - (cs_[i] + (cs_[i + 1] - cs_[i]) * w);
    }
    }
    return 0.0;
}

double Distribution::density(double x) const {
    switch (kind_) {
    case Kind::uniform:
        return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
    case Kind::beta:
        if (x < 0.0 || x > 1.0) return 0.0;
        if ((x == 0.0 && p1_ < 1.0) || (x == 1.0 && p2_ < 1.0)) return inf;
        return boost::math::ibeta_derivative(p1_, p2_, x);
    case Kind::exponential:
        return x < 0.0 ? 0.0 : p1_ * std::exp(-p1_ * x);
    case Kind::tabulated: {
        if (x < xs_.front() || x >= xs_.back()) return 0.0;
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        return (cs_[i + 1] - cs_[i]) / (xs_[i + 1] - xs_[i]);
    }
    }
    return 0.0;
}

double Distribution::quantile_survival(double q) const {
    q = std::clamp(q, 0.0, 1.0);
    switch (kind_) {
    case Kind::uniform:
        return p1_ + (1.0 - q) * (p2_ - p1_);
    case Kind::beta:
        if (q >= 1.0) return 0.0;
        if (q <= 0.0) return 1.0;
        return boost::math::ibetac_inv(p1_, p2_, q);
    case Kind::exponential:
        if (q <= 0.0) return inf;
        return -std::log(q) / p1_;
    case Kind::tabulated:
        if (q >= 1.0) return lo_;
        return first_true([&](double x) { return survival(x) <= q; }, lo_, hi_, 1e-15);
    }
    return lo_;
}

double Distribution::mass(double a, double b) const {
    if (!(b > a)) return 0.0;
    double sb = std::isinf(b) ? 0.0 : survival(b);
    return std::max(0.0, survival(a) - sb);
}

std::vector<std::pair<double, double>> Distribution::density_gaps() const {
    std::vector<std::pair<double, double>> gaps;
    if (kind_ != Kind::tabulated) return gaps;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        if (xs_[i + 1] > xs_[i] && cs_[i + 1] == cs_[i]) gaps.emplace_back(xs_[i], xs_[i + 1]);
    }
    return gaps;
}

double Distribution::integrate_continuous(const RealFn& g, double a, double b) const {
    auto integrand = [&](double x) {
        double f = density(x);
        return f == 0.0 ? 0.0 : g(x) * f;
    };
    if (kind_ == Kind::beta && (p1_ < 1.0 || p2_ < 1.0)) {
        return integrate_singular(integrand, a, b, quad_tol_);
    }
    return adplan::integrate(integrand, a, b, quad_tol_);
}

double Distribution::integrate(const RealFn& g, double a, double b) const {
    if (!(b > a)) return 0.0;
    if (kind_ != Kind::tabulated) {
        double l = std::max(a, lo_);
        double r = std::min(b, upper_);
        return r > l ? integrate_continuous(g, l, r) : 0.0;
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        double w = xs_[i + 1] - xs_[i];
        double dc = cs_[i + 1] - cs_[i];
        if (w <= 0.0 || dc <= 0.0) continue;
        double l = std::max(a, xs_[i]);
        double r = std::min(b, xs_[i + 1]);
        if (r <= l) continue;
        double slope = dc / w;
        total += adplan::integrate([&](double x) { return g(x) * slope; }, l, r, quad_tol_);
    }
    for (const auto& atom : atoms_) {
        if (atom.location >= a && atom.location < b) total += g(atom.location) * atom.mass;
    }
    return total;
}

double Distribution::partial_expectation(double a, double b) const {
    return integrate([](double x) { return x; }, a, b);
}

}  // namespace adplan
