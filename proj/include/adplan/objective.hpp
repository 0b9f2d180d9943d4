#pragma once

#include "adplan/distribution.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>

namespace adplan {

enum class WelfareMode { exante, expost };

const char* to_string(WelfareMode mode);

// The welfare aggregates the designer cares about.
struct Welfare {
    double ps = 0.0;
    double cs_exante = 0.0;
    double cs_expost = 0.0;
    double cost = 0.0;
};

// Marginal weights of the designer at a working plan. `cs` weighs the
// ex-post surplus of purchasing consumers; `cs_exante` weighs their ex-ante
// surplus, which does not depend on where they are moved.
struct Partials {
    double ps = 0.0;
    double cs = 0.0;
    double cs_exante = 0.0;
    double cost = -1.0;
};

class Objective {
public:
    enum class Kind { weighted, intermediary, uncertainty_mix, general };

    using Phi = std::function<double(double ps, double cs, double c)>;
    using Gradient = std::function<std::array<double, 3>(double ps, double cs, double c)>;

    // alpha * CS + (1 - alpha) * PS - C
    static Objective weighted(double alpha, WelfareMode mode);
    // max(0, H(CS) * (PS - C)) with H the CDF of outside options.
    static Objective intermediary(Distribution outside_options, WelfareMode mode);
    // beta * CS^A + (1 - beta) * CS^P - C
    static Objective uncertainty_mix(double beta);
    static Objective general(Phi phi, Gradient gradient, WelfareMode mode, std::string name);

    Kind kind() const { return kind_; }
    WelfareMode mode() const { return mode_; }
    std::string mode_label() const;
    // alpha or beta; NaN for kinds without one.
    double weight() const { return weight_; }
    std::string describe() const;
    // Partials do not depend on the plan.
    bool constant_partials() const;

    double value(const Welfare& w) const;
    Partials partials(const Welfare& w) const;

private:
    Objective() = default;
    double cs_of(const Welfare& w) const;

    Kind kind_ = Kind::weighted;
    WelfareMode mode_ = WelfareMode::exante;
    double weight_ = 0.0;
    std::optional<Distribution> outside_;
    Phi phi_;
    Gradient gradient_;
    std::string name_;
};

}  // namespace adplan
