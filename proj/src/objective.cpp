#include "adplan/objective.hpp"

#include "adplan/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace adplan {

const char* to_string(WelfareMode mode) {
    return mode == WelfareMode::exante ? "exante" : "expost";
}

Objective Objective::weighted(double alpha, WelfareMode mode) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorKind::invalid_objective, "alpha must lie in [0, 1]");
    Objective o;
    o.kind_ = Kind::weighted;
    o.mode_ = mode;
    o.weight_ = alpha;
    return o;
}

Objective Objective::intermediary(Distribution outside_options, WelfareMode mode) {
    Objective o;
    o.kind_ = Kind::intermediary;
    o.mode_ = mode;
    o.weight_ = std::numeric_limits<double>::quiet_NaN();
    o.outside_ = std::move(outside_options);
    return o;
}

Objective Objective::uncertainty_mix(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) fail(ErrorKind::invalid_objective, "beta must lie in [0, 1]");
    Objective o;
    o.kind_ = Kind::uncertainty_mix;
    o.mode_ = WelfareMode::expost;
    o.weight_ = beta;
    return o;
}

Objective Objective::general(Phi phi, Gradient gradient, WelfareMode mode, std::string name) {
    if (!phi || !gradient) fail(ErrorKind::invalid_objective, "general objective needs phi and its gradient");
    Objective o;
    o.kind_ = Kind::general;
    o.mode_ = mode;
    o.weight_ = std::numeric_limits<double>::quiet_NaN();
    o.phi_ = std::move(phi);
    o.gradient_ = std::move(gradient);
    o.name_ = std::move(name);
    return o;
}

std::string Objective::mode_label() const {
    return kind_ == Kind::uncertainty_mix ? "mixed" : to_string(mode_);
}

std::string Objective::describe() const {
    std::ostringstream s;
    switch (kind_) {
    case Kind::weighted: s << "weighted(alpha=" << weight_ << "," << to_string(mode_) << ")"; break;
    case Kind::intermediary: s << "intermediary(" << outside_->describe() << "," << to_string(mode_) << ")"; break;
    case Kind::uncertainty_mix: s << "uncertainty_mix(beta=" << weight_ << ")"; break;
    case Kind::general: s << "general(" << name_ << "," << to_string(mode_) << ")"; break;
    }
    return s.str();
}

bool Objective::constant_partials() const {
    return kind_ == Kind::weighted || kind_ == Kind::uncertainty_mix;
}

double Objective::cs_of(const Welfare& w) const {
    return mode_ == WelfareMode::exante ? w.cs_exante : w.cs_expost;
}

double Objective::value(const Welfare& w) const {
    switch (kind_) {
    case Kind::weighted:
        return weight_ * cs_of(w) + (1.0 - weight_) * w.ps - w.cost;
    case Kind::intermediary: {
        double h = outside_->cdf(cs_of(w));
        return std::max(0.0, h * (w.ps - w.cost));
    }
    case Kind::uncertainty_mix:
        return weight_ * w.cs_exante + (1.0 - weight_) * w.cs_expost - w.cost;
    case Kind::general:
        return phi_(w.ps, cs_of(w), w.cost);
    }
    return 0.0;
}

Partials Objective::partials(const Welfare& w) const {
    Partials p;
    switch (kind_) {
    case Kind::weighted:
        p.ps = 1.0 - weight_;
        p.cost = -1.0;
        if (mode_ == WelfareMode::exante) {
            p.cs_exante = weight_;
        } else {
            p.cs = weight_;
        }
        return p;
    case Kind::uncertainty_mix:
        p.ps = 0.0;
        p.cs = 1.0 - weight_;
        p.cs_exante = weight_;
        p.cost = -1.0;
        return p;
    case Kind::intermediary: {
        double cs = cs_of(w);
        double h = outside_->cdf(cs);
        double dh = outside_->density(cs);
        p.ps = h;
        p.cost = -h;
        double dcs = dh * (w.ps - w.cost);
        if (mode_ == WelfareMode::exante) {
            p.cs_exante = dcs;
        } else {
            p.cs = dcs;
        }
        break;
    }
    case Kind::general: {
        auto g = gradient_(w.ps, cs_of(w), w.cost);
        p.ps = g[0];
        p.cost = g[2];
        if (mode_ == WelfareMode::exante) {
            p.cs_exante = g[1];
        } else {
            p.cs = g[1];
        }
        break;
    }
    }
    double dcs = mode_ == WelfareMode::exante ? p.cs_exante : p.cs;
    if (!(p.ps >= 0.0) || !(dcs >= 0.0) || !(p.cost < 0.0)) {
        std::ostringstream msg;
        msg << describe() << " has partials (" << p.ps << ", " << dcs << ", " << p.cost
            << ") outside the admissible signs";
        fail(ErrorKind::invalid_objective, msg.str());
    }
    return p;
}

}  // namespace adplan
