#pragma once

#include "adplan/distribution.hpp"

#include <functional>
#include <vector>

namespace adplan {

// A demand curve: y -> mass of consumers with valuation at least y.
struct Demand {
    std::function<double(double)> survival;
    std::vector<Atom> atoms;           // evaluated exactly by the pricing engine
    // Extra candidate prices. The left end of a flat stretch of profit is
    // only found exactly when listed here or as an atom.
    std::vector<double> kinks;
    double lo = 0.0;                   // scan range
    double hi = 1.0;
};

struct PricePoint {
    double price = 0.0;
    double profit = 0.0;
};

struct PricingOptions {
    int scan_points = 2048;
    double tie_tol = 1e-10;
};

Demand demand_of(const Distribution& dist);

// Lowest maximizer of p * survival(p) over the scan range plus atoms.
PricePoint monopoly_price(const Demand& demand, const PricingOptions& options = {});
PricePoint monopoly_price(const Distribution& dist, const PricingOptions& options = {});

// Whether a target price is the monopolist's lowest optimal price.
struct PriceCheck {
    bool ok = false;
    double target_profit = 0.0;
    double best_other_price = 0.0;
    double best_other_profit = 0.0;
};

// Scans `scan_points` prices plus atoms and kinks. A price above the target
// must not beat it by more than `tie_tol`; a price below it (outside a 1e-7
// neighbourhood) must fall short by more than `tie_tol`.
PriceCheck verify_target_price(const Demand& demand, double target, int scan_points = 10000,
                               double tie_tol = 1e-9);

// Monopoly pricing facts about the initial distribution, computed once per
// solver call.
class Baseline {
public:
    explicit Baseline(const Distribution& dist, const PricingOptions& options = {});

    const PricePoint& monopoly() const { return monopoly_; }
    double price() const { return monopoly_.price; }
    double revenue() const { return monopoly_.profit; }

    // sup of p * survival(p) over prices p < x (on the scan grid plus p^M).
    double best_profit_below(double x) const;
    // sup over prices p > x.
    double best_profit_above(double x) const;

private:
    Distribution dist_;
    PricePoint monopoly_;
    std::vector<double> grid_;
    std::vector<double> prefix_;
    std::vector<double> suffix_;
};

}  // namespace adplan
