#pragma once

#include "adplan/benchmarks.hpp"
#include "adplan/cost.hpp"
#include "adplan/distribution.hpp"
#include "adplan/objective.hpp"
#include "adplan/options.hpp"

#include <optional>
#include <string>
#include <vector>

namespace adplan {

struct DistributionSpec {
    std::string kind = "uniform";
    double lo = 0.0;
    double hi = 1.0;
    double alpha = 2.0;
    double beta = 2.0;
    double lambda = 1.0;
    std::vector<double> breakpoints;
    std::vector<double> cdf;

    Distribution build() const;
};

struct CostSpec {
    std::string kind = "additive_power";  // or multiplicative_quadratic
    double a = 4.0;
    double k = 2.0;

    CostFunction build() const;
};

struct ObjectiveSpec {
    std::string kind = "weighted";  // weighted, intermediary, uncertainty
    double alpha = 1.0;
    double beta = 0.0;
    WelfareMode mode = WelfareMode::exante;
    // Outside options of the intermediary: uniform on [outside_lo, outside_hi].
    double outside_lo = 0.0;
    double outside_hi = 1.0;

    Objective build() const;
    // alpha, beta or NaN
    double weight() const;
};

struct RunSpec {
    std::vector<std::string> solvers;
    bool oracle_check = false;
    int oracle_n = 6;
    int oracle_m = 12;
    double oracle_slack = 0.05;
};

struct SweepSpec {
    bool present = false;
    SweepFamily family = SweepFamily::exponential_lambda;
    std::vector<double> values;
};

struct ScenarioConfig {
    std::string id = "scenario";
    DistributionSpec distribution;
    CostSpec cost;
    ObjectiveSpec objective;
    SolverOptions solver;
    RunSpec run;
    SweepSpec sweep;
};

// Solver names accepted in [run] solvers.
const std::vector<std::string>& known_solvers();

struct ConfigError {
    int line = 0;  // 0 when the problem has no single line
    std::string message;
};

struct ParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<ConfigError> errors;
};

// Sectioned `key = value` text with `#` comments. Every problem found is
// reported, each with its line.
ParseResult parse_config(const std::string& text);

std::string format_errors(const std::vector<ConfigError>& errors);

}  // namespace adplan
