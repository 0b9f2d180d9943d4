#pragma once

#include "adplan/config.hpp"
#include "adplan/report.hpp"

#include <string>
#include <utility>
#include <vector>

namespace adplan {

struct ScenarioRun {
    std::vector<OutcomeRow> outcomes;
    std::vector<PlanBlock> plans;
    std::vector<CertificateRow> certificates;
    std::vector<SweepRow> sweep;
    // Seconds per solver and solver diagnostics, for the metadata sidecar.
    std::vector<std::pair<std::string, double>> timings;
    std::vector<std::string> diagnostics;
    // A row or certificate ended nonconverged, infeasible or failed.
    bool degraded = false;
};

// Runs every solver in [run] solvers, in order, plus oracle certificates when
// requested. Solver failures become rows with a degraded status.
ScenarioRun run_scenario(const ScenarioConfig& config);

// The comparison sweep of the [sweep] block.
ScenarioRun run_sweep(const ScenarioConfig& config);

// Certificates for the listed solvers, or for producer, consumer_exante and
// consumer_expost when none are listed.
ScenarioRun run_oracle_check(const ScenarioConfig& config);

// Writes outcomes.csv, plans.txt, and certificates.csv / sweep.csv when
// non-empty, plus the run_meta.txt sidecar.
void write_outputs(const ScenarioRun& run, const ScenarioConfig& config, const std::string& dir,
                   const std::string& command);

}  // namespace adplan
