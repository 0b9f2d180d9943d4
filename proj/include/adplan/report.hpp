#pragma once

#include "adplan/benchmarks.hpp"
#include "adplan/oracle.hpp"
#include "adplan/plan.hpp"

#include <string>
#include <vector>

namespace adplan {

// One outcomes.csv row. NaN fields are written empty.
struct OutcomeRow {
    std::string scenario_id;
    std::string solver;
    std::string welfare_mode;
    double alpha_or_beta = 0.0;
    double p_star = 0.0;
    double p_lower = 0.0;
    double q_star = 0.0;
    double quantity = 0.0;
    double ps = 0.0;
    double cs_exante = 0.0;
    double cs_expost = 0.0;
    double total_cost = 0.0;
    double objective_value = 0.0;
    int iterations = 0;
    Status status = Status::ok;
};

struct PlanBlock {
    std::string scenario_id;
    std::string solver;
    TransportPlan plan;
};

struct CertificateRow {
    std::string scenario_id;
    std::string solver;
    int N = 0;
    int M = 0;
    Certificate certificate;
    std::string forbidden_maps;  // pass, fail, or na for ex-post objectives
    std::string oracle_map;      // valuation->target pairs
};

std::string outcomes_csv(const std::vector<OutcomeRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string plans_txt(const std::vector<PlanBlock>& blocks);
std::string certificates_csv(const std::vector<CertificateRow>& rows);

// Fails with invalid_input when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace adplan
