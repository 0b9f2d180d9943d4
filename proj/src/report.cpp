#include "adplan/report.hpp"

#include "adplan/errors.hpp"
#include "adplan/numerics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace adplan {

namespace {

std::string cell(double v) { return std::isnan(v) ? "" : format_real(v); }

}  // namespace

std::string outcomes_csv(const std::vector<OutcomeRow>& rows) {
    std::ostringstream s;
    s << "scenario_id,solver,welfare_mode,alpha_or_beta,p_star,p_lower,q_star,quantity,PS,CS_exante,"
         "CS_expost,total_cost,objective_value,iterations,status\n";
    for (const auto& r : rows) {
        s << r.scenario_id << ',' << r.solver << ',' << r.welfare_mode << ',' << cell(r.alpha_or_beta) << ','
          << cell(r.p_star) << ',' << cell(r.p_lower) << ',' << cell(r.q_star) << ',' << cell(r.quantity) << ','
          << cell(r.ps) << ',' << cell(r.cs_exante) << ',' << cell(r.cs_expost) << ',' << cell(r.total_cost)
          << ',' << cell(r.objective_value) << ',' << r.iterations << ',' << to_string(r.status) << '\n';
    }
    return s.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream s;
    s << "family,param,regime,price,quantity,PS,CS_exante,CS_expost,total_cost,status\n";
    for (const auto& r : rows) {
        s << r.family << ',' << cell(r.param) << ',' << r.regime << ',' << cell(r.price) << ',' << cell(r.quantity)
          << ',' << cell(r.ps) << ',' << cell(r.cs_exante) << ',' << cell(r.cs_expost) << ','
          << cell(r.total_cost) << ',' << to_string(r.status) << '\n';
    }
    return s.str();
}

std::string plans_txt(const std::vector<PlanBlock>& blocks) {
    std::ostringstream s;
    for (const auto& b : blocks) {
        s << "plan " << b.scenario_id << '/' << b.solver << '\n' << b.plan.serialize();
    }
    return s.str();
}

std::string certificates_csv(const std::vector<CertificateRow>& rows) {
    std::ostringstream s;
    s << "scenario_id,solver,N,M,oracle_value,snapped_value,gap,slack,passed,forbidden_maps,oracle_price,"
         "snapped_price,oracle_map\n";
    for (const auto& r : rows) {
        const Certificate& c = r.certificate;
        s << r.scenario_id << ',' << r.solver << ',' << r.N << ',' << r.M << ',' << cell(c.oracle_value) << ','
          << cell(c.snapped_value) << ',' << cell(c.gap) << ',' << cell(c.slack) << ','
          << (c.passed ? "pass" : "fail") << ',' << r.forbidden_maps << ',' << cell(c.oracle.price) << ','
          << cell(c.snapped.price) << ',' << r.oracle_map << '\n';
    }
    return s.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::invalid_input, "cannot open " + path + " for writing");
    out << content;
    if (!out) fail(ErrorKind::invalid_input, "write failed for " + path);
}

}  // namespace adplan
