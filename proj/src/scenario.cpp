#include "adplan/scenario.hpp"

#include "adplan/errors.hpp"
#include "adplan/exante.hpp"
#include "adplan/expost.hpp"
#include "adplan/extensions.hpp"
#include "adplan/numerics.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <sstream>

namespace adplan {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

struct Solved {
    OutcomeRow row;
    std::optional<TransportPlan> plan;
    std::optional<Objective> objective;
    std::string diagnostic;
};

OutcomeRow blank_row(const ScenarioConfig& cfg, const std::string& solver, const std::string& mode, double weight) {
    OutcomeRow r;
    r.scenario_id = cfg.id;
    r.solver = solver;
    r.welfare_mode = mode;
    r.alpha_or_beta = weight;
    r.p_star = r.p_lower = r.q_star = r.quantity = nan;
    r.ps = r.cs_exante = r.cs_expost = r.total_cost = r.objective_value = nan;
    return r;
}

void fill(OutcomeRow& r, const MarketOutcome& o) {
    r.quantity = o.quantity;
    r.ps = o.ps;
    r.cs_exante = o.cs_exante;
    r.cs_expost = o.cs_expost;
    r.total_cost = o.total_cost;
    r.objective_value = o.objective_value;
}

Status interval_status(const IntervalSolution& s) {
    if (!s.price_check.ok) return Status::infeasible;
    bool identity = s.plan.segments.size() == 1 && s.plan.segments.front().is_identity();
    return identity ? Status::corner : Status::ok;
}

Solved from_interval(const ScenarioConfig& cfg, const std::string& name, const IntervalSolution& s,
                     const Objective& obj) {
    Solved out;
    out.row = blank_row(cfg, name, obj.mode_label(), obj.weight());
    out.row.p_star = s.p_star;
    out.row.p_lower = s.p_lower;
    out.row.q_star = s.outcome.quantity;
    fill(out.row, s.outcome);
    out.row.status = interval_status(s);
    out.plan = s.plan;
    out.objective = obj;
    out.diagnostic = std::string("binding=") + to_string(s.binding);
    return out;
}

Solved from_greedy(const ScenarioConfig& cfg, const std::string& name, const ConstrainedGreedySolution& s,
                   const Objective& obj, double weight) {
    Solved out;
    out.row = blank_row(cfg, name, obj.mode_label(), weight);
    out.row.p_star = s.p_star;
    out.row.p_lower = s.x_q;
    out.row.q_star = s.q_star;
    fill(out.row, s.outcome);
    out.row.iterations = s.fixed_point_iters > 0 ? s.fixed_point_iters : s.search_iters;
    out.row.status = s.status;
    out.plan = s.plan;
    out.objective = obj;
    out.diagnostic = s.diagnostic;
    return out;
}

Solved solve_one(const ScenarioConfig& cfg, const std::string& name) {
    const Distribution dist = cfg.distribution.build();
    const CostFunction cost = cfg.cost.build();
    const SolverOptions& opts = cfg.solver;
    const Objective scenario_obj = cfg.objective.build();

    if (name == "no_ads") {
        Solved out;
        out.row = blank_row(cfg, name, scenario_obj.mode_label(), cfg.objective.weight());
        TransportPlan plan = identity_plan(dist);
        MarketOutcome o = outcome_of(plan, dist, cost, scenario_obj, std::nullopt, opts.pricing);
        out.row.p_star = out.row.p_lower = o.price;
        out.row.q_star = o.quantity;
        fill(out.row, o);
        out.plan = plan;
        out.objective = scenario_obj;
        return out;
    }
    if (name == "uniform_producer" || name == "uniform_consumer" || name == "uniform_multiplicative") {
        bool producer = name != "uniform_consumer";
        Objective obj = Objective::weighted(producer ? 0.0 : 1.0, WelfareMode::exante);
        UniformSolution s = name == "uniform_multiplicative"
                                ? solve_uniform_multiplicative(dist, cost, nullptr, opts)
                                : solve_uniform_additive(dist, cost, producer ? UniformGoal::producer
                                                                              : UniformGoal::consumer_exante,
                                                         opts);
        Solved out;
        out.row = blank_row(cfg, name, obj.mode_label(), obj.weight());
        out.row.p_star = s.price;
        out.row.q_star = s.outcome.quantity;
        fill(out.row, s.outcome);
        out.row.status = s.shift == 0.0 ? Status::corner : Status::ok;
        out.plan = s.plan;
        out.objective = obj;
        std::ostringstream d;
        d << "shift=" << format_real(s.shift) << " factor=" << format_real(s.factor);
        out.diagnostic = d.str();
        return out;
    }
    if (name == "producer")
        return from_interval(cfg, name, solve_producer_optimal(dist, cost, opts), Objective::weighted(0.0, WelfareMode::exante));
    if (name == "consumer_exante")
        return from_interval(cfg, name, solve_consumer_optimal_exante(dist, cost, opts),
                             Objective::weighted(1.0, WelfareMode::exante));
    if (name == "exante") {
        if (scenario_obj.mode() != WelfareMode::exante)
            fail(ErrorKind::invalid_objective, "solver exante needs an ex-ante objective");
        IntervalSolution s = scenario_obj.kind() == Objective::Kind::weighted
                                 ? solve_weighted_exante(dist, cost, scenario_obj.weight(), opts)
                                 : solve_interval_general(dist, cost, scenario_obj, opts);
        return from_interval(cfg, name, s, scenario_obj);
    }
    if (name == "expost")
        return from_greedy(cfg, name, solve_expost(dist, cost, scenario_obj, opts), scenario_obj, cfg.objective.weight());
    if (name == "consumer_expost") {
        Objective obj = Objective::weighted(1.0, WelfareMode::expost);
        return from_greedy(cfg, name, solve_expost(dist, cost, obj, opts), obj, 1.0);
    }
    if (name == "uncertainty_expectation" || name == "uncertainty_maxmin") {
        double beta = cfg.objective.kind == "uncertainty" ? cfg.objective.beta : 0.0;
        auto mode = name == "uncertainty_maxmin" ? UncertaintyMode::maxmin : UncertaintyMode::expectation;
        UncertaintySolution s = solve_welfare_uncertainty(dist, cost, beta, mode, opts);
        Objective obj = mode == UncertaintyMode::maxmin ? Objective::weighted(1.0, WelfareMode::exante)
                                                        : Objective::uncertainty_mix(beta);
        Solved out;
        out.row = blank_row(cfg, name, obj.mode_label(), beta);
        out.row.p_star = s.p_star;
        out.row.p_lower = s.p_lower;
        out.row.q_star = s.q_star;
        fill(out.row, s.outcome);
        out.row.status = s.status;
        out.plan = s.plan;
        out.objective = obj;
        return out;
    }
    if (name == "twist") {
        TwistSolution s = solve_twist(dist, cost, scenario_obj.mode(), scenario_obj, opts);
        Solved out;
        out.row = blank_row(cfg, name, scenario_obj.mode_label(), cfg.objective.weight());
        out.row.p_star = s.p_star;
        out.row.p_lower = s.x_q;
        out.row.q_star = s.q_star;
        fill(out.row, s.outcome);
        out.row.status = s.status;
        out.plan = s.plan;
        out.objective = scenario_obj;
        out.diagnostic = s.diagnostic + (s.single_crossing.passed ? "" : " single_crossing=fail");
        return out;
    }
    if (name == "regulation") {
        RegulationPolicy s = solve_regulation(dist, cost, opts);
        Objective obj = Objective::weighted(1.0, WelfareMode::exante);
        Solved out;
        out.row = blank_row(cfg, name, obj.mode_label(), 1.0);
        out.row.p_star = s.p_star;
        out.row.p_lower = s.p_lower;
        MarketOutcome o = outcome_of(s.firm_plan, dist, cost, obj, s.p_star, opts.pricing);
        out.row.q_star = o.quantity;
        fill(out.row, o);
        out.row.objective_value = s.cs_value;
        out.row.status = s.status;
        out.plan = s.firm_plan;
        std::ostringstream d;
        d << "indifference=" << format_real(s.indifference_residual) << " gap=" << format_real(s.best_response_gap);
        out.diagnostic = d.str() + (s.diagnostic.empty() ? "" : " " + s.diagnostic);
        return out;
    }
    if (name == "joint_producer" || name == "joint_consumer_exante" || name == "joint_consumer_expost") {
        JointMode mode = name == "joint_producer"          ? JointMode::producer
                         : name == "joint_consumer_exante" ? JointMode::consumer_exante
                                                           : JointMode::consumer_expost;
        JointValue j = joint_values(dist, cost, mode, opts);
        bool producer = mode == JointMode::producer;
        Solved out;
        out.row = blank_row(cfg, name, mode == JointMode::consumer_expost ? "expost" : "exante", producer ? 0.0 : 1.0);
        out.row.objective_value = j.value;
        if (producer) {
            // Everyone pooled at the mean and shifted up by d buys at E + d.
            double price = dist.mean() + j.shift;
            out.row.p_star = price;
            out.row.q_star = out.row.quantity = 1.0;
            out.row.ps = price;
            out.row.cs_exante = -j.shift;
            out.row.cs_expost = 0.0;
            out.row.total_cost = cost.distance_cost(j.shift);
        } else if (mode == JointMode::consumer_exante) {
            out.row.p_star = j.rs.p_rs;
            out.row.q_star = out.row.quantity = 1.0;
            out.row.ps = j.rs.p_rs;
            out.row.cs_exante = out.row.cs_expost = dist.mean() - j.rs.p_rs;
            out.row.total_cost = 0.0;
        }
        out.row.status = j.margin > 0.0 || mode == JointMode::consumer_exante ? Status::ok : Status::corner;
        std::ostringstream d;
        d << "construction=" << j.construction << " margin=" << format_real(j.margin)
          << (j.lower_bound ? " lower_bound" : "");
        out.diagnostic = d.str();
        return out;
    }
    fail(ErrorKind::invalid_input, "unknown solver: " + name);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void certify(ScenarioRun& run, const ScenarioConfig& cfg, const Solved& s) {
    if (!s.plan || !s.objective) return;
    const Distribution dist = cfg.distribution.build();
    const CostFunction cost = cfg.cost.build();
    DiscreteInstance inst = discretize(dist, cost, cfg.run.oracle_n, cfg.run.oracle_m, 0, s.plan->directional);
    CertificateRow row;
    row.scenario_id = cfg.id;
    row.solver = s.row.solver;
    row.N = cfg.run.oracle_n;
    row.M = cfg.run.oracle_m;
    row.certificate = crosscheck(*s.plan, inst, *s.objective, cfg.run.oracle_slack, s.row.solver, cfg.solver.threads);
    if (s.objective->mode() == WelfareMode::exante) {
        row.forbidden_maps = forbidden_maps_check(inst, row.certificate.oracle).passed ? "pass" : "fail";
    } else {
        row.forbidden_maps = "na";
    }
    row.oracle_map = format_map(inst, row.certificate.oracle.map);
    if (!row.certificate.passed || row.forbidden_maps == "fail") run.degraded = true;
    run.certificates.push_back(std::move(row));
}

ScenarioRun run_solvers(const ScenarioConfig& cfg, const std::vector<std::string>& solvers, bool oracle) {
    ScenarioRun run;
    for (const auto& name : solvers) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            Solved s = solve_one(cfg, name);
            if (s.row.status == Status::nonconverged || s.row.status == Status::infeasible) run.degraded = true;
            if (!s.diagnostic.empty()) run.diagnostics.push_back(name + ": " + s.diagnostic);
            run.outcomes.push_back(s.row);
            if (s.plan) run.plans.push_back({cfg.id, name, *s.plan});
            run.timings.emplace_back(name, seconds_since(t0));
            if (oracle) {
                auto t1 = std::chrono::steady_clock::now();
                certify(run, cfg, s);
                run.timings.emplace_back(name + "/oracle", seconds_since(t1));
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::size_limit || e.kind() == ErrorKind::invalid_input) throw;
            OutcomeRow r = blank_row(cfg, name, cfg.objective.build().mode_label(), cfg.objective.weight());
            r.status = e.kind() == ErrorKind::non_convergence ? Status::nonconverged : Status::infeasible;
            run.outcomes.push_back(r);
            run.diagnostics.push_back(name + ": " + to_string(e.kind()) + ": " + e.what());
            run.degraded = true;
            run.timings.emplace_back(name, seconds_since(t0));
        }
    }
    return run;
}

}  // namespace

ScenarioRun run_scenario(const ScenarioConfig& config) {
    return run_solvers(config, config.run.solvers, config.run.oracle_check);
}

ScenarioRun run_sweep(const ScenarioConfig& config) {
    if (!config.sweep.present) fail(ErrorKind::invalid_input, "config has no [sweep] section");
    ScenarioRun run;
    auto t0 = std::chrono::steady_clock::now();
    run.sweep = run_comparison_sweep(config.sweep.family, config.sweep.values, config.cost.build(), config.solver);
    run.timings.emplace_back(std::string("sweep/") + to_string(config.sweep.family), seconds_since(t0));
    for (const auto& r : run.sweep) {
        if (r.status == Status::nonconverged || r.status == Status::infeasible) {
            run.degraded = true;
            run.diagnostics.push_back(r.family + "=" + format_real(r.param) + " " + r.regime + ": " + r.diagnostic);
        }
    }
    for (const auto& c : sweep_orderings(run.sweep).checks) {
        run.diagnostics.push_back(c.name + (c.passed ? " pass" : " fail"));
        for (const auto& w : c.witnesses) run.diagnostics.push_back("  " + w);
    }
    return run;
}

ScenarioRun run_oracle_check(const ScenarioConfig& config) {
    std::vector<std::string> solvers = config.run.solvers;
    if (solvers.empty()) solvers = {"producer", "consumer_exante", "consumer_expost"};
    return run_solvers(config, solvers, true);
}

void write_outputs(const ScenarioRun& run, const ScenarioConfig& config, const std::string& dir,
                   const std::string& command) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::invalid_input, "cannot create output directory " + dir + ": " + ec.message());
    auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    if (!run.outcomes.empty() || run.sweep.empty()) {
        write_text_file(path("outcomes.csv"), outcomes_csv(run.outcomes));
        write_text_file(path("plans.txt"), plans_txt(run.plans));
    }
    if (!run.certificates.empty()) write_text_file(path("certificates.csv"), certificates_csv(run.certificates));
    if (!run.sweep.empty()) write_text_file(path("sweep.csv"), sweep_csv(run.sweep));

    std::ostringstream meta;
    meta << "command " << command << '\n';
    meta << "scenario " << config.id << '\n';
    meta << "distribution " << config.distribution.build().describe() << '\n';
    meta << "cost " << config.cost.build().name() << '\n';
    meta << "objective " << config.objective.build().describe() << '\n';
    meta << "tol " << format_real(config.solver.tol) << " grid " << config.solver.grid << " grid2 "
         << config.solver.grid2 << " threads " << config.solver.threads << '\n';
    for (const auto& [name, secs] : run.timings) meta << "time " << name << ' ' << format_real(secs) << '\n';
    for (const auto& d : run.diagnostics) meta << "note " << d << '\n';
    meta << "degraded " << (run.degraded ? "yes" : "no") << '\n';
    write_text_file(path("run_meta.txt"), meta.str());
}

}  // namespace adplan
