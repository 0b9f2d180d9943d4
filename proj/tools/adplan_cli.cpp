// Command-line front end: parses a scenario config, runs the requested
// solvers and writes CSV outputs.

#include "adplan/config.hpp"
#include "adplan/errors.hpp"
#include "adplan/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

enum Exit { ok = 0, config_error = 1, degraded = 2, internal = 3 };

std::optional<adplan::ScenarioConfig> load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << path << ": cannot read config\n";
        return std::nullopt;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    adplan::ParseResult parsed = adplan::parse_config(buf.str());
    if (!parsed.config) {
        std::istringstream lines(adplan::format_errors(parsed.errors));
        for (std::string l; std::getline(lines, l);) std::cerr << path << ": " << l << '\n';
        return std::nullopt;
    }
    return parsed.config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal demand-manipulation plans against a posted-price monopolist"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::optional<double> tol;
    std::optional<int> threads;
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--tol", tol, "Objective tolerance, overrides [solver] tol")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "Worker threads, overrides [solver] threads")->check(CLI::Range(1, 256));

    std::string config_path;
    auto add = [&](const char* name, const char* help) {
        CLI::App* sub = app.add_subcommand(name, help);
        // global options may follow the subcommand
        sub->fallthrough();
        sub->add_option("config", config_path, "Scenario config file")->required();
        return sub;
    };
    CLI::App* solve = add("solve", "Run the solvers listed in [run]");
    CLI::App* sweep = add("sweep", "Run the comparison sweep in [sweep]");
    CLI::App* oracle = add("oracle-check", "Certify solver plans against the exhaustive discrete oracle");
    CLI::App* figures = add("figures-data", "Write every CSV the figure scripts read");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::config_error;
    }

    std::optional<adplan::ScenarioConfig> cfg = load(config_path);
    if (!cfg) return Exit::config_error;
    if (tol) cfg->solver.tol = *tol;
    if (threads) cfg->solver.threads = *threads;

    try {
        adplan::ScenarioRun run;
        std::string command;
        if (solve->parsed()) {
            command = "solve";
            run = adplan::run_scenario(*cfg);
        } else if (sweep->parsed()) {
            command = "sweep";
            run = adplan::run_sweep(*cfg);
        } else if (oracle->parsed()) {
            command = "oracle-check";
            run = adplan::run_oracle_check(*cfg);
        } else if (figures->parsed()) {
            command = "figures-data";
            if (!cfg->run.solvers.empty()) run = adplan::run_scenario(*cfg);
            if (cfg->sweep.present) {
                adplan::ScenarioRun s = adplan::run_sweep(*cfg);
                run.sweep = std::move(s.sweep);
                run.timings.insert(run.timings.end(), s.timings.begin(), s.timings.end());
                run.diagnostics.insert(run.diagnostics.end(), s.diagnostics.begin(), s.diagnostics.end());
                run.degraded = run.degraded || s.degraded;
            }
        }
        adplan::write_outputs(run, *cfg, out_dir, command);
        for (const auto& d : run.diagnostics) std::cerr << d << '\n';
        return run.degraded ? Exit::degraded : Exit::ok;
    } catch (const adplan::Error& e) {
        std::cerr << "error: " << adplan::to_string(e.kind()) << ": " << e.what() << '\n';
        bool user_fault = e.kind() == adplan::ErrorKind::size_limit || e.kind() == adplan::ErrorKind::invalid_input ||
                          e.kind() == adplan::ErrorKind::invalid_objective;
        return user_fault ? Exit::config_error : Exit::internal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return Exit::internal;
    }
}
