// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any
// failure.

#include "adplan/benchmarks.hpp"
#include "adplan/exante.hpp"
#include "adplan/expost.hpp"
#include "adplan/extensions.hpp"
#include "adplan/oracle.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace adplan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const Distribution unif = Distribution::uniform(0, 1);
const CostFunction quad4 = CostFunction::additive_power(4, 2);

Outcome a1() {
    Outcome o;
    MarketOutcome m = outcome_of(identity_plan(unif), unif, quad4, Objective::weighted(1, WelfareMode::exante));
    o.require(std::abs(m.price - 0.5) <= 1e-6, "p^M=" + num(m.price));
    o.require(std::abs(m.ps - 0.25) <= 1e-6, "PS=" + num(m.ps));
    o.require(std::abs(m.cs_exante - 0.125) <= 1e-6, "CS=" + num(m.cs_exante));
    return o;
}

Outcome a2() {
    Outcome o;
    UniformSolution s = solve_uniform_additive(unif, quad4, UniformGoal::producer);
    o.require(std::abs(s.price - 4.0 / 7.0) <= 1e-4, "p^U=" + num(s.price));
    o.require(std::abs(s.shift - 1.0 / 7.0) <= 1e-4, "d=" + num(s.shift));
    return o;
}

Outcome a3() {
    Outcome o;
    IntervalSolution s = solve_producer_optimal(unif, quad4);
    o.require(std::abs(s.p_star - 0.82) <= 0.01, "p*=" + num(s.p_star));
    double foc = quad4(s.p_lower, s.p_star) - s.p_star;
    o.require(std::abs(foc) < 1e-4, "FOC-l residual=" + num(foc));
    return o;
}

Outcome a4() {
    Outcome o;
    IntervalSolution s = solve_consumer_optimal_exante(unif, quad4);
    o.require(std::abs(s.p_star - 0.27) <= 0.01, "p*=" + num(s.p_star));
    double dev = s.p_star * unif.survival(s.p_lower);
    o.require(std::abs(dev - 0.25) <= 1e-6, "p* survival(p_lower)=" + num(dev));
    o.require(s.outcome.cs_exante > 0.125, "CS^A=" + num(s.outcome.cs_exante));
    return o;
}

Outcome a5() {
    Outcome o;
    ConstrainedGreedySolution s = solve_expost(unif, quad4, Objective::weighted(1, WelfareMode::expost));
    o.require(std::abs(s.p_star - 0.25) <= 1e-3 && std::abs(s.q_star - 1.0) <= 1e-3,
              "(p*,q*)=(" + num(s.p_star) + "," + num(s.q_star) + ")");
    const double xs[] = {0.05, 0.5, 0.8};
    const double ys[] = {0.25, 0.5, 1.05};
    for (int i = 0; i < 3; ++i) o.require(std::abs(s.plan(xs[i]) - ys[i]) <= 1e-3, "T(" + num(xs[i]) + ")=" + num(s.plan(xs[i])));
    return o;
}

Outcome a6() {
    Outcome o;
    for (double a : {1.0, 4.0}) {
        UniformSolution s = solve_uniform_multiplicative(unif, CostFunction::multiplicative_quadratic(a));
        double expect = (1.0 + 8.0 * a) / (16.0 * a);
        o.require(std::abs(s.price - expect) <= 1e-6, "a=" + num(a) + " p^D=" + num(s.price));
    }
    return o;
}

Outcome a7() {
    Outcome o;
    auto rows = run_comparison_sweep(SweepFamily::exponential_lambda, {0.5, 1, 2}, quad4);
    for (double l : {0.5, 1.0, 2.0}) {
        double pm = 0, pu = 0, pf = 0, cs_flex = 0, cs_none = 0;
        for (const auto& r : rows) {
            if (r.param != l) continue;
            if (r.regime == "no_ads") pm = r.price, cs_none = r.cs_expost;
            if (r.regime == "uniform_producer") pu = r.price;
            if (r.regime == "flexible_producer") pf = r.price, cs_flex = r.cs_expost;
        }
        o.require(pm <= pu && pu < pf, "lambda=" + num(l) + " prices " + num(pm) + "<=" + num(pu) + "<" + num(pf));
        o.require(cs_flex < cs_none, "lambda=" + num(l) + " CS^P " + num(cs_flex) + "<" + num(cs_none));
    }
    return o;
}

Outcome a8() {
    Outcome o;
    const std::pair<const char*, Distribution> ds[] = {{"uniform", unif}, {"exponential", Distribution::exponential(1)}};
    for (const auto& [name, d] : ds) {
        UniformSolution u = solve_uniform_additive(d, quad4, UniformGoal::consumer_exante);
        MarketOutcome none = outcome_of(identity_plan(d), d, quad4, Objective::weighted(1, WelfareMode::exante));
        double cs_u = u.outcome.cs_exante - u.outcome.total_cost;
        o.require(u.shift == 0.0 && std::abs(cs_u - none.cs_exante) < 1e-9,
                  std::string(name) + " d=" + num(u.shift) + " CS^A=" + num(cs_u));
        IntervalSolution f = solve_consumer_optimal_exante(d, quad4);
        o.require(f.outcome.objective_value > none.cs_exante,
                  std::string(name) + " flexible " + num(f.outcome.objective_value) + ">" + num(none.cs_exante));
    }
    return o;
}

Outcome a9() {
    Outcome o;
    JointValue p = joint_values(unif, quad4, JointMode::producer);
    o.require(std::abs(p.value - 0.625) <= 1e-6, "producer=" + num(p.value));
    JointValue c = joint_values(unif, quad4, JointMode::consumer_exante);
    o.require(std::abs(c.value - (0.5 - c.rs.p_rs)) <= 1e-8 && std::abs(c.margin) <= 1e-8,
              "consumer_exante=" + num(c.value) + " margin=" + num(c.margin));
    JointValue e = joint_values(unif, quad4, JointMode::consumer_expost);
    double info = c.value;
    double manip = solve_expost(unif, quad4, Objective::weighted(1, WelfareMode::expost)).outcome.objective_value;
    o.require(e.value > info && e.value > manip && e.margin > 0.0,
              "consumer_expost=" + num(e.value) + " margin=" + num(e.margin));
    return o;
}

Outcome a10() {
    Outcome o;
    RegulationPolicy r = solve_regulation(unif, quad4);
    o.require(r.cs_value > 0.125, "cs=" + num(r.cs_value));
    o.require(std::abs(r.indifference_residual) < 1e-6, "indifference=" + num(r.indifference_residual));
    o.require(r.best_response_gap < 1e-6, "gap=" + num(r.best_response_gap));
    return o;
}

Outcome a11() {
    Outcome o;
    DiscreteInstance inst = discretize(unif, quad4, 6, 12);
    struct Item {
        const char* label;
        TransportPlan plan;
        Objective objective;
    };
    std::vector<Item> items;
    items.push_back({"producer", solve_producer_optimal(unif, quad4).plan, Objective::weighted(0, WelfareMode::exante)});
    items.push_back({"consumer_exante", solve_consumer_optimal_exante(unif, quad4).plan, Objective::weighted(1, WelfareMode::exante)});
    items.push_back({"consumer_expost",
                     solve_expost(unif, quad4, Objective::weighted(1, WelfareMode::expost)).plan,
                     Objective::weighted(1, WelfareMode::expost)});
    for (const auto& it : items) {
        Certificate c = crosscheck(it.plan, inst, it.objective, 0.05, it.label);
        o.require(c.passed, std::string(it.label) + " gap=" + num(c.gap));
        if (it.objective.mode() == WelfareMode::exante)
            o.require(forbidden_maps_check(inst, c.oracle).passed, std::string(it.label) + " forbidden maps");
    }
    return o;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string("\"") + ADPLAN_CLI + "\" " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome a12() {
    Outcome o;
    bool costs = check_cost_assumptions(quad4, 16).all_passed() &&
                 check_cost_assumptions(CostFunction::multiplicative_quadratic(4), 16, CostBox{0.1, 1.0, 1.0}).all_passed();
    o.require(costs, "cost assumptions");

    std::vector<std::pair<Distribution, TransportPlan>> corpus;
    for (const Distribution& d : {unif, Distribution::beta(2, 2), Distribution::exponential(1)}) {
        corpus.push_back({d, identity_plan(d)});
        corpus.push_back({d, shift_plan(d, 0.1)});
        corpus.push_back({d, scale_plan(d, 1.2)});
        corpus.push_back({d, solve_producer_optimal(d, quad4).plan});
        corpus.push_back({d, solve_consumer_optimal_exante(d, quad4).plan});
        corpus.push_back({d, solve_expost(d, quad4, Objective::weighted(1, WelfareMode::expost)).plan});
    }
    corpus.push_back({unif, solve_regulation(unif, quad4).firm_plan});
    bool fosd = true;
    double worst = 0.0;
    for (const auto& [d, plan] : corpus) {
        Demand dem = pushforward_survival(plan, d);
        for (int i = 0; i <= 1000; ++i) {
            double y = d.support_lo() + (d.upper() - d.support_lo()) * 1.5 * i / 1000.0;
            if (dem.survival(y) < d.survival(y) - 1e-10) fosd = false;
        }
        MarketOutcome m = outcome_of(plan, d, quad4, Objective::weighted(1, WelfareMode::expost));
        worst = std::max(worst, std::abs(m.ps + m.cs_expost - buyer_valuation_mass(plan, d, m.price)));
    }
    o.require(fosd, "FOSD over " + std::to_string(corpus.size()) + " plans");
    o.require(worst <= 1e-8, "accounting max error " + num(worst));

    bool same = true;
    fs::path root = fs::path(ADPLAN_SCRATCH) / "acceptance";
    for (const auto& entry : fs::directory_iterator(ADPLAN_TEST_DATA)) {
        if (entry.path().extension() != ".conf") continue;
        std::string stem = entry.path().stem().string();
        std::string cmd = stem.rfind("sweep", 0) == 0 ? "sweep" : stem == "oracle" ? "oracle-check" : "solve";
        fs::path a = root / (stem + "_1");
        fs::path b = root / (stem + "_2");
        fs::remove_all(a);
        fs::remove_all(b);
        int ra = run_cli(cmd + " " + entry.path().string() + " --out " + a.string());
        int rb = run_cli(cmd + " " + entry.path().string() + " --out " + b.string());
        if (ra != rb || ra == 1 || ra == 3) same = false;
        for (const char* f : {"outcomes.csv", "plans.txt", "sweep.csv", "certificates.csv"}) {
            bool ea = fs::exists(a / f);
            if (ea != fs::exists(b / f) || (ea && slurp(a / f) != slurp(b / f))) same = false;
        }
    }
    o.require(same, "byte-identical CSVs over two runs");
    return o;
}

struct Criterion {
    const char* id;
    double limit_s;  // infinite when the criterion sets no runtime limit
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"A1", 0.1, a1},  {"A2", 1, a2},   {"A3", 2, a3},  {"A4", 2, a4},
        {"A5", 5, a5},    {"A6", 1, a6},   {"A7", 10, a7}, {"A8", 5, a8},
        {"A9", 10, a9},   {"A10", 5, a10}, {"A11", 60, a11}, {"A12", INFINITY, a12},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs >= c.limit_s) {
            o.pass = false;
            o.detail += "; FAILED runtime limit " + num(c.limit_s) + " s";
        }
        if (!o.pass) ++failures;
        std::printf("%s %s (%.3f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
