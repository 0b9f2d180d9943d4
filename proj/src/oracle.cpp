#include "adplan/oracle.hpp"

#include "adplan/errors.hpp"
#include "adplan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace adplan {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// First target index a valuation may move to.
int first_target(const DiscreteInstance& inst, std::size_t i) {
    if (!inst.directional) return 0;
    auto it = std::lower_bound(inst.targets.begin(), inst.targets.end(), inst.valuations[i]);
    return static_cast<int>(it - inst.targets.begin());
}

struct Search {
    const DiscreteInstance& inst;
    const Objective& objective;
    bool prune;
    std::vector<double> tail_mass;  // mass of valuations i.. end
    std::vector<int> map;
    DiscreteOutcome best;
    bool found = false;
    std::uint64_t evaluated = 0;
    std::uint64_t pruned = 0;

    void run(std::size_t i, int from, double y_sum, double cost_sum) {
        const std::size_t n = inst.valuations.size();
        if (i == n) {
            ++evaluated;
            DiscreteOutcome o = evaluate_map(inst, map, objective);
            if (!found || o.value > best.value) {
                best = std::move(o);
                found = true;
            }
            return;
        }
        int start = std::max(from, first_target(inst, i));
        for (int j = start; j < static_cast<int>(inst.targets.size()); ++j) {
            double c = inst.cost[i][j];
            if (!std::isfinite(c)) continue;
            double ys = y_sum + inst.masses[i] * inst.targets[j];
            double cs = cost_sum + inst.masses[i] * c;
            if (prune && found) {
                double rest = i + 1 < n ? tail_mass[i + 1] : 0.0;
                double bound = ys + rest * inst.targets.back() - cs;
                if (bound < best.value - 1e-12) {
                    ++pruned;
                    continue;
                }
            }
            map[i] = j;
            run(i + 1, j, ys, cs);
        }
    }
};

}  // namespace

DiscreteInstance discretize(const Distribution& dist, const CostFunction& cost, int N, int M,
                            int price_grid_size, bool directional) {
    if (N < 1 || M < N) fail(ErrorKind::invalid_input, "discretization needs 1 <= N <= M");
    if (N > oracle_max_valuations || M > oracle_max_targets) {
        std::ostringstream w;
        w << "oracle budget is N <= " << oracle_max_valuations << ", M <= " << oracle_max_targets << "; got N="
          << N << ", M=" << M;
        fail(ErrorKind::size_limit, w.str());
    }
    DiscreteInstance inst;
    inst.directional = directional;
    for (int k = N; k >= 1; --k) inst.valuations.push_back(dist.quantile_survival((k - 0.5) / N));
    inst.masses.assign(N, 1.0 / N);

    const double lo = dist.support_lo();
    const double top = dist.upper();
    inst.targets = inst.valuations;
    int fill = M - N;
    for (int j = 1; j <= fill; ++j) {
        double t = lo + (top - lo) * j / fill;
        bool dup = std::any_of(inst.targets.begin(), inst.targets.end(),
                               [t](double v) { return std::abs(v - t) < 1e-12; });
        if (!dup) inst.targets.push_back(t);
    }
    std::sort(inst.targets.begin(), inst.targets.end());

    if (price_grid_size > 0) {
        inst.price_grid = linspace(lo, top, price_grid_size);
    } else {
        inst.price_grid = inst.targets;
    }

    inst.cost.assign(N, std::vector<double>(inst.targets.size()));
    for (int i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < inst.targets.size(); ++j) {
            double x = inst.valuations[i];
            double y = inst.targets[j];
            inst.cost[i][j] = directional && y < x ? inf : cost(x, y);
        }
    }
    return inst;
}

std::uint64_t stars_and_bars(int N, int M) {
    // C(M + N - 1, N), built up so every partial product is an integer
    std::uint64_t r = 1;
    for (int k = 1; k <= N; ++k) r = r * static_cast<std::uint64_t>(M - 1 + k) / k;
    return r;
}

std::uint64_t count_monotone_maps(const DiscreteInstance& inst) {
    const std::size_t n = inst.valuations.size();
    const std::size_t m = inst.targets.size();
    if (n == 0) return 1;
    // ways[j]: maps of the first i valuations whose last image is j
    std::vector<std::uint64_t> ways(m, 0);
    for (std::size_t j = 0; j < m; ++j) ways[j] = std::isfinite(inst.cost[0][j]) ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i) {
        std::vector<std::uint64_t> next(m, 0);
        std::uint64_t prefix = 0;
        for (std::size_t j = 0; j < m; ++j) {
            prefix += ways[j];
            next[j] = std::isfinite(inst.cost[i][j]) ? prefix : 0;
        }
        ways = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto w : ways) total += w;
    return total;
}

DiscreteOutcome evaluate_map(const DiscreteInstance& inst, const std::vector<int>& map,
                             const Objective& objective) {
    const std::size_t n = inst.valuations.size();
    DiscreteOutcome o;
    o.map = map;
    double best_profit = -1.0;
    for (double p : inst.price_grid) {
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (inst.targets[map[i]] >= p) q += inst.masses[i];
        }
        double profit = p * q;
        if (profit > best_profit + 1e-12 * std::max(1.0, std::abs(profit))) {
            best_profit = profit;
            o.price = p;
        }
    }
    Welfare w;
    for (std::size_t i = 0; i < n; ++i) {
        double y = inst.targets[map[i]];
        w.cost += inst.masses[i] * inst.cost[i][map[i]];
        if (y >= o.price) {
            w.ps += inst.masses[i] * o.price;
            w.cs_exante += inst.masses[i] * (inst.valuations[i] - o.price);
            w.cs_expost += inst.masses[i] * (y - o.price);
        }
    }
    o.welfare = w;
    o.value = objective.value(w);
    return o;
}

OracleResult oracle_solve(const DiscreteInstance& inst, const Objective& objective, int threads) {
    const std::size_t n = inst.valuations.size();
    if (n == 0) fail(ErrorKind::invalid_input, "empty instance");
    if (static_cast<int>(n) > oracle_max_valuations || static_cast<int>(inst.targets.size()) > oracle_max_targets)
        fail(ErrorKind::size_limit, "instance exceeds the oracle budget");
    const bool prune = objective.kind() == Objective::Kind::weighted;
    std::vector<double> tail(n);
    double acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        acc += inst.masses[i];
        tail[i] = acc;
    }

    // One branch per first image, reduced in index order.
    const std::size_t m = inst.targets.size();
    std::vector<Search> branches;
    branches.reserve(m);
    for (std::size_t j = 0; j < m; ++j) branches.push_back(Search{inst, objective, prune, tail, std::vector<int>(n, 0), {}});
    parallel_for(m, threads, [&](std::size_t j) {
        Search& s = branches[j];
        double c = inst.cost[0][j];
        if (!std::isfinite(c)) return;
        s.map[0] = static_cast<int>(j);
        s.run(1, static_cast<int>(j), inst.masses[0] * inst.targets[j], inst.masses[0] * c);
    });

    OracleResult r;
    bool found = false;
    for (auto& s : branches) {
        r.maps_evaluated += s.evaluated;
        r.branches_pruned += s.pruned;
        if (s.found && (!found || s.best.value > r.best.value)) {
            r.best = s.best;
            found = true;
        }
    }
    if (!found) fail(ErrorKind::invalid_input, "instance admits no feasible map");
    return r;
}

std::vector<int> snap_plan(const TransportPlan& plan, const DiscreteInstance& inst) {
    std::vector<int> map;
    const int m = static_cast<int>(inst.targets.size());
    int prev = 0;
    for (double x : inst.valuations) {
        double y = plan(x);
        int j;
        if (inst.directional) {
            auto it = std::lower_bound(inst.targets.begin(), inst.targets.end(), y - 1e-12);
            j = it == inst.targets.end() ? m - 1 : static_cast<int>(it - inst.targets.begin());
        } else {
            j = 0;
            for (int k = 1; k < m; ++k) {
                if (std::abs(inst.targets[k] - y) < std::abs(inst.targets[j] - y)) j = k;
            }
        }
        j = std::max(j, prev);
        map.push_back(j);
        prev = j;
    }
    return map;
}

Certificate crosscheck(const TransportPlan& plan, const DiscreteInstance& inst, const Objective& objective,
                       double slack, const std::string& label, int threads) {
    Certificate c;
    c.label = label;
    c.slack = slack;
    c.oracle = oracle_solve(inst, objective, threads).best;
    c.snapped = evaluate_map(inst, snap_plan(plan, inst), objective);
    c.oracle_value = c.oracle.value;
    c.snapped_value = c.snapped.value;
    c.gap = c.oracle_value - c.snapped_value;
    c.passed = c.gap <= slack;
    return c;
}

Check forbidden_maps_check(const DiscreteInstance& inst, const DiscreteOutcome& outcome) {
    Check c("forbidden_maps");
    const double p = outcome.price;
    for (std::size_t i = 0; i < inst.valuations.size(); ++i) {
        double x = inst.valuations[i];
        double y = inst.targets[outcome.map[i]];
        if (!(y > x + 1e-12)) continue;
        std::ostringstream w;
        if (y < p - 1e-12) {
            w << "x=" << x << " moved to " << y << " below the price " << p;
            c.flag(w.str());
        } else if (y > p + 1e-12) {
            w << "x=" << x << " moved to " << y << " above the price " << p;
            c.flag(w.str());
        }
    }
    return c;
}

std::string format_map(const DiscreteInstance& inst, const std::vector<int>& map) {
    std::ostringstream s;
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (i) s << ' ';
        s << format_real(inst.valuations[i]) << "->" << format_real(inst.targets[map[i]]);
    }
    return s.str();
}

}  // namespace adplan
