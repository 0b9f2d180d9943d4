#include "adplan/config.hpp"

#include "adplan/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace adplan {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
};

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"scenario", {"id"}},
        {"distribution", {"kind", "lo", "hi", "alpha", "beta", "lambda", "breakpoints", "cdf"}},
        {"cost", {"kind", "a", "k"}},
        {"objective", {"kind", "alpha", "beta", "welfare_mode", "outside_lo", "outside_hi"}},
        {"solver", {"tol", "grid", "grid2", "polish_iter", "damping", "max_iter", "threads"}},
        {"run", {"solvers", "oracle_check", "oracle_n", "oracle_m", "oracle_slack"}},
        {"sweep", {"family", "values"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        std::istringstream words(item);
        std::string w;
        while (words >> w) out.push_back(w);
    }
    return out;
}

// Typed reads from one section, collecting errors.
class Reader {
public:
    Reader(const std::string& name, const Section* sec, std::vector<ConfigError>& errors)
        : name_(name), sec_(sec), errors_(errors) {}

    bool has(const std::string& key) const { return sec_ && sec_->entries.count(key); }
    int line(const std::string& key) const { return has(key) ? sec_->entries.at(key).line : section_line(); }
    int section_line() const { return sec_ ? sec_->line : 0; }

    void missing(const std::string& key) {
        errors_.push_back({section_line(), "missing required key " + name_ + "." + key});
    }
    void error(const std::string& key, const std::string& message) {
        errors_.push_back({line(key), name_ + "." + key + ": " + message});
    }

    std::string text(const std::string& key, const std::string& fallback, bool required = false) {
        if (!has(key)) {
            if (required) missing(key);
            return fallback;
        }
        return sec_->entries.at(key).value;
    }

    double number(const std::string& key, double fallback, bool required = false) {
        if (!has(key)) {
            if (required) missing(key);
            return fallback;
        }
        auto v = to_double(sec_->entries.at(key).value);
        if (!v) {
            error(key, "not a number: '" + sec_->entries.at(key).value + "'");
            return fallback;
        }
        return *v;
    }

    int integer(const std::string& key, int fallback) {
        double v = number(key, fallback);
        if (v != std::floor(v) || std::abs(v) > 1e9) {
            error(key, "not an integer");
            return fallback;
        }
        return static_cast<int>(v);
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const std::string& v = sec_->entries.at(key).value;
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        error(key, "not a boolean: '" + v + "'");
        return fallback;
    }

    std::vector<double> numbers(const std::string& key, bool required = false) {
        std::vector<double> out;
        if (!has(key)) {
            if (required) missing(key);
            return out;
        }
        for (const auto& w : split_list(sec_->entries.at(key).value)) {
            auto v = to_double(w);
            if (!v) {
                error(key, "not a number: '" + w + "'");
                return {};
            }
            out.push_back(*v);
        }
        return out;
    }

    void check(const std::string& key, bool ok, const std::string& message) {
        if (has(key) && !ok) error(key, message);
    }

private:
    std::string name_;
    const Section* sec_;
    std::vector<ConfigError>& errors_;
};

}  // namespace

Distribution DistributionSpec::build() const {
    if (kind == "uniform") return Distribution::uniform(lo, hi);
    if (kind == "beta") return Distribution::beta(alpha, beta);
    if (kind == "exponential") return Distribution::exponential(lambda);
    if (kind == "tabulated") return Distribution::tabulated(breakpoints, cdf);
    fail(ErrorKind::invalid_input, "unknown distribution kind: " + kind);
}

CostFunction CostSpec::build() const {
    if (kind == "additive_power") return CostFunction::additive_power(a, k);
    if (kind == "multiplicative_quadratic") return CostFunction::multiplicative_quadratic(a);
    fail(ErrorKind::invalid_input, "unknown cost kind: " + kind);
}

Objective ObjectiveSpec::build() const {
    if (kind == "weighted") return Objective::weighted(alpha, mode);
    if (kind == "uncertainty") return Objective::uncertainty_mix(beta);
    if (kind == "intermediary") return Objective::intermediary(Distribution::uniform(outside_lo, outside_hi), mode);
    fail(ErrorKind::invalid_input, "unknown objective kind: " + kind);
}

double ObjectiveSpec::weight() const {
    if (kind == "weighted") return alpha;
    if (kind == "uncertainty") return beta;
    return std::numeric_limits<double>::quiet_NaN();
}

const std::vector<std::string>& known_solvers() {
    static const std::vector<std::string> names = {
        "no_ads",           "uniform_producer",        "uniform_consumer",      "uniform_multiplicative",
        "producer",         "consumer_exante",         "exante",                "expost",
        "consumer_expost",  "twist",                   "joint_producer",        "joint_consumer_exante",
        "joint_consumer_expost", "regulation",         "uncertainty_expectation", "uncertainty_maxmin",
    };
    return names;
}

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    auto& errors = result.errors;
    std::map<std::string, Section> sections;
    std::string current;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back({lineno, "malformed section header"});
                current.clear();
                continue;
            }
            current = trim(line.substr(1, line.size() - 2));
            if (!schema().count(current)) {
                errors.push_back({lineno, "unknown section [" + current + "]"});
                current.clear();
                continue;
            }
            if (sections.count(current)) {
                errors.push_back({lineno, "duplicate section [" + current + "]"});
            } else {
                sections[current].line = lineno;
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back({lineno, "expected key = value"});
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (current.empty()) {
            errors.push_back({lineno, "key '" + key + "' outside a known section"});
            continue;
        }
        if (!schema().at(current).count(key)) {
            errors.push_back({lineno, "unknown key " + current + "." + key});
            continue;
        }
        auto& entries = sections[current].entries;
        if (entries.count(key)) {
            errors.push_back({lineno, "duplicate key " + current + "." + key});
            continue;
        }
        if (value.empty()) {
            errors.push_back({lineno, "empty value for " + current + "." + key});
            continue;
        }
        entries[key] = {value, lineno};
    }

    auto section = [&](const std::string& name) -> const Section* {
        auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    };

    ScenarioConfig cfg;
    {
        Reader r("scenario", section("scenario"), errors);
        cfg.id = r.text("id", cfg.id);
        r.check("id", cfg.id.find_first_of(" \t,/") == std::string::npos, "must not contain spaces, commas or '/'");
    }
    {
        if (!section("distribution")) errors.push_back({0, "missing section [distribution]"});
        Reader r("distribution", section("distribution"), errors);
        auto& d = cfg.distribution;
        if (section("distribution")) d.kind = r.text("kind", "", true);
        if (d.kind == "uniform") {
            d.lo = r.number("lo", 0.0, true);
            d.hi = r.number("hi", 1.0, true);
            r.check("lo", d.lo >= 0.0, "must be >= 0");
            r.check("hi", d.hi > d.lo, "must exceed lo");
        } else if (d.kind == "beta") {
            d.alpha = r.number("alpha", 2.0, true);
            d.beta = r.number("beta", 2.0, true);
            r.check("alpha", d.alpha > 0.0, "must be > 0");
            r.check("beta", d.beta > 0.0, "must be > 0");
        } else if (d.kind == "exponential") {
            d.lambda = r.number("lambda", 1.0, true);
            r.check("lambda", d.lambda > 0.0, "must be > 0");
        } else if (d.kind == "tabulated") {
            d.breakpoints = r.numbers("breakpoints", true);
            d.cdf = r.numbers("cdf", true);
            if (!d.breakpoints.empty() && !d.cdf.empty()) {
                try {
                    d.build();
                } catch (const Error& e) {
                    r.error("breakpoints", e.what());
                }
            }
        } else if (!d.kind.empty()) {
            r.error("kind", "unknown distribution kind '" + d.kind + "'");
        }
    }
    {
        if (!section("cost")) errors.push_back({0, "missing section [cost]"});
        Reader r("cost", section("cost"), errors);
        auto& c = cfg.cost;
        if (section("cost")) c.kind = r.text("kind", "", true);
        if (c.kind == "additive_power" || c.kind == "multiplicative_quadratic") {
            c.a = r.number("a", 4.0, true);
            r.check("a", c.a > 0.0, "must be > 0");
            if (c.kind == "additive_power") {
                c.k = r.number("k", 2.0);
                r.check("k", c.k >= 2.0, "must be >= 2");
            } else if (r.has("k")) {
                r.error("k", "not used by multiplicative_quadratic");
            }
        } else if (!c.kind.empty()) {
            r.error("kind", "unknown cost kind '" + c.kind + "'");
        }
    }
    if (section("objective")) {
        Reader r("objective", section("objective"), errors);
        auto& o = cfg.objective;
        o.kind = r.text("kind", "", true);
        auto mode = [&](bool required) {
            std::string m = r.text("welfare_mode", "exante", required);
            if (m == "exante") return WelfareMode::exante;
            if (m == "expost") return WelfareMode::expost;
            r.error("welfare_mode", "must be exante or expost");
            return WelfareMode::exante;
        };
        if (o.kind == "weighted") {
            o.alpha = r.number("alpha", 1.0, true);
            r.check("alpha", o.alpha >= 0.0 && o.alpha <= 1.0, "must lie in [0, 1]");
            o.mode = mode(true);
        } else if (o.kind == "uncertainty") {
            o.beta = r.number("beta", 0.0, true);
            r.check("beta", o.beta >= 0.0 && o.beta <= 1.0, "must lie in [0, 1]");
            o.mode = WelfareMode::expost;
        } else if (o.kind == "intermediary") {
            o.outside_lo = r.number("outside_lo", 0.0);
            o.outside_hi = r.number("outside_hi", 1.0, true);
            r.check("outside_lo", o.outside_lo >= 0.0, "must be >= 0");
            r.check("outside_hi", o.outside_hi > o.outside_lo, "must exceed outside_lo");
            o.mode = mode(true);
        } else if (!o.kind.empty()) {
            r.error("kind", "unknown objective kind '" + o.kind + "'");
        }
    }
    {
        Reader r("solver", section("solver"), errors);
        auto& s = cfg.solver;
        s.tol = r.number("tol", s.tol);
        r.check("tol", s.tol > 0.0 && s.tol < 1.0, "must lie in (0, 1)");
        s.grid = r.integer("grid", s.grid);
        r.check("grid", s.grid >= 8 && s.grid <= 100000, "must lie in [8, 100000]");
        s.grid2 = r.integer("grid2", s.grid2);
        r.check("grid2", s.grid2 >= 4 && s.grid2 <= 1024, "must lie in [4, 1024]");
        s.polish_iter = r.integer("polish_iter", s.polish_iter);
        r.check("polish_iter", s.polish_iter >= 0, "must be >= 0");
        s.damping = r.number("damping", s.damping);
        r.check("damping", s.damping > 0.0 && s.damping <= 1.0, "must lie in (0, 1]");
        s.max_iter = r.integer("max_iter", s.max_iter);
        r.check("max_iter", s.max_iter >= 1, "must be >= 1");
        s.threads = r.integer("threads", s.threads);
        r.check("threads", s.threads >= 1 && s.threads <= 256, "must lie in [1, 256]");
    }
    if (section("sweep")) {
        Reader r("sweep", section("sweep"), errors);
        cfg.sweep.present = true;
        std::string fam = r.text("family", "", true);
        if (!fam.empty()) {
            try {
                cfg.sweep.family = sweep_family_from(fam);
            } catch (const Error&) {
                r.error("family", "unknown sweep family '" + fam + "'");
            }
        }
        cfg.sweep.values = r.numbers("values", true);
        bool positive = std::all_of(cfg.sweep.values.begin(), cfg.sweep.values.end(), [](double v) { return v > 0.0; });
        r.check("values", positive, "must all be > 0");
    }
    {
        Reader r("run", section("run"), errors);
        auto& run = cfg.run;
        if (r.has("solvers")) {
            run.solvers = split_list(r.text("solvers", ""));
            for (const auto& s : run.solvers) {
                const auto& known = known_solvers();
                if (std::find(known.begin(), known.end(), s) == known.end()) r.error("solvers", "unknown solver '" + s + "'");
            }
        } else if (!cfg.sweep.present) {
            errors.push_back({r.section_line(), "missing required key run.solvers"});
        }
        run.oracle_check = r.boolean("oracle_check", false);
        run.oracle_n = r.integer("oracle_n", run.oracle_n);
        r.check("oracle_n", run.oracle_n >= 1, "must be >= 1");
        run.oracle_m = r.integer("oracle_m", run.oracle_m);
        r.check("oracle_m", run.oracle_m >= run.oracle_n, "must be >= oracle_n");
        run.oracle_slack = r.number("oracle_slack", run.oracle_slack);
        r.check("oracle_slack", run.oracle_slack >= 0.0, "must be >= 0");
    }

    std::stable_sort(errors.begin(), errors.end(),
                     [](const ConfigError& a, const ConfigError& b) { return a.line < b.line; });
    if (errors.empty()) result.config = std::move(cfg);
    return result;
}

std::string format_errors(const std::vector<ConfigError>& errors) {
    std::ostringstream s;
    for (const auto& e : errors) {
        if (e.line > 0) s << "line " << e.line << ": ";
        s << e.message << '\n';
    }
    return s.str();
}

}  // namespace adplan
