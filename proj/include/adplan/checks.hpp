#pragma once

#include <string>
#include <utility>
#include <vector>

namespace adplan {

// One named pass/fail finding with a few witnesses.
struct Check {
    Check() = default;
    explicit Check(std::string n) : name(std::move(n)) {}

    std::string name;
    bool passed = true;
    std::vector<std::string> witnesses;

    void flag(const std::string& witness);
    void note(const std::string& remark);
};

struct CheckReport {
    std::vector<Check> checks;

    bool all_passed() const;
    const Check& get(const std::string& name) const;
};

}  // namespace adplan
