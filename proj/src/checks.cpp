#include "adplan/checks.hpp"

#include "adplan/errors.hpp"

#include <algorithm>

namespace adplan {

void Check::flag(const std::string& witness) {
    passed = false;
    if (witnesses.size() < 5) witnesses.push_back(witness);
}

void Check::note(const std::string& remark) {
    if (witnesses.size() < 5) witnesses.push_back(remark);
}

bool CheckReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& CheckReport::get(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    fail(ErrorKind::invalid_input, "no check named " + name);
}

}  // namespace adplan
