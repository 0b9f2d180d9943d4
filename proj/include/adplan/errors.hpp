#pragma once

#include <stdexcept>
#include <string>

namespace adplan {

enum class ErrorKind {
    invalid_input,
    invalid_plan,
    infeasible_plan,
    infeasible_target,
    unsupported_cost,
    invalid_cost,
    invalid_objective,
    numeric_failure,
    non_convergence,
    size_limit,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace adplan
