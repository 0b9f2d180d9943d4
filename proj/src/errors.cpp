#include "adplan/errors.hpp"

namespace adplan {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::invalid_plan: return "invalid plan";
    case ErrorKind::infeasible_plan: return "infeasible plan";
    case ErrorKind::infeasible_target: return "infeasible target";
    case ErrorKind::unsupported_cost: return "unsupported cost";
    case ErrorKind::invalid_cost: return "invalid cost";
    case ErrorKind::invalid_objective: return "invalid objective";
    case ErrorKind::numeric_failure: return "numeric failure";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::size_limit: return "size limit";
    }
    return "error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace adplan
