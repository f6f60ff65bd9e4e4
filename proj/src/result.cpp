#include "sidelink/result.hpp"

#include "sidelink/errors.hpp"

namespace sidelink {

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::heuristic: return "heuristic";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::timeout: return "timeout";
    }
    return "unknown";
}

SolveStatus solve_status_from_string(const std::string& name) {
    if (name == "optimal") return SolveStatus::optimal;
    if (name == "heuristic") return SolveStatus::heuristic;
    if (name == "infeasible") return SolveStatus::infeasible;
    if (name == "timeout") return SolveStatus::timeout;
    throw ConfigInvalid("unknown solve status '" + name + "'");
}

} // namespace sidelink
