#pragma once

#include <cstdint>
#include <string>

#include "sidelink/types.hpp"

namespace sidelink {

// How a solve ended.
//   optimal:    proven best assignment (exact solvers only).
//   heuristic:  feasible-by-construction assignment without an
//               optimality claim (randomized matching + knapsack).
//   infeasible: proven that no assignment satisfies all rules.
//   timeout:    time or node budget exhausted; best incumbent
//               returned, which may be empty.
enum class SolveStatus { optimal, heuristic, infeasible, timeout };

std::string to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string& name);

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    // Boolean N x KL selection matrix; all zero when no assignment
    // was found.
    Matrix assignment;
    // Sum of selected capacities in bit/s.
    double objective = 0.0;
    // Achieved rate per vehicle in bit/s (indexed by id - 1).
    Vector per_vehicle_rate;
    // Wall-clock duration of the solve call in seconds.
    double elapsed = 0.0;
    // Search nodes expanded (exact solvers; zero for the heuristic).
    std::uint64_t nodes_explored = 0;
};

} // namespace sidelink
