#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace sidelink {

// Dense Eigen aliases used throughout the library. Constraint
// matrices are small and dense in every realistic configuration, so
// we do not bother with sparse storage.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

// Assignments are boolean but arithmetic with the constraint
// matrices is done in double precision; 0/1 doubles are exact, so no
// precision is lost.

} // namespace sidelink
