#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sevt {

/// Minimum-cost perfect assignment on a cost matrix (Hungarian method with
/// potentials, O(n^3)). Rectangular inputs are padded with zero-cost dummy
/// rows or columns. Returns, for each row, its assigned column, or -1 when
/// the row was matched to a dummy column.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace sevt
