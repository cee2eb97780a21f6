#include "sevt/assignment.hpp"

#include <algorithm>
#include <limits>

namespace sevt {

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const Eigen::Index rows = cost.rows(), cols = cost.cols();
  const Eigen::Index n = std::max(rows, cols);
  if (n == 0) return {};
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.topLeftCorner(rows, cols) = cost;

  // 1-based potentials u (rows), v (columns); way[j] is the previous column
  // on the alternating path; match[j] the row currently matched to column j.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<Eigen::Index> match(n + 1, 0), way(n + 1, 0);
  for (Eigen::Index i = 1; i <= n; ++i) {
    match[0] = i;
    Eigen::Index j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = match[j0];
      double delta = kInf;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(rows, -1);
  for (Eigen::Index j = 1; j <= n; ++j) {
    const Eigen::Index i = match[j] - 1;
    if (i < rows && j - 1 < cols) assignment[i] = static_cast<int>(j - 1);
  }
  return assignment;
}

}  // namespace sevt
