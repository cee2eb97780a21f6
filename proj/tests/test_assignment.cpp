#include <numeric>

#include "doctest.h"
#include "sevt/assignment.hpp"
#include "sevt/sim_gen.hpp"

using namespace sevt;

namespace {

double cost_of(const Eigen::MatrixXd& c, const std::vector<int>& cols) {
  double total = 0.0;
  for (std::size_t r = 0; r < cols.size(); ++r)
    if (cols[r] >= 0) total += c(static_cast<Eigen::Index>(r), cols[r]);
  return total;
}

// Exhaustive minimum over injections of the smaller side into the larger.
double brute_force(const Eigen::MatrixXd& c) {
  const int rows = static_cast<int>(c.rows()), cols = static_cast<int>(c.cols());
  const int n = std::max(rows, cols);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int r = 0; r < rows; ++r)
      if (perm[r] < cols) total += c(r, perm[r]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("small assignment") {
  Eigen::MatrixXd c(3, 3);
  c << 4, 1, 3,
       2, 0, 5,
       3, 2, 2;
  const auto a = solve_assignment(c);
  CHECK(a == std::vector<int>{1, 0, 2});
  CHECK(cost_of(c, a) == 5.0);
}

TEST_CASE("rectangular assignment") {
  Eigen::MatrixXd wide(2, 3);
  wide << 5, 1, 9,
          1, 5, 9;
  CHECK(solve_assignment(wide) == std::vector<int>{1, 0});
  Eigen::MatrixXd tall(3, 1);
  tall << 3, 1, 2;
  CHECK(solve_assignment(tall) == std::vector<int>{-1, 0, -1});
  CHECK(solve_assignment(Eigen::MatrixXd(0, 0)).empty());
}

TEST_CASE("matches exhaustive search") {
  auto rng = RngStream(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform_int(6));
    const int cols = 1 + static_cast<int>(rng.uniform_int(6));
    Eigen::MatrixXd c(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) c(i, j) = static_cast<double>(rng.uniform_int(10)) - 5.0;
    const auto a = solve_assignment(c);
    REQUIRE(a.size() == static_cast<std::size_t>(rows));
    std::vector<int> seen(cols, 0);
    int assigned = 0;
    for (int col : a)
      if (col >= 0) {
        CHECK(++seen[col] == 1);
        ++assigned;
      }
    CHECK(assigned == std::min(rows, cols));
    CHECK(cost_of(c, a) == doctest::Approx(brute_force(c)));
  }
}
