#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "sevt/errors.hpp"
#include "sevt/hcluster.hpp"
#include "sevt/sim_gen.hpp"

using namespace sevt;

namespace {

Eigen::MatrixXd three_points() {
  Eigen::MatrixXd d(3, 3);
  d << 0.0, 0.1, 0.9,
       0.1, 0.0, 0.8,
       0.9, 0.8, 0.0;
  return d;
}

Eigen::MatrixXd random_matrix(RngStream& rng, int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d(i, j) = d(j, i) = rng.uniform();
  return d;
}

// Points on a line: a Euclidean matrix so Ward heights have a closed form.
Eigen::MatrixXd line_matrix(std::initializer_list<double> xs) {
  std::vector<double> v(xs);
  const int n = static_cast<int>(v.size());
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = std::abs(v[i] - v[j]);
  return d;
}

}  // namespace

TEST_CASE("three-point complete linkage") {
  const auto den = agglomerate(three_points(), Linkage::Complete);
  REQUIRE(den.merges.size() == 2);
  CHECK(den.merges[0].left == 0);
  CHECK(den.merges[0].right == 1);
  CHECK(den.merges[0].height == 0.1);
  CHECK(den.merges[0].size == 2);
  CHECK(den.merges[1].left == 3);
  CHECK(den.merges[1].right == 2);
  CHECK(den.merges[1].height == 0.9);
  CHECK(den.merges[1].size == 3);
  CHECK(cut(den, 2) == std::vector<int>{0, 0, 1});
  CHECK(cut(den, 1) == std::vector<int>{0, 0, 0});
  CHECK(cut(den, 3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("three-point average and mcquitty linkage") {
  CHECK(agglomerate(three_points(), Linkage::Average).merges[1].height == doctest::Approx(0.85).epsilon(1e-15));
  CHECK(agglomerate(three_points(), Linkage::McQuitty).merges[1].height == doctest::Approx(0.85).epsilon(1e-15));
}

TEST_CASE("average and mcquitty differ on unequal sizes") {
  // {0,1} merges first, then {0,1,2}; the last point sees sizes 3 vs 1.
  const auto d = line_matrix({0.0, 0.1, 0.3, 2.0});
  const auto avg = agglomerate(d, Linkage::Average);
  const auto wpgma = agglomerate(d, Linkage::McQuitty);
  CHECK(avg.merges[2].height == doctest::Approx((2.0 + 1.9 + 1.7) / 3).epsilon(1e-14));
  CHECK(wpgma.merges[2].height == doctest::Approx(0.5 * (0.5 * (2.0 + 1.9)) + 0.5 * 1.7).epsilon(1e-14));
}

TEST_CASE("ward.D2 on collinear points") {
  // Ward.D2 height between clusters A, B of a Euclidean configuration is
  // sqrt(2 |A||B| / (|A|+|B|)) * |centroid(A) - centroid(B)|.
  const auto den = agglomerate(line_matrix({0.0, 1.0, 5.0, 7.0}), Linkage::WardD2);
  REQUIRE(den.merges.size() == 3);
  CHECK(den.merges[0].height == doctest::Approx(1.0));
  CHECK(den.merges[1].height == doctest::Approx(2.0));
  CHECK(den.merges[2].height == doctest::Approx(std::sqrt(2.0 * 2 * 2 / 4) * 5.5).epsilon(1e-12));
  CHECK(cut(den, 2) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("ties go to the smallest pair") {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 4);
  for (auto linkage : all_linkages()) {
    const auto den = agglomerate(zero, linkage);
    CHECK(den.merges[0].left == 0);
    CHECK(den.merges[0].right == 1);
    CHECK(cut(den, 3) == std::vector<int>{0, 0, 1, 2});
    CHECK(cut(den, 2) == std::vector<int>{0, 0, 0, 1});
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(4, 4, 1.0);
  d.diagonal().setZero();
  d(2, 3) = d(3, 2) = 0.5;
  d(1, 3) = d(3, 1) = 0.5;
  CHECK(cut(agglomerate(d, Linkage::Complete), 3) == std::vector<int>{0, 1, 2, 1});
}

TEST_CASE("single item and cut bounds") {
  const auto den = agglomerate(Eigen::MatrixXd::Zero(1, 1), Linkage::Average);
  CHECK(den.n_items == 1);
  CHECK(den.merges.empty());
  CHECK(cut(den, 1) == std::vector<int>{0});
  CHECK_THROWS_AS(cut(den, 0), DataError);
  CHECK_THROWS_AS(cut(den, 2), DataError);
}

TEST_CASE("invalid matrices") {
  CHECK_THROWS_AS(agglomerate(Eigen::MatrixXd::Zero(2, 3), Linkage::Average), DataError);
  Eigen::MatrixXd asym = three_points();
  asym(0, 1) = 0.2;
  CHECK_THROWS_AS(agglomerate(asym, Linkage::Average), DataError);
  Eigen::MatrixXd nan = three_points();
  nan(0, 2) = nan(2, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(agglomerate(nan, Linkage::Average), DataError);
  Eigen::MatrixXd diag = three_points();
  diag(1, 1) = 0.5;
  CHECK_THROWS_AS(agglomerate(diag, Linkage::Average), DataError);
}

TEST_CASE("linkage names") {
  for (auto l : all_linkages()) CHECK(parse_linkage(linkage_name(l)) == l);
  CHECK(parse_linkage("WARD.D2") == Linkage::WardD2);
  CHECK(linkage_name(Linkage::WardD2) == "ward.D2");
  CHECK_THROWS_AS(parse_linkage("single"), DataError);
}

TEST_CASE("agrees with the naive oracle") {
  auto rng = RngStream(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 7;
    const auto d = random_matrix(rng, n);
    for (auto [linkage, oracle] : {std::pair{Linkage::Average, testing::OracleLinkage::Average},
                                   std::pair{Linkage::Complete, testing::OracleLinkage::Complete}}) {
      const auto den = agglomerate(d, linkage);
      const auto expected = testing::naive_cuts(d, oracle);
      for (int k = 1; k <= n; ++k) CHECK(cut(den, k) == expected[k]);
    }
  }
}

TEST_CASE("dendrogram structure") {
  auto rng = RngStream(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 9;
    const auto d = random_matrix(rng, n);
    for (auto linkage : all_linkages()) {
      const auto den = agglomerate(d, linkage);
      REQUIRE(den.merges.size() == static_cast<std::size_t>(n - 1));
      std::vector<int> size(n, 1), used(2 * n - 1, 0), first(n);
      std::iota(first.begin(), first.end(), 0);
      for (std::size_t t = 0; t < den.merges.size(); ++t) {
        const auto& m = den.merges[t];
        CHECK(first[m.left] < first[m.right]);
        CHECK(std::max(m.left, m.right) < n + static_cast<int>(t));
        CHECK(++used[m.left] == 1);
        CHECK(++used[m.right] == 1);
        CHECK(m.size == size[m.left] + size[m.right]);
        size.push_back(m.size);
        first.push_back(first[m.left]);
        CHECK(m.height >= 0.0);
        if (t > 0 && linkage != Linkage::WardD2) CHECK(m.height >= den.merges[t - 1].height);
      }
      CHECK(den.merges.back().size == n);
      for (int k = 1; k <= n; ++k) {
        const auto labels = cut(den, k);
        CHECK(*std::max_element(labels.begin(), labels.end()) == k - 1);
        CHECK(canonical_labels(labels) == labels);
      }
    }
  }
}

TEST_CASE("cuts are equivariant under relabeling of items") {
  // Distinct off-diagonal values rule out ties, so the partition cannot
  // depend on item order.
  auto rng = RngStream(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 6;
    const auto d = random_matrix(rng, n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
    Eigen::MatrixXd pd(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pd(i, j) = d(perm[i], perm[j]);
    for (auto linkage : all_linkages()) {
      const auto a = agglomerate(d, linkage), b = agglomerate(pd, linkage);
      for (int k = 1; k <= n; ++k) {
        const auto la = cut(a, k), lb = cut(b, k);
        std::vector<int> back(n);
        for (int i = 0; i < n; ++i) back[perm[i]] = lb[i];
        CHECK(canonical_labels(back) == la);
      }
      for (int t = 0; t < n - 1; ++t) CHECK(a.merges[t].height == doctest::Approx(b.merges[t].height));
    }
  }
}
