#include <map>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "sevt/errors.hpp"
#include "sevt/sim_gen.hpp"

using namespace sevt;

TEST_CASE("generator identity") {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  RngStream rng(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next();
  CHECK(x == 9981545732273789042ULL);
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(RngStream::derive_seed(1, 2) != RngStream::derive_seed(1, 3));
  CHECK(RngStream::derive_seed(1, 2, 0) != RngStream::derive_seed(1, 2, 1));
  CHECK(RngStream::derive_seed(7, 7) == RngStream::derive_seed(7, 7));
}

TEST_CASE("uniform draws") {
  RngStream rng(1);
  double sum = 0.0;
  std::vector<int> bins(5, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    ++bins[rng.uniform_int(5)];
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.005);
  for (int b : bins) CHECK(std::abs(b - 20000) < 4 * std::sqrt(100000 * 0.2 * 0.8));
  CHECK_THROWS_AS(rng.uniform_int(0), DataError);
  CHECK(rng.uniform_int(1) == 0);
}

TEST_CASE("join staging") {
  const auto tree = synthetic_tree(5);
  RngStream rng(3);
  CHECK(random_staging_join(tree, 1.0, rng) == Staging::single_stage(tree));
  CHECK(random_staging_join(tree, 0.0, rng) == Staging::saturated(tree));
  CHECK(random_staging_join(tree, 1e-9, rng) == Staging::saturated(tree));
  CHECK_THROWS_AS(random_staging_join(tree, 1.5, rng), DataError);
  CHECK_THROWS_AS(random_staging_join(tree, -0.1, rng), DataError);

  // Golden partition for q = 0.9 on the depth with 4 situations.
  RngStream golden(42);
  const auto s = random_staging_join(synthetic_tree(3), 0.9, golden);
  CHECK(s.labels(2) == std::vector<int>{0, 0, 1, 0});

  // Mean stage count at a depth of m situations: 1 + (m-1)(1-q).
  RngStream many(8);
  const auto t = synthetic_tree(4);
  double stages = 0.0;
  for (int i = 0; i < 4000; ++i) stages += random_staging_join(t, 0.5, many).num_stages(3);
  CHECK(std::abs(stages / 4000 - 4.5) < 0.1);
}

TEST_CASE("split staging") {
  const auto tree = synthetic_tree(4);
  RngStream rng(4);
  CHECK(random_staging_split(tree, 1, rng) == Staging::single_stage(tree));
  const auto two = random_staging_split(tree, 2, rng);
  CHECK(two.labels(1) == std::vector<int>{0, 1});
  CHECK_THROWS_AS(random_staging_split(tree, 0, rng), DataError);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    RngStream r(seed);
    const auto s = random_staging_split(tree, 2, r);
    CHECK(s.num_stages(2) == 2);
    CHECK(s.num_stages(3) == 2);
  }
  // Depth with 4 situations and k0 = 3.
  RngStream r3(12);
  for (int i = 0; i < 100; ++i) CHECK(random_staging_split(tree, 3, r3).num_stages(2) == 3);
}

TEST_CASE("random parameters") {
  const auto tree = synthetic_tree(4);
  RngStream rng(5);
  const auto staging = random_staging_split(tree, 2, rng);
  const auto model = random_parameters(tree, staging, rng);
  for (int d = 0; d < tree.num_variables(); ++d)
    for (int k = 0; k < staging.num_stages(d); ++k) {
      const auto& v = model.theta(d, k);
      CHECK(std::abs(v.sum() - 1.0) < 1e-12);
      CHECK((v.array() > 0.0).all());
      CHECK((v.array() < 1.0).all());
    }
  CHECK(model.theta(3, 0) != model.theta(3, 1));

  // Flat Dirichlet on two categories is uniform on the first coordinate.
  const auto one = synthetic_tree(1);
  double mean = 0.0, second = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = random_parameters(one, Staging::single_stage(one), rng).theta(0, 0)[0];
    mean += x;
    second += x * x;
  }
  mean /= 10000;
  CHECK(std::abs(mean - 0.5) < 0.02);
  CHECK(std::abs(second / 10000 - mean * mean - 1.0 / 12) < 0.005);
}

TEST_CASE("sampling matches the example joint table") {
  RngStream rng(6);
  const auto model = testing::example_model();
  const long long n = 100000;
  const auto data = sample(model, n, rng);
  REQUIRE(data.num_rows() == n);
  std::vector<double> freq(18, 0.0);
  for (Eigen::Index r = 0; r < n; ++r) freq[(data.rows(r, 0) * 2 + data.rows(r, 1)) * 3 + data.rows(r, 2)] += 1;
  const auto table = testing::example_table();
  for (int a = 0; a < 18; ++a) {
    const double sigma = std::sqrt(table[a] * (1 - table[a]) / n);
    CHECK(std::abs(freq[a] / n - table[a]) < 3 * sigma);
  }
}

TEST_CASE("chi-square goodness of fit") {
  for (std::uint64_t seed : {1, 2, 3}) {
    RngStream rng(seed);
    const auto model = generate_model({5, 2, JoinMethod{0.5}, seed}, rng);
    const long long n = 1 << 17;
    const auto data = sample(model, n, rng);
    const Eigen::VectorXd p = joint_distribution(model);
    Eigen::VectorXd observed = Eigen::VectorXd::Zero(p.size());
    for (Eigen::Index r = 0; r < n; ++r) {
      Eigen::Index atom = 0;
      for (int d = 0; d < 5; ++d) atom = atom * 2 + data.rows(r, d);
      observed[atom] += 1;
    }
    const Eigen::ArrayXd expected = p.array() * static_cast<double>(n);
    const double chi2 = ((observed.array() - expected).square() / expected).sum();
    CHECK(chi2 < 61.098);  // 0.999 quantile with 31 degrees of freedom
  }
}

TEST_CASE("sampling edge cases") {
  RngStream rng(7);
  const auto tree = synthetic_tree(3);
  std::vector<std::vector<ProbVector>> theta(3);
  ProbVector onehot(2);
  onehot << 0.0, 1.0;
  for (int d = 0; d < 3; ++d) theta[d].push_back(onehot);
  const FittedStagedTree det(tree, Staging::single_stage(tree), theta);
  const auto data = sample(det, 50, rng);
  CHECK((data.rows.array() == 1).all());

  const auto single = sample(testing::example_model(), 1, rng);
  CHECK(single.num_rows() == 1);
  CHECK(single.rows(0, 0) < 3);
  CHECK_THROWS_AS(sample(det, 0, rng), DataError);
}

TEST_CASE("generation is deterministic") {
  for (GenConfig cfg : {GenConfig{5, 2, JoinMethod{0.9}, 10}, GenConfig{6, 3, SplitMethod{2}, 11}}) {
    auto r1 = RngStream(cfg.seed), r2 = RngStream(cfg.seed);
    const auto m1 = generate_model(cfg, r1), m2 = generate_model(cfg, r2);
    CHECK(m1.staging() == m2.staging());
    CHECK(joint_distribution(m1) == joint_distribution(m2));
    CHECK(sample(m1, 500, r1).rows == sample(m2, 500, r2).rows);
    m1.staging().check_compatible(m1.tree());
  }
}
