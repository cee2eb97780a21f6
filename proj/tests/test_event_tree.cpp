#include "doctest.h"
#include "fixtures.hpp"
#include "sevt/errors.hpp"
#include "sevt/staged_tree.hpp"

using namespace sevt;

TEST_CASE("event tree enumerates situations per depth") {
  const auto tree = testing::example_tree();
  CHECK(tree.num_situations(0) == 1);
  CHECK(tree.num_situations(1) == 3);
  CHECK(tree.num_situations(2) == 6);
  CHECK(tree.num_leaves() == 18);

  const auto single = build_event_tree({{"X1", {"0", "1"}}});
  CHECK(single.num_situations(0) == 1);
  CHECK(single.num_leaves() == 2);

  std::vector<VariableSpec> five;
  for (int i = 0; i < 5; ++i) five.push_back({"X" + std::to_string(i), {"0", "1"}});
  const auto binary = build_event_tree(five);
  for (int d = 0; d < 5; ++d) CHECK(binary.num_situations(d) == (std::size_t{1} << d));
  CHECK(binary.num_leaves() == 32);
}

TEST_CASE("build_event_tree rejects invalid variable lists") {
  CHECK_THROWS_AS(build_event_tree({}), DataError);
  CHECK_THROWS_AS(build_event_tree({{"X", {"only"}}}), DataError);
  CHECK_THROWS_AS(build_event_tree({{"X", {"0", "1"}}, {"X", {"a", "b"}}}), DataError);
  CHECK_THROWS_AS(build_event_tree({{"X", {"0", "0"}}}), DataError);
}

TEST_CASE("situation_context is a bijection") {
  const auto tree = testing::example_tree();
  CHECK(tree.context(0, 0).empty());
  CHECK(tree.context(2, 0) == std::vector<int>{0, 0});
  CHECK(tree.context(2, 5) == std::vector<int>{2, 1});  // (c, 1)
  for (int d = 0; d < tree.num_variables(); ++d)
    for (std::size_t s = 0; s < tree.num_situations(d); ++s) CHECK(tree.situation_index(tree.context(d, s)) == s);
  CHECK_THROWS_AS(tree.context(3, 0), DataError);
  CHECK_THROWS_AS(tree.context(2, 6), DataError);
  CHECK_THROWS_AS(tree.context(-1, 0), DataError);
}

TEST_CASE("path probabilities reproduce the example joint table") {
  const auto model = testing::example_model();
  const auto table = testing::example_table();
  const auto& tree = model.tree();
  std::size_t leaf = 0;
  double total = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 3; ++c, ++leaf) {
        const double p = path_probability(model, Outcome{a, b, c});
        CHECK(std::abs(p - table[leaf]) <= 1e-12);
        CHECK(std::abs(std::log(p) - log_path_probability(model, Outcome{a, b, c})) < 1e-12);
        total += p;
      }
  CHECK(leaf == tree.num_leaves());
  CHECK(std::abs(total - 1.0) < 1e-10);
  CHECK(std::abs(path_probability(model, Outcome{1, 1, 1}) - 0.08) < 1e-12);
  CHECK((joint_distribution(model) - Eigen::Map<const Eigen::VectorXd>(table.data(), 18)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(path_probability(model, Outcome{0, 0}), DataError);
  CHECK_THROWS_AS(path_probability(model, Outcome{0, 2, 0}), DataError);
}

TEST_CASE("stage_partition lists blocks in first-member order") {
  const auto staging = testing::example_staging();
  using Blocks = std::vector<std::vector<std::size_t>>;
  CHECK(stage_partition(staging, 1) == Blocks{{0, 1, 2}});
  CHECK(stage_partition(staging, 2) == Blocks{{0, 1}, {2, 3, 4, 5}});
  const auto sat = Staging::saturated(testing::example_tree());
  CHECK(stage_partition(sat, 2).size() == 6);
  for (const auto& block : stage_partition(sat, 2)) CHECK(block.size() == 1);
}

TEST_CASE("staging labels are canonicalized") {
  const Staging a({{7}, {3, 3, 9}, {5, 5, 2, 2, 2, 2}});
  const Staging b({{0}, {0, 0, 1}, {0, 0, 1, 1, 1, 1}});
  CHECK(a == b);
  CHECK(a.num_stages(2) == 2);
  CHECK_THROWS_AS(Staging({{0, 1}}), DataError);
}

TEST_CASE("tied situations share conditional vectors") {
  const auto model = testing::example_model();
  for (int d = 0; d < 3; ++d)
    for (std::size_t s = 0; s < model.tree().num_situations(d); ++s)
      for (std::size_t t = 0; t < model.tree().num_situations(d); ++t)
        if (model.staging().stage_of(d, s) == model.staging().stage_of(d, t))
          CHECK(model.situation_theta(d, s) == model.situation_theta(d, t));
}

TEST_CASE("fitted tree validates theta") {
  const auto tree = testing::example_tree();
  const auto staging = testing::example_staging();
  ProbVector bad(3);
  bad << 0.5, 0.5, 0.5;
  ProbVector two(2);
  two << 0.6, 0.4;
  ProbVector three(3);
  three << 0.7, 0.2, 0.1;
  CHECK_THROWS_AS(FittedStagedTree(tree, staging, {{bad}, {two}, {three, three}}), DataError);
  CHECK_THROWS_AS(FittedStagedTree(tree, staging, {{three}, {two}, {three}}), DataError);
  CHECK_THROWS_AS(FittedStagedTree(tree, staging, {{three}, {three}, {three, three}}), DataError);
}
