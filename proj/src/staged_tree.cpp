#include "sevt/staged_tree.hpp"

#include <cmath>
#include <string>

#include "sevt/errors.hpp"

namespace sevt {

namespace {
constexpr double kSumTolerance = 1e-12;
}

FittedStagedTree::FittedStagedTree(EventTree tree, Staging staging,
                                   std::vector<std::vector<ProbVector>> theta, long long n,
                                   double alpha)
    : tree_(std::move(tree)),
      staging_(std::move(staging)),
      theta_(std::move(theta)),
      n_(n),
      alpha_(alpha) {
  staging_.check_compatible(tree_);
  if (static_cast<int>(theta_.size()) != tree_.num_variables())
    throw DataError("theta depth count does not match tree");
  for (int d = 0; d < tree_.num_variables(); ++d) {
    if (static_cast<int>(theta_[d].size()) != staging_.num_stages(d))
      throw DataError("depth " + std::to_string(d) + ": one theta vector per stage required");
    for (const auto& v : theta_[d]) {
      if (v.size() != tree_.cardinality(d))
        throw DataError("depth " + std::to_string(d) + ": theta length does not match variable");
      if ((v.array() < 0.0).any() || (v.array() > 1.0).any() || !v.allFinite())
        throw DataError("depth " + std::to_string(d) + ": theta entry outside [0,1]");
      if (std::abs(v.sum() - 1.0) > kSumTolerance)
        throw DataError("depth " + std::to_string(d) + ": theta does not sum to 1");
    }
  }
}

double path_probability(const FittedStagedTree& model, std::span<const int> outcome) {
  const auto& tree = model.tree();
  if (static_cast<int>(outcome.size()) != tree.num_variables())
    throw DataError("outcome length does not match tree");
  double prob = 1.0;
  std::size_t situation = 0;
  for (int d = 0; d < tree.num_variables(); ++d) {
    const int x = outcome[d];
    if (x < 0 || x >= tree.cardinality(d)) throw DataError("outcome level out of range");
    prob *= model.situation_theta(d, situation)[x];
    situation = situation * tree.cardinality(d) + x;
  }
  return prob;
}

double log_path_probability(const FittedStagedTree& model, std::span<const int> outcome) {
  const auto& tree = model.tree();
  if (static_cast<int>(outcome.size()) != tree.num_variables())
    throw DataError("outcome length does not match tree");
  double logp = 0.0;
  std::size_t situation = 0;
  for (int d = 0; d < tree.num_variables(); ++d) {
    const int x = outcome[d];
    if (x < 0 || x >= tree.cardinality(d)) throw DataError("outcome level out of range");
    logp += std::log(model.situation_theta(d, situation)[x]);
    situation = situation * tree.cardinality(d) + x;
  }
  return logp;
}

Eigen::VectorXd joint_distribution(const FittedStagedTree& model) {
  const auto& tree = model.tree();
  // Breadth-first expansion: probs holds the mass of every situation at depth d.
  Eigen::VectorXd probs = Eigen::VectorXd::Ones(1);
  for (int d = 0; d < tree.num_variables(); ++d) {
    const int card = tree.cardinality(d);
    Eigen::VectorXd next(probs.size() * card);
    for (Eigen::Index s = 0; s < probs.size(); ++s)
      next.segment(s * card, card) = probs[s] * model.situation_theta(d, s);
    probs = std::move(next);
  }
  return probs;
}

}  // namespace sevt
