#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sevt/event_tree.hpp"

namespace sevt {

/// A point on the probability simplex.
using ProbVector = Eigen::VectorXd;

/// Staged event tree with one conditional probability vector per stage.
///
/// theta(d, k) is the distribution of X_{d+1} shared by every situation in
/// stage k at depth d. Entries may be zero only for synthetic models; fits
/// with positive smoothing are strictly inside the simplex.
class FittedStagedTree {
 public:
  FittedStagedTree() = default;
  FittedStagedTree(EventTree tree, Staging staging, std::vector<std::vector<ProbVector>> theta,
                   long long n = 0, double alpha = 0.0);

  const EventTree& tree() const { return tree_; }
  const Staging& staging() const { return staging_; }
  const ProbVector& theta(int depth, int stage) const { return theta_.at(depth).at(stage); }
  const std::vector<ProbVector>& theta(int depth) const { return theta_.at(depth); }
  const ProbVector& situation_theta(int depth, std::size_t situation) const {
    return theta(depth, staging_.stage_of(depth, situation));
  }
  long long n() const { return n_; }
  double alpha() const { return alpha_; }

 private:
  EventTree tree_;
  Staging staging_;
  std::vector<std::vector<ProbVector>> theta_;
  long long n_ = 0;
  double alpha_ = 0.0;
};

/// Product of the stage transition probabilities along the root-to-leaf path.
double path_probability(const FittedStagedTree& model, std::span<const int> outcome);
double log_path_probability(const FittedStagedTree& model, std::span<const int> outcome);

/// Probabilities of all leaves in lexicographic outcome order.
Eigen::VectorXd joint_distribution(const FittedStagedTree& model);

}  // namespace sevt
