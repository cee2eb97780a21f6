#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sevt {

/// A categorical variable. Level order is significant: it fixes the
/// lexicographic enumeration of situations in the event tree.
struct VariableSpec {
  std::string name;
  std::vector<std::string> levels;

  int cardinality() const { return static_cast<int>(levels.size()); }
  /// Index of `level`, or -1 when absent.
  int level_index(const std::string& level) const;

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

/// One level index per variable, in variable order.
using Outcome = std::vector<int>;

/// X-compatible event tree over an ordered list of categorical variables.
///
/// Depth d (0 <= d < p) holds the situations x_[d], i.e. the assignments of
/// the first d variables, enumerated lexicographically. Situation s at depth d
/// has children s * |X_{d+1}| + x at depth d + 1. Leaves are never
/// materialized.
class EventTree {
 public:
  EventTree() = default;
  explicit EventTree(std::vector<VariableSpec> variables);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  const std::vector<VariableSpec>& variables() const { return variables_; }
  const VariableSpec& variable(int i) const { return variables_.at(i); }
  /// Cardinality of the variable decided at `depth`, i.e. X_{depth+1}.
  int cardinality(int depth) const { return variables_.at(depth).cardinality(); }

  std::size_t num_situations(int depth) const { return situations_.at(depth); }
  std::size_t num_leaves() const { return leaves_; }
  std::size_t total_situations() const;

  /// Level indices (x_1, ..., x_depth) of situation `index` at `depth`.
  std::vector<int> context(int depth, std::size_t index) const;
  /// Inverse of context(): situation index of a partial assignment.
  std::size_t situation_index(std::span<const int> context) const;

  friend bool operator==(const EventTree& a, const EventTree& b) {
    return a.variables_ == b.variables_;
  }

 private:
  std::vector<VariableSpec> variables_;
  std::vector<std::size_t> situations_;
  std::size_t leaves_ = 0;
};

EventTree build_event_tree(std::vector<VariableSpec> specs);

/// Per-depth stage labels. Labels are stored canonically: at every depth
/// they are 0, 1, 2, ... in order of first occurrence, so structurally equal
/// stagings compare equal.
class Staging {
 public:
  Staging() = default;
  /// labels[d][s] is the stage of situation s at depth d (any integers).
  explicit Staging(std::vector<std::vector<int>> labels);

  static Staging saturated(const EventTree& tree);
  static Staging single_stage(const EventTree& tree);

  int num_depths() const { return static_cast<int>(labels_.size()); }
  const std::vector<int>& labels(int depth) const { return labels_.at(depth); }
  int stage_of(int depth, std::size_t situation) const { return labels_.at(depth).at(situation); }
  int num_stages(int depth) const { return num_stages_.at(depth); }

  /// Returns a copy with the labels at `depth` replaced.
  Staging with_depth(int depth, std::vector<int> labels) const;

  /// Throws DataError unless this staging has the tree's shape.
  void check_compatible(const EventTree& tree) const;

  friend bool operator==(const Staging&, const Staging&) = default;

 private:
  std::vector<std::vector<int>> labels_;
  std::vector<int> num_stages_;
};

/// Relabels `labels` to 0, 1, ... in order of first occurrence.
std::vector<int> canonical_labels(std::span<const int> labels);

/// Blocks of situation indices sharing a stage at `depth`, ordered by their
/// first member.
std::vector<std::vector<std::size_t>> stage_partition(const Staging& staging, int depth);

}  // namespace sevt
