#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sevt/event_tree.hpp"

namespace sevt {

using LevelMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Categorical observations: rows(r, j) is the level index of variable j in
/// observation r.
struct Dataset {
  std::vector<VariableSpec> schema;
  LevelMatrix rows;

  Eigen::Index num_rows() const { return rows.rows(); }
  int num_variables() const { return static_cast<int>(schema.size()); }
  /// Column index of `name`, or -1.
  int column(const std::string& name) const;

  Dataset select_rows(std::span<const Eigen::Index> indices) const;
  /// Dataset whose column j is column order[j] of this one.
  Dataset select_columns(std::span<const int> order) const;
};

/// Per-depth transition counts: depth(d)(s, x) is the number of rows whose
/// first d coordinates equal context s and whose coordinate d equals x.
class CountTable {
 public:
  CountTable(EventTree tree, std::vector<CountMatrix> depths);

  const EventTree& tree() const { return tree_; }
  const CountMatrix& depth(int d) const { return depths_.at(d); }
  int num_depths() const { return static_cast<int>(depths_.size()); }
  /// Number of observations (total count at every depth).
  std::int64_t total() const { return total_; }

 private:
  EventTree tree_;
  std::vector<CountMatrix> depths_;
  std::int64_t total_ = 0;
};

/// Reads an RFC-4180-style CSV with a header row. Without a schema, levels
/// are the sorted distinct values of each column.
Dataset read_csv(std::istream& in, const std::optional<std::vector<VariableSpec>>& schema = std::nullopt);
void write_csv(std::ostream& out, const Dataset& data);

/// All records of a CSV stream, header included, blank lines skipped.
std::vector<std::vector<std::string>> read_csv_records(std::istream& in);
/// Quotes a field when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

/// Parses {"variables":[{"name":..., "levels":[...]}]}.
std::vector<VariableSpec> read_schema_json(std::istream& in);

/// Counts are accumulated over `jobs` row partitions and summed.
CountTable count_transitions(const Dataset& data, const EventTree& tree, int jobs = 1);

/// Per-depth pooled counts: row k at depth d sums the count rows of the
/// situations in stage k.
std::vector<CountMatrix> pool_counts(const CountTable& counts, const Staging& staging);
CountMatrix pool_depth(const CountMatrix& counts, std::span<const int> labels, int num_stages);

}  // namespace sevt
