#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sevt/data_io.hpp"
#include "sevt/estimation.hpp"
#include "sevt/hcluster.hpp"
#include "sevt/simplex_metrics.hpp"
#include "sevt/staged_tree.hpp"

namespace sevt {

/// Number of stages per learned depth (1..p-1): a fixed count or automatic
/// BIC selection.
class KSpec {
 public:
  /// BIC-selected at every depth.
  static KSpec automatic() { return KSpec{}; }
  /// The same k at every depth, capped at the depth's situation count.
  static KSpec uniform(int k);
  /// Entry d-1 applies to depth d; nullopt selects automatically. Entries must
  /// not exceed the depth's situation count.
  static KSpec per_depth(std::vector<std::optional<int>> ks);
  /// "auto", a single integer, or a comma-separated list mixing integers and "auto".
  static KSpec parse(std::string_view text);

  /// Fixed stage count for `depth` with m situations, or nullopt for auto.
  std::optional<int> for_depth(int depth, std::size_t m) const;
  std::string to_string() const;

 private:
  std::optional<int> uniform_;
  std::vector<std::optional<int>> per_depth_;
  bool explicit_ = false;
};

struct LearnConfig {
  MetricId metric{Metric::TotalVariation};
  Linkage linkage = Linkage::WardD2;
  KSpec kspec = KSpec::automatic();
  Smoothing smoothing{};

  void validate() const;
};

/// Stage learning by hierarchical clustering of the smoothed conditional
/// vectors at each depth, with fixed or BIC-selected cuts.
FittedStagedTree learn_hclust(const CountTable& counts, const LearnConfig& config);

/// The k in 1..n_items whose cut minimizes the BIC when applied at `depth`
/// (other depths held fixed). Ties go to the smallest k.
int select_k(const Dendrogram& dendrogram, int depth, const CountTable& counts, Smoothing smoothing);

/// Backward hill climbing from the saturated staging: per depth, repeatedly
/// merge the stage pair with the largest BIC decrease until none decreases
/// it. When `bic_trace` is given it receives the global BIC after the start
/// and after every accepted merge.
FittedStagedTree learn_bhc(const CountTable& counts, Smoothing smoothing = Smoothing{},
                           std::vector<double>* bic_trace = nullptr);

/// The saturated model.
FittedStagedTree baseline_full(const CountTable& counts, Smoothing smoothing = Smoothing{});

}  // namespace sevt
