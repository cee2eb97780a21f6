#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sevt/estimation.hpp"
#include "sevt/event_tree.hpp"

namespace sevt {

/// Structural distance between two stagings of the same tree: per depth, the
/// number of situations whose stages disagree under the label bijection that
/// maximizes agreement, summed over depths.
int hamming_distance(const Staging& a, const Staging& b);
/// Per-depth contribution of hamming_distance.
int hamming_distance_depth(std::span<const int> a, std::span<const int> b);

/// (BIC(model) - BIC(baseline)) / |BIC(baseline)|. Lower is better.
double relative_bic(const ModelScore& model, const ModelScore& baseline);

/// (HD(model, truth) - HD(baseline, truth)) / HD(baseline, truth), or
/// nullopt when the baseline already equals the truth.
std::optional<double> relative_hd(const Staging& model, const Staging& baseline, const Staging& truth);

/// Median; the mean of the two central values for even counts.
double median(std::vector<double> values);

struct ComparisonReport {
  int hd = 0;
  double delta_bic = 0.0;
  std::optional<double> delta_hd;
  double wall_time_s = 0.0;
};

}  // namespace sevt
