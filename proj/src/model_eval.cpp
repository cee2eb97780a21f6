#include "sevt/model_eval.hpp"

#include <algorithm>
#include <cmath>

#include "sevt/assignment.hpp"
#include "sevt/errors.hpp"

namespace sevt {

int hamming_distance_depth(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DataError("stagings differ in situation count");
  if (a.empty()) return 0;
  const int ka = *std::max_element(a.begin(), a.end()) + 1;
  const int kb = *std::max_element(b.begin(), b.end()) + 1;
  Eigen::MatrixXd agreement = Eigen::MatrixXd::Zero(ka, kb);
  for (std::size_t s = 0; s < a.size(); ++s) agreement(a[s], b[s]) += 1.0;
  // Maximizing matched co-occurrences == minimizing their negation.
  const auto match = solve_assignment(-agreement);
  double agreed = 0.0;
  for (int i = 0; i < ka; ++i)
    if (match[i] >= 0) agreed += agreement(i, match[i]);
  return static_cast<int>(a.size()) - static_cast<int>(std::lround(agreed));
}

int hamming_distance(const Staging& a, const Staging& b) {
  if (a.num_depths() != b.num_depths()) throw DataError("stagings are on different trees");
  int hd = 0;
  for (int d = 0; d < a.num_depths(); ++d) hd += hamming_distance_depth(a.labels(d), b.labels(d));
  return hd;
}

double relative_bic(const ModelScore& model, const ModelScore& baseline) {
  if (baseline.bic == 0.0) throw DataError("relative BIC undefined for a zero baseline BIC");
  return (model.bic - baseline.bic) / std::abs(baseline.bic);
}

std::optional<double> relative_hd(const Staging& model, const Staging& baseline, const Staging& truth) {
  const int base = hamming_distance(baseline, truth);
  if (base == 0) return std::nullopt;
  return static_cast<double>(hamming_distance(model, truth) - base) / base;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DataError("median of an empty list");
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
    throw DataError("median of a non-finite value");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace sevt
