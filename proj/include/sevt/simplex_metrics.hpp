#pragma once

// Distances and symmetric divergences between points of the probability
// simplex. All functions accept any Eigen column or row vector expression.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sevt/errors.hpp"
#include "sevt/staged_tree.hpp"

namespace sevt {

enum class Metric { TotalVariation, Hellinger, Fisher, JensenShannon, Kaniadakis, TotalKL };

struct MetricId {
  Metric kind = Metric::TotalVariation;
  double kappa = 0.5;  // Kaniadakis only, in (0, 1)

  /// Accepts "totalvariation", "hellinger", "fisher", "jensenshannon",
  /// "kaniadakis", "kaniadakis:<kappa>" and "totalkl", case-insensitively.
  static MetricId parse(std::string_view name);
  std::string name() const;
  /// KL-type metrics need strictly positive vectors.
  bool requires_positive() const { return kind == Metric::Kaniadakis || kind == Metric::TotalKL; }

  friend bool operator==(const MetricId&, const MetricId&) = default;
};

/// The six metrics in canonical order.
std::vector<MetricId> all_metrics();

namespace detail {

template <typename P, typename Q>
void check_pair(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q) {
  if (p.size() != q.size()) throw DataError("probability vectors differ in length");
  if (p.size() < 2) throw DataError("probability vector needs at least 2 entries");
}

template <typename P>
void check_positive(const Eigen::MatrixBase<P>& p) {
  if (!(p.array() > 0).all())
    throw NumericError("divergence requires strictly positive probabilities (smooth with alpha > 0)");
}

template <typename Scalar>
Scalar kappa_log(Scalar x, Scalar kappa) {
  return (std::pow(x, kappa) - std::pow(x, -kappa)) / (2 * kappa);
}

}  // namespace detail

/// Sum of sqrt(p_i q_i), clamped to [0, 1].
template <typename P, typename Q>
typename P::Scalar bhattacharyya(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q) {
  detail::check_pair(p, q);
  using Scalar = typename P::Scalar;
  const Scalar bc = (p.array() * q.array()).sqrt().sum();
  return std::clamp(bc, Scalar(0), Scalar(1));
}

template <typename P, typename Q>
typename P::Scalar total_variation(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q) {
  detail::check_pair(p, q);
  return typename P::Scalar(0.5) * (p.array() - q.array()).abs().sum();
}

template <typename P, typename Q>
typename P::Scalar hellinger(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q) {
  detail::check_pair(p, q);
  using std::sqrt;
  return sqrt((p.array().sqrt() - q.array().sqrt()).square().sum()) / std::numbers::sqrt2_v<typename P::Scalar>;
}

/// 4 arccos^2 of the Bhattacharyya coefficient; pi^2 at disjoint supports.
template <typename P, typename Q>
typename P::Scalar fisher(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q) {
  const auto angle = std::acos(bhattacharyya(p, q));
  return 4 * angle * angle;
}

/// Zero-probability terms contribute nothing, so disjoint supports give ln 2.
template <typename P, typename Q>
typename P::Scalar jensen_shannon(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q) {
  detail::check_pair(p, q);
  using Scalar = typename P::Scalar;
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar a = p[i], b = q[i], m = a + b;
    Scalar term = 0;
    if (a > 0) term += a * std::log(2 * a / m);
    if (b > 0) term += b * std::log(2 * b / m);
    acc += term;
  }
  return acc / 2;
}

/// KL(p||q) + KL(q||p) = sum (p_i - q_i)(log p_i - log q_i).
template <typename P, typename Q>
typename P::Scalar total_kl(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q) {
  detail::check_pair(p, q);
  detail::check_positive(p);
  detail::check_positive(q);
  return ((p.array() - q.array()) * (p.array().log() - q.array().log())).sum();
}

/// Symmetrized Kaniadakis divergence with escort weights equal to the
/// distribution itself: sum (log_k p_i - log_k q_i)(p_i - q_i). Tends to
/// total_kl as kappa -> 0.
template <typename P, typename Q>
typename P::Scalar kaniadakis(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q,
                              typename P::Scalar kappa) {
  detail::check_pair(p, q);
  if (!(kappa > 0 && kappa < 1)) throw DataError("kaniadakis kappa must lie in (0, 1)");
  detail::check_positive(p);
  detail::check_positive(q);
  using Scalar = typename P::Scalar;
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    acc += (detail::kappa_log<Scalar>(p[i], kappa) - detail::kappa_log<Scalar>(q[i], kappa)) * (p[i] - q[i]);
  return acc;
}

template <typename P, typename Q>
typename P::Scalar dissimilarity(const Eigen::MatrixBase<P>& p, const Eigen::MatrixBase<Q>& q,
                                 const MetricId& metric) {
  switch (metric.kind) {
    case Metric::TotalVariation: return total_variation(p, q);
    case Metric::Hellinger: return hellinger(p, q);
    case Metric::Fisher: return fisher(p, q);
    case Metric::JensenShannon: return jensen_shannon(p, q);
    case Metric::Kaniadakis: return kaniadakis(p, q, typename P::Scalar(metric.kappa));
    case Metric::TotalKL: return total_kl(p, q);
  }
  throw DataError("unknown metric");
}

/// Throws unless `p` lies on the simplex (entries >= 0, sum 1 +- 1e-9).
void check_simplex(const ProbVector& p);

/// Symmetric dissimilarity matrix with zero diagonal.
Eigen::MatrixXd pairwise_matrix(std::span<const ProbVector> vectors, const MetricId& metric);

}  // namespace sevt
