#pragma once

#include <span>

#include "sevt/errors.hpp"

#include "sevt/data_io.hpp"
#include "sevt/staged_tree.hpp"

namespace sevt {

/// Additive smoothing constant: 0 is maximum likelihood, 1 Laplace, 0.5 Jeffreys.
struct Smoothing {
  double alpha = 1.0;

  Smoothing() = default;
  explicit Smoothing(double a);
};

struct ModelScore {
  double loglik = 0.0;
  long long n_params = 0;
  long long n = 0;
  double bic = 0.0;
};

/// (counts + alpha) / (sum + alpha * s). Throws NumericError when the
/// denominator is zero.
template <typename Derived>
ProbVector smoothed_estimate(const Eigen::MatrixBase<Derived>& counts, Smoothing smoothing) {
  const Eigen::ArrayXd c = counts.template cast<double>().transpose().array();
  const double denom = c.sum() + smoothing.alpha * static_cast<double>(c.size());
  if (!(denom > 0.0))
    throw NumericError("conditional distribution undefined: no observations and alpha = 0");
  return ((c + smoothing.alpha) / denom).matrix();
}

FittedStagedTree fit_saturated(const CountTable& counts, Smoothing smoothing = Smoothing{});
FittedStagedTree refit_pooled(const CountTable& counts, const Staging& staging,
                              Smoothing smoothing = Smoothing{});
/// Stage vectors of one depth estimated from pooled counts.
std::vector<ProbVector> fit_depth(const CountMatrix& counts, std::span<const int> labels,
                                  int num_stages, Smoothing smoothing);

/// Sum of count * log(theta) over all depths. Zero counts contribute nothing;
/// a positive count against a zero probability throws NumericError.
double log_likelihood(const FittedStagedTree& model, const CountTable& counts);
/// Log-likelihood contribution of a single depth given per-stage vectors.
double depth_log_likelihood(const CountMatrix& pooled, const std::vector<ProbVector>& theta);

long long n_free_params(const Staging& staging, const EventTree& tree);

ModelScore score_bic(const FittedStagedTree& model, const CountTable& counts);

/// Depth-local BIC term of staging `labels` at one depth: the pooled refit's
/// -2 log-likelihood plus its parameter penalty. Global BIC is the sum over
/// depths of these terms.
double depth_bic(const CountMatrix& counts, std::span<const int> labels, int num_stages,
                 Smoothing smoothing, std::int64_t n);

}  // namespace sevt
