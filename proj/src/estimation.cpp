#include "sevt/estimation.hpp"

#include <cmath>
#include <string>

#include "sevt/errors.hpp"

namespace sevt {

Smoothing::Smoothing(double a) : alpha(a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DataError("smoothing alpha must be a finite value >= 0");
}

std::vector<ProbVector> fit_depth(const CountMatrix& counts, std::span<const int> labels,
                                  int num_stages, Smoothing smoothing) {
  const CountMatrix pooled = pool_depth(counts, labels, num_stages);
  std::vector<ProbVector> theta;
  theta.reserve(num_stages);
  for (Eigen::Index k = 0; k < pooled.rows(); ++k)
    theta.push_back(smoothed_estimate(pooled.row(k), smoothing));
  return theta;
}

FittedStagedTree refit_pooled(const CountTable& counts, const Staging& staging, Smoothing smoothing) {
  staging.check_compatible(counts.tree());
  std::vector<std::vector<ProbVector>> theta;
  for (int d = 0; d < counts.num_depths(); ++d)
    theta.push_back(fit_depth(counts.depth(d), staging.labels(d), staging.num_stages(d), smoothing));
  return FittedStagedTree(counts.tree(), staging, std::move(theta), counts.total(), smoothing.alpha);
}

FittedStagedTree fit_saturated(const CountTable& counts, Smoothing smoothing) {
  return refit_pooled(counts, Staging::saturated(counts.tree()), smoothing);
}

double depth_log_likelihood(const CountMatrix& pooled, const std::vector<ProbVector>& theta) {
  double ll = 0.0;
  for (Eigen::Index k = 0; k < pooled.rows(); ++k) {
    for (Eigen::Index x = 0; x < pooled.cols(); ++x) {
      const auto c = pooled(k, x);
      if (c == 0) continue;
      const double t = theta[k][x];
      if (!(t > 0.0)) throw NumericError("log-likelihood is -inf: observed transition has zero probability");
      ll += static_cast<double>(c) * std::log(t);
    }
  }
  return ll;
}

double log_likelihood(const FittedStagedTree& model, const CountTable& counts) {
  if (!(model.tree() == counts.tree())) throw DataError("model and counts are on different trees");
  double ll = 0.0;
  for (int d = 0; d < counts.num_depths(); ++d) {
    const auto& st = model.staging();
    ll += depth_log_likelihood(pool_depth(counts.depth(d), st.labels(d), st.num_stages(d)), model.theta(d));
  }
  return ll;
}

long long n_free_params(const Staging& staging, const EventTree& tree) {
  staging.check_compatible(tree);
  long long k = 0;
  for (int d = 0; d < tree.num_variables(); ++d)
    k += static_cast<long long>(staging.num_stages(d)) * (tree.cardinality(d) - 1);
  return k;
}

ModelScore score_bic(const FittedStagedTree& model, const CountTable& counts) {
  if (counts.total() < 1) throw DataError("BIC needs at least one observation");
  ModelScore score;
  score.loglik = log_likelihood(model, counts);
  score.n_params = n_free_params(model.staging(), model.tree());
  score.n = counts.total();
  score.bic = -2.0 * score.loglik + static_cast<double>(score.n_params) * std::log(static_cast<double>(score.n));
  return score;
}

double depth_bic(const CountMatrix& counts, std::span<const int> labels, int num_stages,
                 Smoothing smoothing, std::int64_t n) {
  const CountMatrix pooled = pool_depth(counts, labels, num_stages);
  std::vector<ProbVector> theta;
  theta.reserve(num_stages);
  for (Eigen::Index k = 0; k < pooled.rows(); ++k) theta.push_back(smoothed_estimate(pooled.row(k), smoothing));
  return -2.0 * depth_log_likelihood(pooled, theta) +
         static_cast<double>(num_stages) * static_cast<double>(counts.cols() - 1) *
             std::log(static_cast<double>(n));
}

}  // namespace sevt
