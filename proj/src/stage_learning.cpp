#include "sevt/stage_learning.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "sevt/errors.hpp"

namespace sevt {

KSpec KSpec::uniform(int k) {
  if (k < 1) throw DataError("number of stages must be >= 1");
  KSpec spec;
  spec.uniform_ = k;
  return spec;
}

KSpec KSpec::per_depth(std::vector<std::optional<int>> ks) {
  for (const auto& k : ks)
    if (k && *k < 1) throw DataError("number of stages must be >= 1");
  KSpec spec;
  spec.per_depth_ = std::move(ks);
  spec.explicit_ = true;
  return spec;
}

KSpec KSpec::parse(std::string_view text) {
  auto parse_one = [](std::string_view item) -> std::optional<int> {
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "auto" || item == "NA") return std::nullopt;
    int k = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
    if (ec != std::errc{} || ptr != item.data() + item.size() || k < 1)
      throw DataError("invalid stage count '" + std::string(item) + "'");
    return k;
  };
  if (text.find(',') == std::string_view::npos) {
    auto k = parse_one(text);
    return k ? uniform(*k) : automatic();
  }
  std::vector<std::optional<int>> ks;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    ks.push_back(parse_one(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return per_depth(std::move(ks));
}

std::optional<int> KSpec::for_depth(int depth, std::size_t m) const {
  if (!explicit_) {
    if (!uniform_) return std::nullopt;
    return std::min<int>(*uniform_, static_cast<int>(m));
  }
  if (depth < 1 || depth > static_cast<int>(per_depth_.size()))
    throw DataError("stage-count list does not cover depth " + std::to_string(depth));
  const auto& k = per_depth_[depth - 1];
  if (k && *k > static_cast<int>(m))
    throw DataError("depth " + std::to_string(depth) + " has only " + std::to_string(m) +
                    " situations, cannot form " + std::to_string(*k) + " stages");
  return k;
}

std::string KSpec::to_string() const {
  if (!explicit_) return uniform_ ? std::to_string(*uniform_) : "auto";
  std::string out;
  for (std::size_t i = 0; i < per_depth_.size(); ++i) {
    if (i) out += ',';
    out += per_depth_[i] ? std::to_string(*per_depth_[i]) : "auto";
  }
  return out;
}

void LearnConfig::validate() const {
  if (metric.requires_positive() && !(smoothing.alpha > 0.0))
    throw DataError("metric '" + metric.name() + "' requires smoothing alpha > 0");
}

int select_k(const Dendrogram& dendrogram, int depth, const CountTable& counts, Smoothing smoothing) {
  const CountMatrix& c = counts.depth(depth);
  int best_k = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= dendrogram.n_items; ++k) {
    // Depth terms are additive in the global BIC, so the argmin over the
    // depth-local term equals the argmin over the global score.
    const double score = depth_bic(c, cut(dendrogram, k), k, smoothing, counts.total());
    if (score < best) {
      best = score;
      best_k = k;
    }
  }
  return best_k;
}

FittedStagedTree learn_hclust(const CountTable& counts, const LearnConfig& config) {
  config.validate();
  const EventTree& tree = counts.tree();
  std::vector<std::vector<int>> labels(tree.num_variables());
  labels[0] = {0};
  for (int d = 1; d < tree.num_variables(); ++d) {
    const CountMatrix& c = counts.depth(d);
    std::vector<ProbVector> vectors;
    vectors.reserve(c.rows());
    for (Eigen::Index s = 0; s < c.rows(); ++s) vectors.push_back(smoothed_estimate(c.row(s), config.smoothing));
    const Dendrogram den = agglomerate(pairwise_matrix(vectors, config.metric), config.linkage);
    const auto fixed = config.kspec.for_depth(d, tree.num_situations(d));
    const int k = fixed ? *fixed : select_k(den, d, counts, config.smoothing);
    labels[d] = cut(den, k);
  }
  return refit_pooled(counts, Staging(std::move(labels)), config.smoothing);
}

namespace {

// -2 * log-likelihood of a pooled count row under its smoothed estimate.
double deviance(const Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic>& row, Smoothing smoothing) {
  const ProbVector theta = smoothed_estimate(row, smoothing);
  double ll = 0.0;
  for (Eigen::Index x = 0; x < row.size(); ++x) {
    if (row[x] == 0) continue;
    if (!(theta[x] > 0.0)) throw NumericError("log-likelihood is -inf: observed transition has zero probability");
    ll += static_cast<double>(row[x]) * std::log(theta[x]);
  }
  return -2.0 * ll;
}

}  // namespace

FittedStagedTree learn_bhc(const CountTable& counts, Smoothing smoothing, std::vector<double>* bic_trace) {
  const EventTree& tree = counts.tree();
  const double log_n = std::log(static_cast<double>(std::max<std::int64_t>(1, counts.total())));
  std::vector<std::vector<int>> labels(tree.num_variables());
  labels[0] = {0};

  double bic = 0.0;
  if (bic_trace) {
    bic_trace->clear();
    bic = score_bic(fit_saturated(counts, smoothing), counts).bic;
    bic_trace->push_back(bic);
  }

  using Row = Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic>;
  for (int d = 1; d < tree.num_variables(); ++d) {
    const CountMatrix& c = counts.depth(d);
    const auto m = static_cast<int>(c.rows());
    const double penalty = static_cast<double>(tree.cardinality(d) - 1) * log_n;

    // Stage slots are named by their smallest situation; slot order is the
    // tie-break order.
    std::vector<int> owner(m);
    std::vector<Row> pooled(m);
    std::vector<double> dev(m);
    std::vector<char> alive(m, 1);
    for (int s = 0; s < m; ++s) {
      owner[s] = s;
      pooled[s] = c.row(s);
      dev[s] = deviance(pooled[s], smoothing);
    }
    while (true) {
      double best = 0.0;
      int best_a = -1, best_b = -1;
      for (int a = 0; a < m; ++a) {
        if (!alive[a]) continue;
        for (int b = a + 1; b < m; ++b) {
          if (!alive[b]) continue;
          const double delta = deviance(pooled[a] + pooled[b], smoothing) - dev[a] - dev[b] - penalty;
          if (delta < best) {
            best = delta;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best_a < 0) break;
      pooled[best_a] += pooled[best_b];
      dev[best_a] = deviance(pooled[best_a], smoothing);
      alive[best_b] = 0;
      for (int s = 0; s < m; ++s)
        if (owner[s] == best_b) owner[s] = best_a;
      if (bic_trace) {
        bic += best;
        bic_trace->push_back(bic);
      }
    }
    labels[d] = std::move(owner);
  }
  return refit_pooled(counts, Staging(std::move(labels)), smoothing);
}

FittedStagedTree baseline_full(const CountTable& counts, Smoothing smoothing) {
  return fit_saturated(counts, smoothing);
}

}  // namespace sevt
