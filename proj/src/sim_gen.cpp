#include "sevt/sim_gen.hpp"

#include <cmath>
#include <limits>

#include "sevt/errors.hpp"

namespace sevt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t RngStream::derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t salt) {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ salt);
}

double RngStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw DataError("uniform_int over an empty range");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return x % n;
}

double RngStream::exponential() { return -std::log(uniform()); }

EventTree synthetic_tree(int p, int levels) {
  if (p < 1) throw DataError("p must be >= 1");
  if (levels < 2) throw DataError("variables need at least 2 levels");
  std::vector<VariableSpec> specs;
  for (int i = 0; i < p; ++i) {
    VariableSpec v{"X" + std::to_string(i + 1), {}};
    for (int l = 0; l < levels; ++l) v.levels.push_back(std::to_string(l));
    specs.push_back(std::move(v));
  }
  return EventTree(std::move(specs));
}

Staging random_staging_join(const EventTree& tree, double q, RngStream& rng) {
  if (!(q >= 0.0 && q <= 1.0)) throw DataError("join probability q must lie in [0, 1]");
  std::vector<std::vector<int>> labels(tree.num_variables());
  labels[0] = {0};
  for (int d = 1; d < tree.num_variables(); ++d) {
    const std::size_t m = tree.num_situations(d);
    labels[d].resize(m);
    int stages = 1;
    labels[d][0] = 0;
    for (std::size_t s = 1; s < m; ++s) {
      if (rng.uniform() < q)
        labels[d][s] = static_cast<int>(rng.uniform_int(stages));
      else
        labels[d][s] = stages++;
    }
  }
  return Staging(std::move(labels));
}

Staging random_staging_split(const EventTree& tree, int k0, RngStream& rng) {
  if (k0 < 1) throw DataError("k0 must be >= 1");
  std::vector<std::vector<int>> labels(tree.num_variables());
  labels[0] = {0};
  for (int d = 1; d < tree.num_variables(); ++d) {
    const std::size_t m = tree.num_situations(d);
    labels[d].resize(m);
    if (m <= static_cast<std::size_t>(k0)) {
      for (std::size_t s = 0; s < m; ++s) labels[d][s] = static_cast<int>(s);
      continue;
    }
    std::vector<char> used;
    int distinct = 0;
    do {
      used.assign(k0, 0);
      distinct = 0;
      for (std::size_t s = 0; s < m; ++s) {
        const int k = static_cast<int>(rng.uniform_int(k0));
        labels[d][s] = k;
        if (!used[k]) {
          used[k] = 1;
          ++distinct;
        }
      }
    } while (distinct < k0);
  }
  return Staging(std::move(labels));
}

FittedStagedTree random_parameters(const EventTree& tree, const Staging& staging, RngStream& rng) {
  staging.check_compatible(tree);
  std::vector<std::vector<ProbVector>> theta(tree.num_variables());
  for (int d = 0; d < tree.num_variables(); ++d) {
    for (int k = 0; k < staging.num_stages(d); ++k) {
      ProbVector v(tree.cardinality(d));
      for (Eigen::Index x = 0; x < v.size(); ++x) v[x] = rng.exponential();
      v /= v.sum();
      theta[d].push_back(std::move(v));
    }
  }
  return FittedStagedTree(tree, staging, std::move(theta));
}

Dataset sample(const FittedStagedTree& model, long long n, RngStream& rng) {
  if (n < 1) throw DataError("sample size must be >= 1");
  const auto& tree = model.tree();
  const int p = tree.num_variables();
  Dataset data{tree.variables(), LevelMatrix(n, p)};
  for (long long r = 0; r < n; ++r) {
    std::size_t situation = 0;
    for (int d = 0; d < p; ++d) {
      const ProbVector& theta = model.situation_theta(d, situation);
      const double u = rng.uniform();
      double cumulative = 0.0;
      int x = static_cast<int>(theta.size()) - 1;
      for (Eigen::Index l = 0; l < theta.size(); ++l) {
        cumulative += theta[l];
        if (u < cumulative) {
          x = static_cast<int>(l);
          break;
        }
      }
      // Never land on a zero-probability level through rounding at the top.
      while (theta[x] == 0.0 && x > 0) --x;
      data.rows(r, d) = x;
      situation = situation * tree.cardinality(d) + x;
    }
  }
  return data;
}

FittedStagedTree generate_model(const GenConfig& config, RngStream& rng) {
  const EventTree tree = synthetic_tree(config.p, config.levels);
  const Staging staging = std::visit(
      [&](const auto& method) {
        using M = std::decay_t<decltype(method)>;
        if constexpr (std::is_same_v<M, JoinMethod>)
          return random_staging_join(tree, method.q, rng);
        else
          return random_staging_split(tree, method.k0, rng);
      },
      config.method);
  return random_parameters(tree, staging, rng);
}

}  // namespace sevt
