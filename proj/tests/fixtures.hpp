#pragma once

// Shared models and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "sevt/staged_tree.hpp"

namespace sevt::testing {

/// Three variables X1 in {a,b,c}, X2 in {0,1}, X3 in {1,2,3}; one stage at
/// depth 1, stages {(a,.)} and {(b,.),(c,.)} at depth 2.
inline EventTree example_tree() {
  return EventTree({{"X1", {"a", "b", "c"}}, {"X2", {"0", "1"}}, {"X3", {"1", "2", "3"}}});
}

inline Staging example_staging() { return Staging({{0}, {0, 0, 0}, {0, 0, 1, 1, 1, 1}}); }

inline FittedStagedTree example_model() {
  auto v = [](std::initializer_list<double> xs) {
    ProbVector p(static_cast<Eigen::Index>(xs.size()));
    std::copy(xs.begin(), xs.end(), p.data());
    return p;
  };
  return FittedStagedTree(example_tree(), example_staging(),
                          {{v({0.3, 0.5, 0.2})}, {v({0.6, 0.4})}, {v({0.7, 0.2, 0.1}), v({0.4, 0.4, 0.2})}});
}

/// Reference joint probabilities of the 18 atoms, lexicographic in (X1, X2, X3).
inline std::vector<double> example_table() {
  return {0.1260, 0.0360, 0.0180, 0.0840, 0.0240, 0.0120,   // a
          0.1200, 0.1200, 0.0600, 0.0800, 0.0800, 0.0400,   // b
          0.0480, 0.0480, 0.0240, 0.0320, 0.0320, 0.0160};  // c
}

enum class OracleLinkage { Average, Complete };

/// Naive agglomeration: recomputes every inter-cluster dissimilarity from the
/// raw matrix at each step. Clusters are named by their smallest item and
/// ties go to the lexicographically smallest pair. Returns the label vector
/// (canonical) for every k = n..1 indexed by k.
inline std::vector<std::vector<int>> naive_cuts(const Eigen::MatrixXd& d, OracleLinkage linkage) {
  const int n = static_cast<int>(d.rows());
  std::vector<std::vector<int>> clusters(n);
  for (int i = 0; i < n; ++i) clusters[i] = {i};
  auto labels_of = [&]() {
    std::vector<int> lab(n);
    // clusters are kept sorted by smallest member, which equals canonical order
    for (std::size_t c = 0; c < clusters.size(); ++c)
      for (int item : clusters[c]) lab[item] = static_cast<int>(c);
    return lab;
  };
  std::vector<std::vector<int>> by_k(n + 1);
  by_k[n] = labels_of();
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double v = linkage == OracleLinkage::Complete ? -std::numeric_limits<double>::infinity() : 0.0;
        for (int i : clusters[a])
          for (int j : clusters[b]) v = linkage == OracleLinkage::Complete ? std::max(v, d(i, j)) : v + d(i, j);
        if (linkage == OracleLinkage::Average) v /= static_cast<double>(clusters[a].size() * clusters[b].size());
        if (v < best) {
          best = v;
          ba = a;
          bb = b;
        }
      }
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    std::sort(clusters[ba].begin(), clusters[ba].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
    by_k[clusters.size()] = labels_of();
  }
  return by_k;
}

/// Hamming distance of one depth by exhaustive search over injective label
/// maps from the smaller label set into the larger one.
inline int brute_force_hamming(const std::vector<int>& a, const std::vector<int>& b) {
  const int ka = *std::max_element(a.begin(), a.end()) + 1;
  const int kb = *std::max_element(b.begin(), b.end()) + 1;
  const bool swap = ka > kb;
  const auto& small = swap ? b : a;
  const auto& large = swap ? a : b;
  const int kl = std::max(ka, kb);
  std::vector<int> perm(kl);
  std::iota(perm.begin(), perm.end(), 0);
  int best = static_cast<int>(a.size());
  do {
    int disagree = 0;
    for (std::size_t s = 0; s < a.size(); ++s)
      if (perm[small[s]] != large[s]) ++disagree;
    best = std::min(best, disagree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace sevt::testing
