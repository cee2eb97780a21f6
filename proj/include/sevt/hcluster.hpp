#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

namespace sevt {

enum class Linkage { Average, Complete, McQuitty, WardD2 };

/// Parses "average", "complete", "mcquitty" or "ward.D2" (case-insensitive).
Linkage parse_linkage(std::string_view name);
std::string linkage_name(Linkage linkage);
std::vector<Linkage> all_linkages();

/// Merge history of an agglomeration over n items.
///
/// Items are clusters 0..n-1; merge t creates cluster n + t from `left` and
/// `right`, where `left` is the cluster holding the smaller item index.
struct Dendrogram {
  struct Merge {
    int left;
    int right;
    double height;
    int size;
  };

  int n_items = 0;
  std::vector<Merge> merges;
};

/// Agglomerative clustering of a symmetric dissimilarity matrix.
///
/// At each step the pair of active clusters with minimal dissimilarity is
/// merged; ties go to the lexicographically smallest pair, with each cluster
/// identified by its smallest item index. Ward.D2 squares the input
/// internally and reports square-rooted heights.
Dendrogram agglomerate(const Eigen::MatrixXd& dissimilarity, Linkage linkage);

/// Labels 0..k-1 (canonical, in order of first member) obtained by undoing
/// the last k-1 merges.
std::vector<int> cut(const Dendrogram& dendrogram, int k);

}  // namespace sevt
