#include "sevt/hcluster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "sevt/errors.hpp"
#include "sevt/event_tree.hpp"

namespace sevt {

Linkage parse_linkage(std::string_view name) {
  std::string key(name);
  for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "average") return Linkage::Average;
  if (key == "complete") return Linkage::Complete;
  if (key == "mcquitty") return Linkage::McQuitty;
  if (key == "ward.d2" || key == "ward_d2") return Linkage::WardD2;
  throw DataError("unknown linkage '" + std::string(name) + "'");
}

std::string linkage_name(Linkage linkage) {
  switch (linkage) {
    case Linkage::Average: return "average";
    case Linkage::Complete: return "complete";
    case Linkage::McQuitty: return "mcquitty";
    case Linkage::WardD2: return "ward.D2";
  }
  return "unknown";
}

std::vector<Linkage> all_linkages() {
  return {Linkage::Average, Linkage::Complete, Linkage::McQuitty, Linkage::WardD2};
}

namespace {

void check_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DataError("dissimilarity matrix is not square");
  if (m.rows() < 1) throw DataError("dissimilarity matrix is empty");
  if (!m.allFinite()) throw DataError("dissimilarity matrix has a non-finite entry");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m(i, i)) > 1e-12) throw DataError("dissimilarity matrix has a nonzero diagonal");
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12) throw DataError("dissimilarity matrix is not symmetric");
  }
}

// Lance-Williams update of d(k, i+j) from d(k,i), d(k,j) and d(i,j). For Ward
// all three arguments are squared dissimilarities.
double update(Linkage linkage, double dki, double dkj, double dij, double ni, double nj, double nk) {
  switch (linkage) {
    case Linkage::Average: return (ni * dki + nj * dkj) / (ni + nj);
    case Linkage::Complete: return std::max(dki, dkj);
    case Linkage::McQuitty: return 0.5 * (dki + dkj);
    case Linkage::WardD2: return ((ni + nk) * dki + (nj + nk) * dkj - nk * dij) / (ni + nj + nk);
  }
  return 0.0;
}

}  // namespace

Dendrogram agglomerate(const Eigen::MatrixXd& dissimilarity, Linkage linkage) {
  check_matrix(dissimilarity);
  const int n = static_cast<int>(dissimilarity.rows());
  Dendrogram den{n, {}};
  den.merges.reserve(n > 0 ? n - 1 : 0);

  // Only the upper triangle d(i, j), i < j, is maintained. Slot i holds the
  // active cluster whose smallest item is i.
  Eigen::MatrixXd d = dissimilarity;
  if (linkage == Linkage::WardD2) d = d.array().square().matrix();
  std::vector<char> active(n, 1);
  std::vector<double> size(n, 1.0);
  std::vector<int> cluster_id(n);
  std::iota(cluster_id.begin(), cluster_id.end(), 0);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<int> nn(n, -1);
  std::vector<double> nnd(n, kInf);
  auto refresh = [&](int i) {
    nn[i] = -1;
    nnd[i] = kInf;
    for (int j = i + 1; j < n; ++j)
      if (active[j] && d(i, j) < nnd[i]) {
        nnd[i] = d(i, j);
        nn[i] = j;
      }
  };
  for (int i = 0; i < n; ++i) refresh(i);

  for (int step = 0; step + 1 < n; ++step) {
    int a = -1;
    for (int i = 0; i < n; ++i)
      if (active[i] && nn[i] >= 0 && (a < 0 || nnd[i] < nnd[a])) a = i;
    const int b = nn[a];
    const double dab = d(a, b);

    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double dka = k < a ? d(k, a) : d(a, k);
      const double dkb = k < b ? d(k, b) : d(b, k);
      const double v = update(linkage, dka, dkb, dab, size[a], size[b], size[k]);
      (k < a ? d(k, a) : d(a, k)) = v;
    }
    active[b] = 0;
    const double height = linkage == Linkage::WardD2 ? std::sqrt(std::max(0.0, dab)) : dab;
    den.merges.push_back({cluster_id[a], cluster_id[b], height, static_cast<int>(size[a] + size[b])});
    size[a] += size[b];
    cluster_id[a] = n + step;

    refresh(a);
    for (int k = 0; k < a; ++k) {
      if (!active[k]) continue;
      if (nn[k] == a || nn[k] == b)
        refresh(k);
      else if (d(k, a) < nnd[k] || (d(k, a) == nnd[k] && a < nn[k])) {
        nnd[k] = d(k, a);
        nn[k] = a;
      }
    }
    for (int k = a + 1; k < b; ++k)
      if (active[k] && nn[k] == b) refresh(k);
  }
  return den;
}

std::vector<int> cut(const Dendrogram& den, int k) {
  const int n = den.n_items;
  if (k < 1 || k > n) throw DataError("cut: k must lie in [1, n_items]");
  // Union-find over items; cluster ids map to a representative item.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> rep(n + den.merges.size());
  std::iota(rep.begin(), rep.begin() + n, 0);
  for (int t = 0; t < n - k; ++t) {
    const auto& m = den.merges[t];
    const int ra = find(rep[m.left]), rb = find(rep[m.right]);
    parent[rb] = ra;
    rep[n + t] = ra;
  }
  std::vector<int> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = find(i);
  return canonical_labels(roots);
}

}  // namespace sevt
