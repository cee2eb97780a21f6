#include "sevt/simplex_metrics.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace sevt {

namespace {

struct NamedMetric {
  std::string_view name;
  Metric kind;
};

constexpr NamedMetric kNames[] = {
    {"totalvariation", Metric::TotalVariation}, {"hellinger", Metric::Hellinger},
    {"fisher", Metric::Fisher},                 {"jensenshannon", Metric::JensenShannon},
    {"kaniadakis", Metric::Kaniadakis},         {"totalkl", Metric::TotalKL},
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

MetricId MetricId::parse(std::string_view name) {
  std::string key = lower(name);
  std::string param;
  if (auto colon = key.find(':'); colon != std::string::npos) {
    param = key.substr(colon + 1);
    key.resize(colon);
  }
  for (const auto& [n, kind] : kNames) {
    if (key != n) continue;
    MetricId id{kind};
    if (!param.empty()) {
      if (kind != Metric::Kaniadakis) throw DataError("metric '" + key + "' takes no parameter");
      char* end = nullptr;
      id.kappa = std::strtod(param.c_str(), &end);
      if (end != param.c_str() + param.size() || !(id.kappa > 0 && id.kappa < 1))
        throw DataError("kaniadakis kappa must lie in (0, 1)");
    }
    return id;
  }
  throw DataError("unknown metric '" + std::string(name) + "'");
}

std::string MetricId::name() const {
  for (const auto& [n, k] : kNames) {
    if (k != kind) continue;
    if (kind == Metric::Kaniadakis && kappa != 0.5) {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, kappa);
      return std::string(n) + ":" + std::string(buf, ptr);
    }
    return std::string(n);
  }
  return "unknown";
}

std::vector<MetricId> all_metrics() {
  std::vector<MetricId> out;
  for (const auto& [n, kind] : kNames) out.push_back(MetricId{kind});
  return out;
}

void check_simplex(const ProbVector& p) {
  if (p.size() < 2) throw DataError("probability vector needs at least 2 entries");
  if (!p.allFinite() || (p.array() < 0).any()) throw DataError("probability vector has a negative or non-finite entry");
  if (std::abs(p.sum() - 1.0) > 1e-9) throw DataError("probability vector does not sum to 1");
}

Eigen::MatrixXd pairwise_matrix(std::span<const ProbVector> vectors, const MetricId& metric) {
  if (vectors.empty()) throw DataError("pairwise matrix needs at least one vector");
  for (const auto& v : vectors) {
    check_simplex(v);
    if (v.size() != vectors.front().size()) throw DataError("probability vectors differ in length");
  }
  const auto n = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = dissimilarity(vectors[i], vectors[j], metric);
  return m;
}

}  // namespace sevt
