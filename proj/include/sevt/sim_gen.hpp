#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include "sevt/data_io.hpp"
#include "sevt/staged_tree.hpp"

namespace sevt {

/// Deterministic random stream: std::mt19937_64 (whose output sequence is
/// fixed by the C++ standard) with portable transforms layered on top, so a
/// seed reproduces the same draws on every platform and standard library.
class RngStream {
 public:
  static constexpr const char* kGenerator = "mt19937_64+splitmix64/v1";

  explicit RngStream(std::uint64_t seed) : engine_(seed) {}
  /// Independent stream for (master seed, replication index, salt).
  static RngStream derive(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0) {
    return RngStream(derive_seed(master, index, salt));
  }
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t salt = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);
  /// Standard exponential.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct JoinMethod {
  double q = 0.9;
};
struct SplitMethod {
  int k0 = 2;
};

struct GenConfig {
  int p = 5;
  int levels = 2;
  std::variant<JoinMethod, SplitMethod> method = SplitMethod{};
  std::uint64_t seed = 0;
};

/// Binary-by-default tree with variables X1..Xp and levels "0", "1", ...
EventTree synthetic_tree(int p, int levels = 2);

/// Visits situations in order; each one after the first joins a uniformly
/// chosen existing stage with probability q, otherwise opens a new stage.
Staging random_staging_join(const EventTree& tree, double q, RngStream& rng);
/// Depths with more than k0 situations get exactly k0 nonempty stages;
/// smaller depths stay saturated.
Staging random_staging_split(const EventTree& tree, int k0, RngStream& rng);
/// Flat Dirichlet draw for every stage.
FittedStagedTree random_parameters(const EventTree& tree, const Staging& staging, RngStream& rng);
/// Forward sampling from the root.
Dataset sample(const FittedStagedTree& model, long long n, RngStream& rng);

/// Tree, staging and parameters from a GenConfig.
FittedStagedTree generate_model(const GenConfig& config, RngStream& rng);

}  // namespace sevt
