#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sevt/classify.hpp"
#include "sevt/sim_gen.hpp"
#include "sevt/stage_learning.hpp"

namespace sevt {

/// One staging generator of the simulation grid.
struct GenMethod {
  std::string name;  // "join" or "split"
  double q = 0.0;
  int k0 = 0;

  std::string label() const;
};

struct GridSpec {
  std::vector<int> ps{5, 7, 9, 11};
  std::vector<GenMethod> methods{{"join", 0.5, 0}, {"join", 0.9, 0}, {"split", 0.0, 2}};
  std::vector<long long> sample_sizes{128, 512, 2048, 8192};
  int replications = 20;
  std::vector<MetricId> metrics = all_metrics();
  std::vector<Linkage> linkages = all_linkages();
  std::vector<KSpec> kspecs{KSpec::uniform(2), KSpec::automatic()};
  std::vector<std::string> baselines{"full", "bhc"};
  int bhc_max_p = 7;
  std::uint64_t seed = 20240101;
  double alpha = 1.0;
  /// Plan rows without generating data or fitting.
  bool dry_run = false;
  int jobs = 1;

  /// Keys mirror the fields ("p", "methods", "N", "replications", "metrics",
  /// "linkages", "kspecs", "baselines", "bhc_max_p", "seed", "alpha",
  /// "dry_run", "jobs"); absent keys keep the defaults above.
  static GridSpec from_json(const nlohmann::json& j);
  void validate() const;
};

/// One line of the raw results table.
struct ResultRow {
  int p = 0;
  std::string gen_method;
  std::optional<double> q;
  std::optional<int> k0;
  long long n = 0;
  int rep = 0;
  std::string metric;   // learner metric, or the baseline name ("full", "bhc")
  std::string linkage;  // "NA" for baselines
  std::string kspec;    // "NA" for baselines
  double bic = 0.0;
  double hd_truth = 0.0;
  double delta_bic_vs_full = 0.0;
  double delta_hd_vs_full = 0.0;  // NaN when undefined
  double delta_bic_vs_bhc = 0.0;  // NaN when no BHC baseline
  double delta_hd_vs_bhc = 0.0;
  double time_s = 0.0;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::string error;  // empty on success

  // Position in the canonical order: (cell, rep, learner slot).
  std::vector<long long> order_key;
};

struct SummaryRow {
  int p = 0;
  std::string gen_method;
  std::optional<double> q;
  std::optional<int> k0;
  long long n = 0;
  std::string metric, linkage, kspec;
  int n_reps = 0;
  int n_errors = 0;
  double median_bic = 0.0;
  double median_hd_truth = 0.0;
  double median_delta_bic_vs_full = 0.0;
  double median_delta_hd_vs_full = 0.0;
  double median_delta_bic_vs_bhc = 0.0;
  double median_delta_hd_vs_bhc = 0.0;
  double median_time_s = 0.0;
  int undefined_hd_vs_full = 0;
  int undefined_hd_vs_bhc = 0;
};

struct GridResult {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
};

GridResult run_grid(const GridSpec& spec);
/// Medians per (p, method, N, metric, linkage, kspec) over replications.
/// NaN entries are excluded and counted; error rows are counted only.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// Shortest round-trip decimal; "NA" for NaN.
std::string format_number(double v);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct NamedDataset {
  std::string name;
  Dataset data;
};

struct ClassificationRow {
  std::string dataset;
  std::string split;  // split index, or "median"
  std::string metric, linkage, k;
  double accuracy = 0.0;
  double f1 = 0.0;
};

/// Repeated random train/test splits; every config is trained on each split.
/// Returns per-split rows followed by one "median" row per dataset and config.
std::vector<ClassificationRow> run_classification(const std::vector<NamedDataset>& datasets,
                                                  const std::string& class_name, int splits, double ratio,
                                                  const std::vector<LearnConfig>& configs, RngStream& rng);

/// Train/test index sets for one split: shuffled, first round(ratio * n) train.
std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> train_test_split(Eigen::Index n, double ratio,
                                                                                 RngStream& rng);

void write_classification_csv(std::ostream& out, const std::vector<ClassificationRow>& rows);

}  // namespace sevt
