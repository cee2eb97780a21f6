#include "sevt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include "sevt/errors.hpp"
#include "sevt/model_eval.hpp"

namespace sevt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <typename F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }
std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : "NA"; }

double median_or_nan(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  return values.empty() ? kNaN : median(std::move(values));
}

struct DatasetTask {
  int p;
  const GenMethod* method;
  long long n;
  int rep;
  long long cell;
};

struct Learner {
  std::string metric, linkage, kspec;
  std::optional<LearnConfig> config;  // empty for baselines
};

std::vector<ResultRow> run_dataset(const GridSpec& spec, const DatasetTask& task, const std::vector<Learner>& learners) {
  const bool with_bhc = task.p <= spec.bhc_max_p &&
                        std::find(spec.baselines.begin(), spec.baselines.end(), "bhc") != spec.baselines.end();
  const bool emit_full = std::find(spec.baselines.begin(), spec.baselines.end(), "full") != spec.baselines.end();
  const std::uint64_t seed = RngStream::derive_seed(spec.seed, static_cast<std::uint64_t>(task.cell),
                                                    static_cast<std::uint64_t>(task.rep));

  auto make_row = [&](const Learner& l, std::size_t slot) {
    ResultRow row;
    row.p = task.p;
    row.gen_method = task.method->name;
    if (task.method->name == "join") row.q = task.method->q;
    else row.k0 = task.method->k0;
    row.n = task.n;
    row.rep = task.rep;
    row.metric = l.metric;
    row.linkage = l.linkage;
    row.kspec = l.kspec;
    row.seed = seed;
    row.order_key = {task.cell, task.rep, static_cast<long long>(slot)};
    return row;
  };

  // Emitted learners: configs, then the full and BHC baselines when enabled.
  std::vector<std::size_t> emitted;
  for (std::size_t i = 0; i < learners.size(); ++i) {
    const auto& l = learners[i];
    if (l.config || (l.metric == "full" && emit_full) || (l.metric == "bhc" && with_bhc)) emitted.push_back(i);
  }

  std::vector<ResultRow> rows;
  if (spec.dry_run) {
    for (auto i : emitted) {
      auto row = make_row(learners[i], i);
      row.bic = row.hd_truth = row.delta_bic_vs_full = row.delta_hd_vs_full = kNaN;
      row.delta_bic_vs_bhc = row.delta_hd_vs_bhc = row.time_s = kNaN;
      row.timestamp = utc_timestamp();
      rows.push_back(std::move(row));
    }
    return rows;
  }

  RngStream rng(seed);
  std::optional<CountTable> counts;
  Staging truth;
  try {
    GenConfig gen{task.p, 2, {}, seed};
    if (task.method->name == "join") gen.method = JoinMethod{task.method->q};
    else gen.method = SplitMethod{task.method->k0};
    const FittedStagedTree model = generate_model(gen, rng);
    truth = model.staging();
    counts.emplace(count_transitions(sample(model, task.n, rng), model.tree()));
  } catch (const std::exception& e) {
    ResultRow row = make_row(Learner{"-", "NA", "NA", std::nullopt}, 0);
    row.bic = row.hd_truth = row.delta_bic_vs_full = row.delta_hd_vs_full = kNaN;
    row.delta_bic_vs_bhc = row.delta_hd_vs_bhc = row.time_s = kNaN;
    row.error = std::string("generation failed: ") + e.what();
    row.timestamp = utc_timestamp();
    return {row};
  }

  const Smoothing smoothing(spec.alpha);
  struct Fit {
    std::optional<FittedStagedTree> model;
    ModelScore score;
    double time_s = kNaN;
    std::string error;
  };
  auto fit_one = [&](const Learner& l) {
    Fit fit;
    try {
      fit.time_s = timed([&] {
        if (l.config) fit.model = learn_hclust(*counts, *l.config);
        else if (l.metric == "bhc") fit.model = learn_bhc(*counts, smoothing);
        else fit.model = baseline_full(*counts, smoothing);
      });
      fit.score = score_bic(*fit.model, *counts);
    } catch (const std::exception& e) {
      fit.model.reset();
      fit.error = e.what();
    }
    return fit;
  };

  const std::size_t full_slot = learners.size() - 2, bhc_slot = learners.size() - 1;
  const Fit full = fit_one(learners[full_slot]);
  const Fit bhc = with_bhc ? fit_one(learners[bhc_slot]) : Fit{};

  for (auto i : emitted) {
    const auto& l = learners[i];
    Fit fit = i == full_slot ? full : i == bhc_slot ? bhc : fit_one(l);
    ResultRow row = make_row(l, i);
    row.timestamp = utc_timestamp();
    row.time_s = fit.time_s;
    if (!fit.model) {
      row.bic = row.hd_truth = row.delta_bic_vs_full = row.delta_hd_vs_full = kNaN;
      row.delta_bic_vs_bhc = row.delta_hd_vs_bhc = kNaN;
      row.error = fit.error;
      rows.push_back(std::move(row));
      continue;
    }
    const Staging& staging = fit.model->staging();
    row.bic = fit.score.bic;
    row.hd_truth = hamming_distance(staging, truth);
    row.delta_bic_vs_full = kNaN;
    row.delta_hd_vs_full = kNaN;
    row.delta_bic_vs_bhc = kNaN;
    row.delta_hd_vs_bhc = kNaN;
    try {
      if (full.model) {
        row.delta_bic_vs_full = relative_bic(fit.score, full.score);
        row.delta_hd_vs_full = relative_hd(staging, full.model->staging(), truth).value_or(kNaN);
      }
      if (bhc.model) {
        row.delta_bic_vs_bhc = relative_bic(fit.score, bhc.score);
        row.delta_hd_vs_bhc = relative_hd(staging, bhc.model->staging(), truth).value_or(kNaN);
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string GenMethod::label() const {
  if (name == "join") return "join(q=" + format_number(q) + ")";
  return "split(k0=" + std::to_string(k0) + ")";
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
  GridSpec spec;
  try {
    if (j.contains("p")) spec.ps = j.at("p").get<std::vector<int>>();
    if (j.contains("methods")) {
      spec.methods.clear();
      for (const auto& m : j.at("methods")) {
        GenMethod g;
        g.name = m.at("gen").get<std::string>();
        if (g.name == "join") g.q = m.at("q").get<double>();
        else if (g.name == "split") g.k0 = m.value("k0", 2);
        else throw DataError("unknown generation method '" + g.name + "'");
        spec.methods.push_back(g);
      }
    }
    if (j.contains("N")) spec.sample_sizes = j.at("N").get<std::vector<long long>>();
    if (j.contains("replications")) spec.replications = j.at("replications").get<int>();
    if (j.contains("metrics")) {
      spec.metrics.clear();
      for (const auto& m : j.at("metrics")) spec.metrics.push_back(MetricId::parse(m.get<std::string>()));
    }
    if (j.contains("linkages")) {
      spec.linkages.clear();
      for (const auto& l : j.at("linkages")) spec.linkages.push_back(parse_linkage(l.get<std::string>()));
    }
    if (j.contains("kspecs")) {
      spec.kspecs.clear();
      for (const auto& k : j.at("kspecs"))
        spec.kspecs.push_back(KSpec::parse(k.is_number() ? std::to_string(k.get<int>()) : k.get<std::string>()));
    }
    if (j.contains("baselines")) spec.baselines = j.at("baselines").get<std::vector<std::string>>();
    if (j.contains("bhc_max_p")) spec.bhc_max_p = j.at("bhc_max_p").get<int>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
    if (j.contains("dry_run")) spec.dry_run = j.at("dry_run").get<bool>();
    if (j.contains("jobs")) spec.jobs = j.at("jobs").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid grid JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

void GridSpec::validate() const {
  if (replications < 1) throw DataError("replications must be >= 1");
  if (ps.empty() || methods.empty() || sample_sizes.empty()) throw DataError("grid has an empty axis");
  if (metrics.empty() || linkages.empty() || kspecs.empty()) throw DataError("grid has no learner configs");
  for (int p : ps)
    if (p < 2) throw DataError("grid p values must be >= 2");
  for (long long n : sample_sizes)
    if (n < 1) throw DataError("grid sample sizes must be >= 1");
  for (const auto& m : methods) {
    if (m.name == "join" && !(m.q > 0.0 && m.q <= 1.0)) throw DataError("join q must lie in (0, 1]");
    if (m.name == "split" && m.k0 < 1) throw DataError("split k0 must be >= 1");
    if (m.name != "join" && m.name != "split") throw DataError("unknown generation method '" + m.name + "'");
  }
  for (const auto& b : baselines)
    if (b != "full" && b != "bhc") throw DataError("unknown baseline '" + b + "'");
  Smoothing check(alpha);
  for (const auto& m : metrics) LearnConfig{m, Linkage::Average, KSpec::automatic(), check}.validate();
}

GridResult run_grid(const GridSpec& spec) {
  spec.validate();
  std::vector<Learner> learners;
  for (const auto& m : spec.metrics)
    for (const auto& l : spec.linkages)
      for (const auto& k : spec.kspecs)
        learners.push_back({m.name(), linkage_name(l), k.to_string(), LearnConfig{m, l, k, Smoothing(spec.alpha)}});
  learners.push_back({"full", "NA", "NA", std::nullopt});
  learners.push_back({"bhc", "NA", "NA", std::nullopt});

  std::vector<DatasetTask> tasks;
  long long cell = 0;
  for (int p : spec.ps)
    for (const auto& method : spec.methods)
      for (long long n : spec.sample_sizes) {
        for (int r = 0; r < spec.replications; ++r) tasks.push_back({p, &method, n, r, cell});
        ++cell;
      }

  std::vector<std::vector<ResultRow>> per_task(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) per_task[t] = run_dataset(spec, tasks[t], learners);
  };
  const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(tasks.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
    worker();
  }

  GridResult result;
  for (auto& rows : per_task)
    for (auto& row : rows) result.rows.push_back(std::move(row));
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return a.order_key < b.order_key; });
  result.summary = summarize(result.rows);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::map<std::string, std::size_t> index;
  std::vector<SummaryRow> out;
  std::vector<std::vector<const ResultRow*>> members;
  for (const auto& row : rows) {
    const std::string key = std::to_string(row.p) + '|' + row.gen_method + '|' + opt_number(row.q) + '|' +
                            opt_int(row.k0) + '|' + std::to_string(row.n) + '|' + row.metric + '|' +
                            row.linkage + '|' + row.kspec;
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      SummaryRow s;
      s.p = row.p;
      s.gen_method = row.gen_method;
      s.q = row.q;
      s.k0 = row.k0;
      s.n = row.n;
      s.metric = row.metric;
      s.linkage = row.linkage;
      s.kspec = row.kspec;
      out.push_back(s);
      members.emplace_back();
    }
    members[it->second].push_back(&row);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    auto& s = out[g];
    std::vector<double> bic, hd, dbf, dhf, dbb, dhb, t;
    for (const ResultRow* r : members[g]) {
      if (!r->error.empty()) {
        ++s.n_errors;
        continue;
      }
      ++s.n_reps;
      bic.push_back(r->bic);
      hd.push_back(r->hd_truth);
      dbf.push_back(r->delta_bic_vs_full);
      dhf.push_back(r->delta_hd_vs_full);
      dbb.push_back(r->delta_bic_vs_bhc);
      dhb.push_back(r->delta_hd_vs_bhc);
      t.push_back(r->time_s);
      if (std::isnan(r->delta_hd_vs_full)) ++s.undefined_hd_vs_full;
      if (std::isnan(r->delta_hd_vs_bhc)) ++s.undefined_hd_vs_bhc;
    }
    s.median_bic = median_or_nan(bic);
    s.median_hd_truth = median_or_nan(hd);
    s.median_delta_bic_vs_full = median_or_nan(dbf);
    s.median_delta_hd_vs_full = median_or_nan(dhf);
    s.median_delta_bic_vs_bhc = median_or_nan(dbb);
    s.median_delta_hd_vs_bhc = median_or_nan(dhb);
    s.median_time_s = median_or_nan(t);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "p,gen_method,q,k0,N,rep,metric,linkage,kspec,bic,hd_truth,delta_bic_vs_full,delta_hd_vs_full,"
         "delta_bic_vs_bhc,delta_hd_vs_bhc,time_s,seed,timestamp,error\n";
  for (const auto& r : rows) {
    out << r.p << ',' << r.gen_method << ',' << opt_number(r.q) << ',' << opt_int(r.k0) << ',' << r.n << ','
        << r.rep << ',' << r.metric << ',' << r.linkage << ',' << csv_field(r.kspec) << ',' << format_number(r.bic)
        << ',' << format_number(r.hd_truth) << ',' << format_number(r.delta_bic_vs_full) << ','
        << format_number(r.delta_hd_vs_full) << ',' << format_number(r.delta_bic_vs_bhc) << ','
        << format_number(r.delta_hd_vs_bhc) << ',' << format_number(r.time_s) << ',' << r.seed << ','
        << r.timestamp << ',' << csv_field(r.error) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "p,gen_method,q,k0,N,metric,linkage,kspec,n_reps,n_errors,bic,hd_truth,delta_bic_vs_full,"
         "delta_hd_vs_full,delta_bic_vs_bhc,delta_hd_vs_bhc,time_s,undefined_hd_vs_full,undefined_hd_vs_bhc\n";
  for (const auto& s : rows) {
    out << s.p << ',' << s.gen_method << ',' << opt_number(s.q) << ',' << opt_int(s.k0) << ',' << s.n << ','
        << s.metric << ',' << s.linkage << ',' << csv_field(s.kspec) << ',' << s.n_reps << ',' << s.n_errors << ','
        << format_number(s.median_bic) << ',' << format_number(s.median_hd_truth) << ','
        << format_number(s.median_delta_bic_vs_full) << ',' << format_number(s.median_delta_hd_vs_full) << ','
        << format_number(s.median_delta_bic_vs_bhc) << ',' << format_number(s.median_delta_hd_vs_bhc) << ','
        << format_number(s.median_time_s) << ',' << s.undefined_hd_vs_full << ',' << s.undefined_hd_vs_bhc << '\n';
  }
}

std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> train_test_split(Eigen::Index n, double ratio,
                                                                                 RngStream& rng) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("split ratio must lie in (0, 1)");
  const auto n_train = static_cast<Eigen::Index>(std::llround(ratio * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) throw DataError("degenerate split: empty train or test set");
  std::vector<Eigen::Index> perm(n);
  for (Eigen::Index i = 0; i < n; ++i) perm[i] = i;
  for (Eigen::Index i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_int(static_cast<std::uint64_t>(i) + 1)]);
  return {{perm.begin(), perm.begin() + n_train}, {perm.begin() + n_train, perm.end()}};
}

std::vector<ClassificationRow> run_classification(const std::vector<NamedDataset>& datasets,
                                                  const std::string& class_name, int splits, double ratio,
                                                  const std::vector<LearnConfig>& configs, RngStream& rng) {
  if (splits < 1) throw DataError("need at least one split");
  std::vector<ClassificationRow> rows, medians;
  for (const auto& ds : datasets) {
    if (ds.data.column(class_name) < 0)
      throw DataError("class column '" + class_name + "' not in dataset '" + ds.name + "'");
    std::vector<std::vector<double>> acc(configs.size()), f1(configs.size());
    for (int s = 0; s < splits; ++s) {
      const auto [train_idx, test_idx] = train_test_split(ds.data.num_rows(), ratio, rng);
      const Dataset train = ds.data.select_rows(train_idx);
      const Dataset test = ds.data.select_rows(test_idx);
      for (std::size_t c = 0; c < configs.size(); ++c) {
        const auto& cfg = configs[c];
        const EvalScores scores = evaluate(train_classifier(train, class_name, cfg), test);
        acc[c].push_back(scores.accuracy);
        f1[c].push_back(scores.f1);
        rows.push_back({ds.name, std::to_string(s), cfg.metric.name(), linkage_name(cfg.linkage),
                        cfg.kspec.to_string(), scores.accuracy, scores.f1});
      }
    }
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const auto& cfg = configs[c];
      medians.push_back({ds.name, "median", cfg.metric.name(), linkage_name(cfg.linkage), cfg.kspec.to_string(),
                         median(acc[c]), median(f1[c])});
    }
  }
  rows.insert(rows.end(), medians.begin(), medians.end());
  return rows;
}

void write_classification_csv(std::ostream& out, const std::vector<ClassificationRow>& rows) {
  out << "dataset,split,metric,linkage,k,accuracy,f1\n";
  for (const auto& r : rows)
    out << csv_field(r.dataset) << ',' << r.split << ',' << r.metric << ',' << r.linkage << ',' << csv_field(r.k)
        << ',' << format_number(r.accuracy) << ',' << format_number(r.f1) << '\n';
}

}  // namespace sevt
