// sevt: fit, simulate, compare, bench and classify staged event trees.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sevt/classify.hpp"
#include "sevt/errors.hpp"
#include "sevt/experiment.hpp"
#include "sevt/model_eval.hpp"
#include "sevt/model_io.hpp"
#include "sevt/sim_gen.hpp"
#include "sevt/stage_learning.hpp"

using namespace sevt;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

Dataset load_data(const std::string& path, const std::optional<std::vector<VariableSpec>>& schema) {
  auto in = open_in(path);
  return read_csv(in, schema);
}

FittedStagedTree load_model(const std::string& path, double* wall_time = nullptr) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid model JSON in '" + path + "': " + e.what());
  }
  if (wall_time && j.contains("wall_time_s")) *wall_time = j["wall_time_s"].get<double>();
  return model_from_json(j);
}

nlohmann::json nullable(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

struct FitArgs {
  std::string data, schema, method = "hclust", metric = "totalvariation", linkage = "ward.D2", k = "auto", out;
  double alpha = 1.0;
};

void run_fit(const FitArgs& a) {
  std::optional<std::vector<VariableSpec>> schema;
  if (!a.schema.empty()) {
    auto in = open_in(a.schema);
    schema = read_schema_json(in);
  }
  const Dataset data = load_data(a.data, schema);
  const EventTree tree(data.schema);
  const CountTable counts = count_transitions(data, tree);
  const Smoothing smoothing(a.alpha);

  std::optional<FittedStagedTree> model;
  const auto start = std::chrono::steady_clock::now();
  if (a.method == "hclust") {
    const LearnConfig cfg{MetricId::parse(a.metric), parse_linkage(a.linkage), KSpec::parse(a.k), smoothing};
    model = learn_hclust(counts, cfg);
  } else if (a.method == "bhc") {
    model = learn_bhc(counts, smoothing);
  } else {
    model = baseline_full(counts, smoothing);
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto j = model_to_json(*model, score_bic(*model, counts));
  j["method"] = a.method;
  if (a.method == "hclust") {
    j["metric"] = MetricId::parse(a.metric).name();
    j["linkage"] = linkage_name(parse_linkage(a.linkage));
    j["k"] = KSpec::parse(a.k).to_string();
  }
  j["wall_time_s"] = elapsed;
  auto out = open_out(a.out);
  out << j.dump(2) << '\n';
}

struct SimulateArgs {
  int p = 5, levels = 2, k0 = 2;
  std::string gen = "split", out_model, out_data;
  double q = 0.9;
  long long n = 0;
  std::uint64_t seed = 0;
};

void run_simulate(const SimulateArgs& a) {
  GenConfig cfg{a.p, a.levels, {}, a.seed};
  if (a.gen == "join") {
    if (!(a.q > 0.0 && a.q <= 1.0)) throw DataError("--q must lie in (0, 1]");
    cfg.method = JoinMethod{a.q};
  } else {
    cfg.method = SplitMethod{a.k0};
  }
  RngStream rng(a.seed);
  const auto model = generate_model(cfg, rng);
  const auto data = sample(model, a.n, rng);
  auto mout = open_out(a.out_model);
  auto j = model_to_json(model);
  j["generator"] = RngStream::kGenerator;
  j["seed"] = a.seed;
  mout << j.dump(2) << '\n';
  auto dout = open_out(a.out_data);
  write_csv(dout, data);
}

struct CompareArgs {
  std::vector<std::string> models;
  std::string truth, data, out;
};

void run_compare(const CompareArgs& a) {
  if (a.models.size() != 2) throw std::invalid_argument("compare needs exactly two --model files");
  std::array<double, 2> times{std::nan(""), std::nan("")};
  const auto m0 = load_model(a.models[0], &times[0]);
  const auto m1 = load_model(a.models[1], &times[1]);
  if (!(m0.tree() == m1.tree())) throw DataError("models are on different trees");
  const Dataset data = load_data(a.data, m0.tree().variables());
  const CountTable counts = count_transitions(data, m0.tree());
  const auto s0 = score_bic(m0, counts), s1 = score_bic(m1, counts);

  ComparisonReport report;
  report.hd = hamming_distance(m0.staging(), m1.staging());
  report.delta_bic = relative_bic(s0, s1);
  nlohmann::ordered_json j;
  j["hd"] = report.hd;
  j["delta_bic"] = report.delta_bic;
  j["bic"] = {s0.bic, s1.bic};
  if (!a.truth.empty()) {
    const auto truth = load_model(a.truth);
    if (!(truth.tree() == m0.tree())) throw DataError("truth model is on a different tree");
    report.delta_hd = relative_hd(m0.staging(), m1.staging(), truth.staging());
    j["delta_hd"] = nullable(report.delta_hd);
    j["hd_truth"] = {hamming_distance(m0.staging(), truth.staging()), hamming_distance(m1.staging(), truth.staging())};
  } else {
    j["delta_hd"] = nullptr;
  }
  j["wall_time_s"] = {nullable(std::isnan(times[0]) ? std::nullopt : std::optional(times[0])),
                      nullable(std::isnan(times[1]) ? std::nullopt : std::optional(times[1]))};
  if (a.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    auto out = open_out(a.out);
    out << j.dump(2) << '\n';
  }
}

struct BenchArgs {
  std::string grid, out, summary;
  int jobs = 0;
};

void run_bench(const BenchArgs& a) {
  auto in = open_in(a.grid);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid grid JSON: ") + e.what());
  }
  GridSpec spec = GridSpec::from_json(j);
  if (a.jobs > 0) spec.jobs = a.jobs;
  const auto result = run_grid(spec);
  auto out = open_out(a.out);
  write_results_csv(out, result.rows);
  auto sum = open_out(a.summary);
  write_summary_csv(sum, result.summary);
  int errors = 0;
  for (const auto& r : result.rows) errors += !r.error.empty();
  std::cerr << result.rows.size() << " rows, " << errors << " errors\n";
}

struct ClassifyArgs {
  std::vector<std::string> data, metrics{"totalvariation"}, linkages{"ward.D2"}, ks{"2"};
  std::string class_name, schema, out;
  int splits = 10;
  double ratio = 0.8, alpha = 1.0;
  std::uint64_t seed = 1;
};

void run_classify(const ClassifyArgs& a) {
  std::optional<std::vector<VariableSpec>> schema;
  if (!a.schema.empty()) {
    auto in = open_in(a.schema);
    schema = read_schema_json(in);
  }
  std::vector<NamedDataset> datasets;
  for (const auto& path : a.data)
    datasets.push_back({std::filesystem::path(path).stem().string(), load_data(path, schema)});
  std::vector<LearnConfig> configs;
  for (const auto& m : a.metrics)
    for (const auto& l : a.linkages)
      for (const auto& k : a.ks) configs.push_back({MetricId::parse(m), parse_linkage(l), KSpec::parse(k), Smoothing(a.alpha)});
  for (const auto& c : configs) c.validate();
  RngStream rng(a.seed);
  const auto rows = run_classification(datasets, a.class_name, a.splits, a.ratio, configs, rng);
  auto out = open_out(a.out);
  write_classification_csv(out, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staged event tree learning by hierarchical clustering"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Learn a staged tree from a CSV dataset");
  fit_cmd->add_option("--data", fit.data, "CSV with a header row")->required();
  fit_cmd->add_option("--schema", fit.schema, "JSON schema fixing variable levels");
  fit_cmd->add_option("--method", fit.method)->check(CLI::IsMember({"hclust", "bhc", "full"}))->capture_default_str();
  fit_cmd->add_option("--metric", fit.metric)->capture_default_str();
  fit_cmd->add_option("--linkage", fit.linkage)->capture_default_str();
  fit_cmd->add_option("--k", fit.k, "auto, an integer, or a per-depth list")->capture_default_str();
  fit_cmd->add_option("--alpha", fit.alpha, "additive smoothing")->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "output model JSON")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a random staged tree and sample from it");
  sim_cmd->add_option("--p", sim.p, "number of variables")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--levels", sim.levels)->capture_default_str();
  sim_cmd->add_option("--gen", sim.gen)->required()->check(CLI::IsMember({"join", "split"}));
  sim_cmd->add_option("--q", sim.q, "join probability")->capture_default_str();
  sim_cmd->add_option("--k0", sim.k0, "stages per depth for split")->capture_default_str();
  sim_cmd->add_option("--n", sim.n, "sample size")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed)->required();
  sim_cmd->add_option("--out-model", sim.out_model)->required();
  sim_cmd->add_option("--out-data", sim.out_data)->required();

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare a model against a baseline model");
  cmp_cmd->add_option("--model", cmp.models, "model, then baseline")->required()->expected(1)->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  cmp_cmd->add_option("--truth", cmp.truth, "true model for relative Hamming distance");
  cmp_cmd->add_option("--data", cmp.data, "CSV used for BIC")->required();
  cmp_cmd->add_option("--out", cmp.out, "write the report here instead of stdout");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a simulation grid");
  bench_cmd->add_option("--grid", bench.grid, "grid JSON")->required();
  bench_cmd->add_option("--out", bench.out, "raw results CSV")->required();
  bench_cmd->add_option("--summary", bench.summary, "median summary CSV")->required();
  bench_cmd->add_option("--jobs", bench.jobs, "worker threads (overrides the grid)")->check(CLI::NonNegativeNumber);

  ClassifyArgs cls;
  auto* cls_cmd = app.add_subcommand("classify", "Repeated train/test evaluation of the staged tree classifier");
  cls_cmd->add_option("--data", cls.data, "one or more CSV datasets")->required()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  cls_cmd->add_option("--schema", cls.schema);
  cls_cmd->add_option("--class", cls.class_name)->required();
  cls_cmd->add_option("--splits", cls.splits)->capture_default_str()->check(CLI::PositiveNumber);
  cls_cmd->add_option("--ratio", cls.ratio)->capture_default_str();
  cls_cmd->add_option("--metric", cls.metrics, "repeatable")->capture_default_str()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  cls_cmd->add_option("--linkage", cls.linkages, "repeatable")->capture_default_str()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  cls_cmd->add_option("--k", cls.ks, "repeatable")->capture_default_str()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  cls_cmd->add_option("--alpha", cls.alpha)->capture_default_str();
  cls_cmd->add_option("--seed", cls.seed)->capture_default_str();
  cls_cmd->add_option("--out", cls.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit_cmd) run_fit(fit);
    else if (*sim_cmd) run_simulate(sim);
    else if (*cmp_cmd) run_compare(cmp);
    else if (*bench_cmd) run_bench(bench);
    else if (*cls_cmd) run_classify(cls);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
