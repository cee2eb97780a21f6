#include "sevt/model_io.hpp"

#include <istream>
#include <map>
#include <ostream>

#include "sevt/errors.hpp"

namespace sevt {

nlohmann::ordered_json model_to_json(const FittedStagedTree& model, const std::optional<ModelScore>& score) {
  using json = nlohmann::ordered_json;
  const auto& tree = model.tree();
  json j;
  j["variables"] = json::array();
  for (const auto& v : tree.variables()) j["variables"].push_back({{"name", v.name}, {"levels", v.levels}});
  j["staging"] = json::array();
  j["theta"] = json::array();
  for (int d = 0; d < tree.num_variables(); ++d) {
    j["staging"].push_back(model.staging().labels(d));
    json stages = json::object();
    for (int k = 0; k < model.staging().num_stages(d); ++k) {
      const ProbVector& t = model.theta(d, k);
      stages[std::to_string(k)] = std::vector<double>(t.data(), t.data() + t.size());
    }
    j["theta"].push_back(std::move(stages));
  }
  j["n"] = model.n();
  j["alpha"] = model.alpha();
  if (score) j["score"] = {{"loglik", score->loglik}, {"n_params", score->n_params}, {"bic", score->bic}};
  return j;
}

FittedStagedTree model_from_json(const nlohmann::json& j) {
  try {
    std::vector<VariableSpec> vars;
    for (const auto& v : j.at("variables"))
      vars.push_back({v.at("name").get<std::string>(), v.at("levels").get<std::vector<std::string>>()});
    EventTree tree(std::move(vars));

    const auto raw = j.at("staging").get<std::vector<std::vector<int>>>();
    Staging staging(raw);
    const auto& theta_json = j.at("theta");
    if (theta_json.size() != raw.size()) throw DataError("theta and staging depth counts differ");

    std::vector<std::vector<ProbVector>> theta(raw.size());
    for (std::size_t d = 0; d < raw.size(); ++d) {
      theta[d].resize(staging.num_stages(static_cast<int>(d)));
      std::vector<char> seen(theta[d].size(), 0);
      for (std::size_t s = 0; s < raw[d].size(); ++s) {
        const int k = staging.stage_of(static_cast<int>(d), s);
        if (seen[k]) continue;
        seen[k] = 1;
        const auto key = std::to_string(raw[d][s]);
        if (!theta_json[d].contains(key))
          throw DataError("theta missing for stage '" + key + "' at depth " + std::to_string(d));
        const auto probs = theta_json[d].at(key).get<std::vector<double>>();
        theta[d][k] = Eigen::Map<const ProbVector>(probs.data(), static_cast<Eigen::Index>(probs.size()));
      }
    }
    return FittedStagedTree(std::move(tree), std::move(staging), std::move(theta),
                            j.value("n", 0LL), j.value("alpha", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid model JSON: ") + e.what());
  }
}

void write_model(std::ostream& out, const FittedStagedTree& model, const std::optional<ModelScore>& score) {
  out << model_to_json(model, score).dump(2) << '\n';
}

FittedStagedTree read_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid model JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace sevt
