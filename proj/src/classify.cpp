#include "sevt/classify.hpp"

#include <cmath>

#include "sevt/errors.hpp"

namespace sevt {

ClassifierModel train_classifier(const Dataset& data, const std::string& class_name, const LearnConfig& config) {
  const int class_col = data.column(class_name);
  if (class_col < 0) throw DataError("class column '" + class_name + "' not in dataset");
  if (!(config.smoothing.alpha > 0.0)) throw DataError("classifier training needs smoothing alpha > 0");
  std::vector<int> order{class_col};
  for (int j = 0; j < data.num_variables(); ++j)
    if (j != class_col) order.push_back(j);
  const Dataset reordered = data.select_columns(order);
  const EventTree tree(reordered.schema);

  ClassifierModel out;
  out.class_variable = reordered.schema[0];
  for (std::size_t j = 1; j < reordered.schema.size(); ++j) out.features.push_back(reordered.schema[j].name);
  out.model = learn_hclust(count_transitions(reordered, tree), config);
  return out;
}

Prediction predict(const ClassifierModel& model, std::span<const int> features) {
  const auto& tree = model.model.tree();
  if (static_cast<int>(features.size()) + 1 != tree.num_variables())
    throw DataError("feature vector length does not match the classifier");
  for (std::size_t j = 0; j < features.size(); ++j)
    if (features[j] < 0 || features[j] >= tree.cardinality(static_cast<int>(j) + 1))
      throw DataError("unknown level for feature '" + model.features[j] + "'");

  const int classes = model.class_variable.cardinality();
  Outcome outcome(features.size() + 1);
  std::copy(features.begin(), features.end(), outcome.begin() + 1);
  Eigen::VectorXd logp(classes);
  for (int c = 0; c < classes; ++c) {
    outcome[0] = c;
    logp[c] = log_path_probability(model.model, outcome);
  }
  Prediction out;
  logp.maxCoeff(&out.label);  // first maximum
  const double top = logp[out.label];
  out.posterior = (logp.array() - top).exp().matrix();
  out.posterior /= out.posterior.sum();
  return out;
}

std::vector<int> model_columns(const ClassifierModel& model, const Dataset& data) {
  std::vector<int> cols;
  const auto& vars = model.model.tree().variables();
  for (const auto& v : vars) {
    const int j = data.column(v.name);
    if (j < 0) throw DataError("column '" + v.name + "' missing from dataset");
    if (data.schema[j].levels != v.levels) throw DataError("levels of column '" + v.name + "' differ from training");
    cols.push_back(j);
  }
  return cols;
}

EvalScores scores_from_confusion(const Eigen::MatrixXi& confusion) {
  EvalScores s;
  s.confusion = confusion;
  const double total = confusion.sum();
  if (total <= 0) throw DataError("empty confusion matrix");
  s.accuracy = confusion.trace() / total;
  double f1_sum = 0.0;
  for (Eigen::Index c = 0; c < confusion.rows(); ++c) {
    const double tp = confusion(c, c);
    const double fp = confusion.col(c).sum() - tp;
    const double fn = confusion.row(c).sum() - tp;
    f1_sum += tp > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
  }
  s.f1 = f1_sum / static_cast<double>(confusion.rows());
  return s;
}

EvalScores evaluate(const ClassifierModel& model, const Dataset& test) {
  if (test.num_rows() == 0) throw DataError("empty test set");
  const auto cols = model_columns(model, test);
  const int classes = model.class_variable.cardinality();
  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(classes, classes);
  std::vector<int> features(cols.size() - 1);
  for (Eigen::Index r = 0; r < test.num_rows(); ++r) {
    for (std::size_t j = 1; j < cols.size(); ++j) features[j - 1] = test.rows(r, cols[j]);
    confusion(test.rows(r, cols[0]), predict(model, features).label) += 1;
  }
  return scores_from_confusion(confusion);
}

}  // namespace sevt
