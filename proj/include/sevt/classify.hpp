#pragma once

#include <span>
#include <string>
#include <vector>

#include "sevt/data_io.hpp"
#include "sevt/stage_learning.hpp"

namespace sevt {

/// Staged tree with the class variable at the root and the features, in
/// their training order, below it.
struct ClassifierModel {
  VariableSpec class_variable;
  std::vector<std::string> features;
  FittedStagedTree model;
};

struct Prediction {
  int label = 0;
  Eigen::VectorXd posterior;
};

struct EvalScores {
  double accuracy = 0.0;
  double f1 = 0.0;  // macro-averaged
  Eigen::MatrixXi confusion;  // rows: truth, columns: prediction
};

ClassifierModel train_classifier(const Dataset& data, const std::string& class_name, const LearnConfig& config);

/// `features` holds one level index per feature in model order. Ties in the
/// posterior go to the lowest class index.
Prediction predict(const ClassifierModel& model, std::span<const int> features);

/// Columns of `data` in model order: class first, then the features. Throws
/// when a column is missing or its levels differ from training.
std::vector<int> model_columns(const ClassifierModel& model, const Dataset& data);

EvalScores evaluate(const ClassifierModel& model, const Dataset& test);
/// Accuracy and macro-F1 of a confusion matrix. Classes with no true
/// positives score F1 = 0.
EvalScores scores_from_confusion(const Eigen::MatrixXi& confusion);

}  // namespace sevt
