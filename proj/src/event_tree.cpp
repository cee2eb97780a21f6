#include "sevt/event_tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

#include "sevt/errors.hpp"

namespace sevt {

int VariableSpec::level_index(const std::string& level) const {
  auto it = std::find(levels.begin(), levels.end(), level);
  return it == levels.end() ? -1 : static_cast<int>(it - levels.begin());
}

EventTree::EventTree(std::vector<VariableSpec> variables) : variables_(std::move(variables)) {
  if (variables_.empty()) throw DataError("event tree needs at least one variable");
  std::set<std::string> names;
  for (const auto& v : variables_) {
    if (v.levels.size() < 2)
      throw DataError("variable '" + v.name + "' has fewer than 2 levels");
    if (!names.insert(v.name).second) throw DataError("duplicate variable name '" + v.name + "'");
    std::set<std::string> lv(v.levels.begin(), v.levels.end());
    if (lv.size() != v.levels.size())
      throw DataError("variable '" + v.name + "' has duplicate level labels");
  }
  situations_.resize(variables_.size());
  std::size_t count = 1;
  for (std::size_t d = 0; d < variables_.size(); ++d) {
    situations_[d] = count;
    count *= variables_[d].levels.size();
  }
  leaves_ = count;
}

std::size_t EventTree::total_situations() const {
  return std::accumulate(situations_.begin(), situations_.end(), std::size_t{0});
}

std::vector<int> EventTree::context(int depth, std::size_t index) const {
  if (depth < 0 || depth >= num_variables()) throw DataError("situation depth out of range");
  if (index >= situations_[depth]) throw DataError("situation index out of range");
  std::vector<int> ctx(depth);
  for (int j = depth - 1; j >= 0; --j) {
    const auto card = static_cast<std::size_t>(cardinality(j));
    ctx[j] = static_cast<int>(index % card);
    index /= card;
  }
  return ctx;
}

std::size_t EventTree::situation_index(std::span<const int> context) const {
  if (static_cast<int>(context.size()) >= num_variables())
    throw DataError("context longer than the deepest situation");
  std::size_t index = 0;
  for (std::size_t j = 0; j < context.size(); ++j) {
    if (context[j] < 0 || context[j] >= cardinality(static_cast<int>(j)))
      throw DataError("context level out of range");
    index = index * cardinality(static_cast<int>(j)) + context[j];
  }
  return index;
}

EventTree build_event_tree(std::vector<VariableSpec> specs) { return EventTree(std::move(specs)); }

std::vector<int> canonical_labels(std::span<const int> labels) {
  std::unordered_map<int, int> remap;
  std::vector<int> out(labels.size());
  for (std::size_t s = 0; s < labels.size(); ++s) {
    auto [it, inserted] = remap.try_emplace(labels[s], static_cast<int>(remap.size()));
    out[s] = it->second;
  }
  return out;
}

Staging::Staging(std::vector<std::vector<int>> labels) {
  if (labels.empty()) throw DataError("staging needs at least one depth");
  if (labels[0].size() != 1) throw DataError("depth 0 must hold exactly the root situation");
  labels_.reserve(labels.size());
  num_stages_.reserve(labels.size());
  for (auto& depth : labels) {
    if (depth.empty()) throw DataError("staging depth without situations");
    labels_.push_back(canonical_labels(depth));
    num_stages_.push_back(*std::max_element(labels_.back().begin(), labels_.back().end()) + 1);
  }
}

Staging Staging::saturated(const EventTree& tree) {
  std::vector<std::vector<int>> labels(tree.num_variables());
  for (int d = 0; d < tree.num_variables(); ++d) {
    labels[d].resize(tree.num_situations(d));
    std::iota(labels[d].begin(), labels[d].end(), 0);
  }
  return Staging(std::move(labels));
}

Staging Staging::single_stage(const EventTree& tree) {
  std::vector<std::vector<int>> labels(tree.num_variables());
  for (int d = 0; d < tree.num_variables(); ++d) labels[d].assign(tree.num_situations(d), 0);
  return Staging(std::move(labels));
}

Staging Staging::with_depth(int depth, std::vector<int> labels) const {
  if (labels.size() != labels_.at(depth).size()) throw DataError("stage label count mismatch");
  Staging out = *this;
  out.labels_[depth] = canonical_labels(labels);
  out.num_stages_[depth] =
      *std::max_element(out.labels_[depth].begin(), out.labels_[depth].end()) + 1;
  return out;
}

void Staging::check_compatible(const EventTree& tree) const {
  if (num_depths() != tree.num_variables()) throw DataError("staging depth count does not match tree");
  for (int d = 0; d < num_depths(); ++d)
    if (labels_[d].size() != tree.num_situations(d))
      throw DataError("staging size at depth " + std::to_string(d) + " does not match tree");
}

std::vector<std::vector<std::size_t>> stage_partition(const Staging& staging, int depth) {
  std::vector<std::vector<std::size_t>> blocks(staging.num_stages(depth));
  const auto& labels = staging.labels(depth);
  for (std::size_t s = 0; s < labels.size(); ++s) blocks[labels[s]].push_back(s);
  return blocks;
}

}  // namespace sevt
