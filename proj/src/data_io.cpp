#include "sevt/data_io.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include "json.hpp"
#include <ostream>
#include <set>
#include <string>
#include <thread>

#include "sevt/errors.hpp"

namespace sevt {

namespace {

// Splits one CSV record. Handles quoted fields with "" escapes and embedded
// newlines. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool after_quote = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else if (c == '"' && field.empty() && !after_quote) {
      quoted = true;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw DataError("unterminated quoted field");
  fields.push_back(std::move(field));
  return true;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].empty();
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::vector<std::string>> read_csv_records(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  while (read_record(in, fields))
    if (!blank(fields)) records.push_back(fields);
  return records;
}

int Dataset::column(const std::string& name) const {
  for (int j = 0; j < num_variables(); ++j)
    if (schema[j].name == name) return j;
  return -1;
}

Dataset Dataset::select_rows(std::span<const Eigen::Index> indices) const {
  Dataset out{schema, LevelMatrix(static_cast<Eigen::Index>(indices.size()), rows.cols())};
  for (std::size_t r = 0; r < indices.size(); ++r) out.rows.row(r) = rows.row(indices[r]);
  return out;
}

Dataset Dataset::select_columns(std::span<const int> order) const {
  Dataset out;
  out.rows.resize(rows.rows(), static_cast<Eigen::Index>(order.size()));
  for (std::size_t j = 0; j < order.size(); ++j) {
    out.schema.push_back(schema.at(order[j]));
    out.rows.col(j) = rows.col(order[j]);
  }
  return out;
}

CountTable::CountTable(EventTree tree, std::vector<CountMatrix> depths)
    : tree_(std::move(tree)), depths_(std::move(depths)) {
  if (static_cast<int>(depths_.size()) != tree_.num_variables())
    throw DataError("count table depth count does not match tree");
  for (int d = 0; d < tree_.num_variables(); ++d) {
    if (depths_[d].rows() != static_cast<Eigen::Index>(tree_.num_situations(d)) ||
        depths_[d].cols() != tree_.cardinality(d))
      throw DataError("count table shape mismatch at depth " + std::to_string(d));
    if ((depths_[d].array() < 0).any()) throw DataError("negative count");
  }
  total_ = depths_[0].sum();
}

Dataset read_csv(std::istream& in, const std::optional<std::vector<VariableSpec>>& schema) {
  std::vector<std::string> header;
  if (!read_record(in, header) || blank(header)) throw DataError("empty CSV input");
  const std::size_t p = header.size();

  std::vector<std::vector<std::string>> raw;
  std::vector<std::string> fields;
  while (read_record(in, fields)) {
    if (blank(fields)) continue;
    if (fields.size() != p)
      throw DataError("ragged row " + std::to_string(raw.size() + 2) + ": expected " +
                      std::to_string(p) + " fields, got " + std::to_string(fields.size()));
    raw.push_back(fields);
  }
  if (raw.empty()) throw DataError("CSV has a header but no rows");

  Dataset data;
  if (schema) {
    if (schema->size() != p) throw DataError("schema and CSV header have different widths");
    for (const auto& name : header) {
      auto it = std::find_if(schema->begin(), schema->end(),
                             [&](const VariableSpec& v) { return v.name == name; });
      if (it == schema->end()) throw DataError("column '" + name + "' not in schema");
      data.schema.push_back(*it);
    }
  } else {
    for (std::size_t j = 0; j < p; ++j) {
      std::set<std::string> distinct;
      for (const auto& row : raw) distinct.insert(row[j]);
      if (distinct.size() < 2)
        throw DataError("column '" + header[j] + "' has a single distinct value; supply a schema");
      data.schema.push_back({header[j], {distinct.begin(), distinct.end()}});
    }
  }

  data.rows.resize(static_cast<Eigen::Index>(raw.size()), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    std::map<std::string, int> lookup;
    for (int l = 0; l < data.schema[j].cardinality(); ++l) lookup[data.schema[j].levels[l]] = l;
    for (std::size_t r = 0; r < raw.size(); ++r) {
      auto it = lookup.find(raw[r][j]);
      if (it == lookup.end())
        throw DataError("unknown level '" + raw[r][j] + "' in column '" + header[j] + "'");
      data.rows(r, j) = it->second;
    }
  }
  return data;
}

void write_csv(std::ostream& out, const Dataset& data) {
  for (int j = 0; j < data.num_variables(); ++j)
    out << (j ? "," : "") << csv_field(data.schema[j].name);
  out << '\n';
  for (Eigen::Index r = 0; r < data.num_rows(); ++r) {
    for (int j = 0; j < data.num_variables(); ++j)
      out << (j ? "," : "") << csv_field(data.schema[j].levels[data.rows(r, j)]);
    out << '\n';
  }
}

std::vector<VariableSpec> read_schema_json(std::istream& in) {
  try {
    auto j = nlohmann::json::parse(in);
    std::vector<VariableSpec> specs;
    for (const auto& v : j.at("variables"))
      specs.push_back({v.at("name").get<std::string>(), v.at("levels").get<std::vector<std::string>>()});
    return specs;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid schema JSON: ") + e.what());
  }
}

namespace {

void accumulate_rows(const LevelMatrix& rows, Eigen::Index begin, Eigen::Index end,
                     const EventTree& tree, std::vector<CountMatrix>& out) {
  const int p = tree.num_variables();
  for (Eigen::Index r = begin; r < end; ++r) {
    std::size_t situation = 0;
    for (int d = 0; d < p; ++d) {
      const int x = rows(r, d);
      out[d](static_cast<Eigen::Index>(situation), x) += 1;
      situation = situation * tree.cardinality(d) + x;
    }
  }
}

std::vector<CountMatrix> zero_counts(const EventTree& tree) {
  std::vector<CountMatrix> out;
  for (int d = 0; d < tree.num_variables(); ++d)
    out.push_back(CountMatrix::Zero(static_cast<Eigen::Index>(tree.num_situations(d)), tree.cardinality(d)));
  return out;
}

}  // namespace

CountTable count_transitions(const Dataset& data, const EventTree& tree, int jobs) {
  if (data.schema != tree.variables()) throw DataError("dataset schema does not match the event tree");
  const Eigen::Index n = data.num_rows();
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<Eigen::Index>(1, n / 4096))));
  std::vector<std::vector<CountMatrix>> partial(jobs, zero_counts(tree));
  {
    std::vector<std::jthread> workers;
    for (int w = 0; w < jobs; ++w) {
      const Eigen::Index begin = n * w / jobs, end = n * (w + 1) / jobs;
      if (w + 1 == jobs)
        accumulate_rows(data.rows, begin, end, tree, partial[w]);
      else
        workers.emplace_back([&, w, begin, end] { accumulate_rows(data.rows, begin, end, tree, partial[w]); });
    }
  }
  for (int w = 1; w < jobs; ++w)
    for (int d = 0; d < tree.num_variables(); ++d) partial[0][d] += partial[w][d];
  return CountTable(tree, std::move(partial[0]));
}

CountMatrix pool_depth(const CountMatrix& counts, std::span<const int> labels, int num_stages) {
  CountMatrix pooled = CountMatrix::Zero(num_stages, counts.cols());
  for (std::size_t s = 0; s < labels.size(); ++s)
    pooled.row(labels[s]) += counts.row(static_cast<Eigen::Index>(s));
  return pooled;
}

std::vector<CountMatrix> pool_counts(const CountTable& counts, const Staging& staging) {
  staging.check_compatible(counts.tree());
  std::vector<CountMatrix> pooled;
  for (int d = 0; d < counts.num_depths(); ++d)
    pooled.push_back(pool_depth(counts.depth(d), staging.labels(d), staging.num_stages(d)));
  return pooled;
}

}  // namespace sevt
