#pragma once

#include <iosfwd>
#include <optional>

#include "json.hpp"
#include "sevt/estimation.hpp"
#include "sevt/staged_tree.hpp"

namespace sevt {

/// {"variables":[{"name","levels"}], "staging":[[...]], "theta":[{"<label>":[...]}],
///  "n", "alpha"} plus an optional "score" block. Labels are canonical.
nlohmann::ordered_json model_to_json(const FittedStagedTree& model,
                                     const std::optional<ModelScore>& score = std::nullopt);
FittedStagedTree model_from_json(const nlohmann::json& j);

void write_model(std::ostream& out, const FittedStagedTree& model,
                 const std::optional<ModelScore>& score = std::nullopt);
FittedStagedTree read_model(std::istream& in);

}  // namespace sevt
