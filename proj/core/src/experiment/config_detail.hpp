#pragma once

// Shared JSON-to-domain-object parsers for validated config blocks. Lives
// under src/ on purpose: nlohmann types never appear in installed headers.

#include <nlohmann/json.hpp>
#include <optional>
#include <vector>

#include "mgap/ar1.hpp"
#include "mgap/innovations.hpp"
#include "mgap/kriging.hpp"
#include "mgap/net.hpp"
#include "mgap/random_fields.hpp"

namespace mgap::detail {

InnovationSpec innovation_from_json(const nlohmann::json& j);
UncertaintyRule uncertainty_from_json(const nlohmann::json& j);
TruncationRule truncation_from_json(const nlohmann::json& j);
FunctionalRef functional_from_json(const nlohmann::json& j);
std::vector<std::vector<long>> n_grid_from_json(const nlohmann::json& j,
                                                int dim);
std::vector<long> multi_index_from_json(const nlohmann::json& j, int dim);
NetModel net_from_config_json(const nlohmann::json& j);
InputLaw input_law_from_json(const nlohmann::json& j);
TrueFunctionRef true_function_from_json(const nlohmann::json& j);

}  // namespace mgap::detail
