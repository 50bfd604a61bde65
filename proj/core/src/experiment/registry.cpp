#include "mgap/experiment/registry.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgap/net.hpp"
#include "mgap/random_fields.hpp"
#include "mgap/kriging.hpp"
#include "mgap/version.hpp"

namespace mgap {
namespace {

using nlohmann::ordered_json;

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string tail_error_model(const std::string& name) {
  if (name == "ar1_window" || name == "ar1_window_trunc")
    return "geometric: |rho|^window * sd(xi) / sqrt(1 - rho^2)";
  return "zero: the functional reads finitely many inputs";
}

std::string lipschitz_model(const std::string& name) {
  if (name == "ar1_window" || name == "ar1_window_trunc")
    return "filter l1 norm: 1 / (1 - |rho|)";
  if (name == "clipped_poly")
    return "max |a1 + 2 a2 x| where the polynomial meets the clip level";
  return "zero: no input dependence";
}

}  // namespace

std::string registry_json_text() {
  ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["toolkit_version"] = kVersion;

  ordered_json functionals = ordered_json::array();
  std::vector<const CausalFunctional*> by_name;
  for (const CausalFunctional& fn : functional_registry())
    by_name.push_back(&fn);
  std::sort(by_name.begin(), by_name.end(),
            [](const CausalFunctional* a, const CausalFunctional* b) {
              return a->name < b->name;
            });
  for (const CausalFunctional* fn : by_name) {
    ordered_json entry;
    entry["name"] = fn->name;
    entry["params"] = split_names(fn->param_names);
    entry["min_window"] = fn->min_window;
    entry["lambda_invariant"] = fn->lambda_invariant;
    entry["tail_error_model"] = tail_error_model(fn->name);
    entry["lipschitz_model"] = lipschitz_model(fn->name);
    functionals.push_back(entry);
  }
  j["functionals"] = functionals;

  ordered_json families = ordered_json::array();
  families.push_back({{"name", "centered_exponential"},
                      {"params", {"rate"}},
                      {"constraints", "rate > 0"}});
  families.push_back({{"name", "gaussian"},
                      {"params", {"sigma2"}},
                      {"constraints", "sigma2 > 0"}});
  families.push_back({{"name", "scaled_uniform"},
                      {"params", {"half_width"}},
                      {"constraints", "half_width > 0"}});
  families.push_back({{"name", "student_t"},
                      {"params", {"nu", "sigma2"}},
                      {"constraints", "nu > 4, sigma2 > 0"}});
  j["innovation_families"] = families;

  ordered_json nets = ordered_json::array();
  for (const auto& [name, net] : net_registry()) {
    const LipschitzBound bound = net_lipschitz(net);
    ordered_json entry;
    entry["name"] = name;
    entry["layers"] = net.layers.size();
    entry["input_dim"] = net.input_dim();
    entry["output_dim"] = net.output_dim();
    ordered_json acts = ordered_json::array();
    for (const NetLayer& layer : net.layers)
      acts.push_back(activation_name(layer.activation));
    entry["activations"] = acts;
    entry["input_lipschitz"] = bound.input_lipschitz;
    entry["parameter_lipschitz"] = bound.parameter_lipschitz;
    nets.push_back(entry);
  }
  j["nets"] = nets;

  std::vector<std::string> fns = true_function_names();
  std::sort(fns.begin(), fns.end());
  j["true_functions"] = fns;

  return j.dump(2) + "\n";
}

}  // namespace mgap
