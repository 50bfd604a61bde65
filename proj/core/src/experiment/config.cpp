#include "mgap/experiment/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "config_detail.hpp"
#include "mgap/errors.hpp"
#include "mgap/experiment/manifest.hpp"
#include "mgap/version.hpp"

namespace mgap {
namespace {

using nlohmann::json;
using Violations = std::vector<std::string>;

void fail(Violations& v, const std::string& path, const std::string& msg) {
  v.push_back(path + ": " + msg);
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

const json* field(const json& obj, const std::string& base, const char* name,
                  Violations& v, bool required) {
  const auto it = obj.find(name);
  if (it == obj.end()) {
    if (required) fail(v, base + "/" + name, "required field is missing");
    return nullptr;
  }
  return &*it;
}

void check_known_keys(const json& obj, const std::string& base,
                      std::initializer_list<const char*> allowed,
                      Violations& v) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end())
      fail(v, base + "/" + item.key(), "unknown field");
  }
}

std::optional<double> want_number(const json* j, const std::string& path,
                                  Violations& v) {
  if (!j) return std::nullopt;
  if (!j->is_number()) {
    fail(v, path, "must be a number");
    return std::nullopt;
  }
  return j->get<double>();
}

std::optional<long long> want_integer(const json* j, const std::string& path,
                                      Violations& v) {
  if (!j) return std::nullopt;
  if (!j->is_number_integer()) {
    fail(v, path, "must be an integer");
    return std::nullopt;
  }
  return j->get<long long>();
}

std::optional<std::string> want_string(const json* j, const std::string& path,
                                       Violations& v) {
  if (!j) return std::nullopt;
  if (!j->is_string()) {
    fail(v, path, "must be a string");
    return std::nullopt;
  }
  return j->get<std::string>();
}

const json* want_object(const json* j, const std::string& path,
                        Violations& v) {
  if (!j) return nullptr;
  if (!j->is_object()) {
    fail(v, path, "must be an object");
    return nullptr;
  }
  return j;
}

const json* want_array(const json* j, const std::string& path, Violations& v) {
  if (!j) return nullptr;
  if (!j->is_array()) {
    fail(v, path, "must be an array");
    return nullptr;
  }
  return j;
}

// Integer grid, optionally strictly increasing, each entry >= min_value.
std::optional<std::vector<long>> check_int_grid(const json& parent,
                                                const std::string& base,
                                                const char* name,
                                                Violations& v, bool required,
                                                long min_value,
                                                bool strictly_increasing) {
  const json* arr =
      want_array(field(parent, base, name, v, required), base + "/" + name, v);
  if (!arr) return std::nullopt;
  const std::string path = base + "/" + name;
  if (arr->empty()) {
    fail(v, path, "must not be empty");
    return std::nullopt;
  }
  std::vector<long> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const json& e = (*arr)[i];
    if (!e.is_number_integer()) {
      fail(v, path + "/" + std::to_string(i), "must be an integer");
      return std::nullopt;
    }
    out.push_back(e.get<long>());
    if (out.back() < min_value) {
      fail(v, path + "/" + std::to_string(i),
           "must be >= " + std::to_string(min_value));
      return std::nullopt;
    }
  }
  if (strictly_increasing &&
      !std::is_sorted(out.begin(), out.end(), std::less_equal<>()))
    fail(v, path, "must be strictly increasing");
  return out;
}

std::optional<std::vector<double>> check_number_array(
    const json& parent, const std::string& base, const char* name,
    Violations& v, bool required, const char* entry_rule,
    bool (*admits)(double), bool strictly_increasing = false) {
  const json* arr =
      want_array(field(parent, base, name, v, required), base + "/" + name, v);
  if (!arr) return std::nullopt;
  const std::string path = base + "/" + name;
  if (arr->empty()) {
    fail(v, path, "must not be empty");
    return std::nullopt;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const json& e = (*arr)[i];
    if (!e.is_number()) {
      fail(v, path + "/" + std::to_string(i), "must be a number");
      return std::nullopt;
    }
    out.push_back(e.get<double>());
    if (admits && !admits(out.back())) {
      fail(v, path + "/" + std::to_string(i), entry_rule);
      return std::nullopt;
    }
  }
  if (strictly_increasing &&
      !std::is_sorted(out.begin(), out.end(), std::less_equal<>()))
    fail(v, path, "must be strictly increasing");
  return out;
}

bool positive(double x) { return x > 0.0; }
bool non_negative(double x) { return x >= 0.0; }
bool in_unit_interval(double x) { return x > 0.0 && x <= 1.0; }
bool at_least_one(double x) { return x >= 1.0; }

std::optional<long long> check_replications(const json& p,
                                            const std::string& base,
                                            Violations& v,
                                            long long min_value = 2) {
  const std::string path = base + "/replications";
  const auto m = want_integer(field(p, base, "replications", v, true), path, v);
  if (m && *m < min_value)
    fail(v, path, "must be >= " + std::to_string(min_value));
  return m;
}

void check_innovation(const json* j, const std::string& path, Violations& v) {
  const json* obj = want_object(j, path, v);
  if (!obj) return;
  check_known_keys(*obj, path,
                   {"family", "sigma2", "nu", "rate", "half_width"}, v);
  const auto family =
      want_string(field(*obj, path, "family", v, true), path + "/family", v);
  if (!family) return;
  static const std::set<std::string> kFamilies = {
      "gaussian", "student_t", "centered_exponential", "scaled_uniform"};
  if (!kFamilies.count(*family)) {
    fail(v, path + "/family", "unknown innovation family '" + *family + "'");
    return;
  }
  const auto sigma2 =
      want_number(field(*obj, path, "sigma2", v, false), path + "/sigma2", v);
  if (sigma2 && !(*sigma2 > 0.0)) fail(v, path + "/sigma2", "must be > 0");
  const auto nu =
      want_number(field(*obj, path, "nu", v, false), path + "/nu", v);
  if (nu && !(*nu > 4.0)) fail(v, path + "/nu", "nu must be > 4");
  const auto rate =
      want_number(field(*obj, path, "rate", v, false), path + "/rate", v);
  if (rate && !(*rate > 0.0)) fail(v, path + "/rate", "must be > 0");
  const auto hw = want_number(field(*obj, path, "half_width", v, false),
                              path + "/half_width", v);
  if (hw && !(*hw > 0.0)) fail(v, path + "/half_width", "must be > 0");
}

void check_uncertainty(const json* j, const std::string& path, Violations& v,
                       long max_n) {
  const json* obj = want_object(j, path, v);
  if (!obj) return;
  check_known_keys(*obj, path, {"rule", "values"}, v);
  const auto rule =
      want_string(field(*obj, path, "rule", v, true), path + "/rule", v);
  if (!rule) return;
  if (*rule == "zero" || *rule == "inverse_index") return;
  if (*rule != "custom") {
    fail(v, path + "/rule", "unknown uncertainty rule '" + *rule + "'");
    return;
  }
  const auto values = check_number_array(*obj, path, "values", v, true,
                                         "must be a number", nullptr);
  if (values && max_n > 0 &&
      values->size() < static_cast<std::size_t>(max_n))
    fail(v, path + "/values",
         "must have at least max(n_grid) = " + std::to_string(max_n) +
             " entries");
}

void check_truncation(const json* j, const std::string& path, Violations& v) {
  const json* obj = want_object(j, path, v);
  if (!obj) return;
  check_known_keys(*obj, path, {"rule", "c", "q"}, v);
  const auto rule =
      want_string(field(*obj, path, "rule", v, true), path + "/rule", v);
  if (!rule) return;
  if (*rule == "ceil_log2_times") {
    const auto c = want_number(field(*obj, path, "c", v, false), path + "/c", v);
    if (c && !(*c > 0.0)) fail(v, path + "/c", "must be > 0");
  } else if (*rule == "fixed") {
    const auto q = want_integer(field(*obj, path, "q", v, true), path + "/q", v);
    if (q && *q < 0) fail(v, path + "/q", "must be >= 0");
  } else {
    fail(v, path + "/rule", "unknown truncation rule '" + *rule + "'");
  }
}

void check_functional_ref(const json* j, const std::string& path,
                          Violations& v) {
  const json* obj = want_object(j, path, v);
  if (!obj) return;
  check_known_keys(*obj, path, {"name", "params"}, v);
  const auto name =
      want_string(field(*obj, path, "name", v, true), path + "/name", v);
  if (!name) return;
  const CausalFunctional* fn = nullptr;
  for (const CausalFunctional& entry : functional_registry())
    if (entry.name == *name) fn = &entry;
  if (!fn) {
    fail(v, path + "/name", "unknown functional '" + *name + "'");
    return;
  }
  const std::vector<std::string> declared = split_names(fn->param_names);
  const json* params = want_object(
      field(*obj, path, "params", v, !declared.empty()), path + "/params", v);
  if (!params) {
    if (declared.empty()) return;
    return;
  }
  for (const auto& item : params->items()) {
    if (std::find(declared.begin(), declared.end(), item.key()) ==
        declared.end())
      fail(v, path + "/params/" + item.key(),
           "functional '" + *name + "' has no such parameter");
    else if (!item.value().is_number())
      fail(v, path + "/params/" + item.key(), "must be a number");
  }
  for (const std::string& p : declared)
    if (!params->contains(p))
      fail(v, path + "/params/" + p, "required field is missing");
}

void check_input_law(const json* j, const std::string& path, Violations& v) {
  const json* obj = want_object(j, path, v);
  if (!obj) return;
  check_known_keys(*obj, path, {"type", "sigma2"}, v);
  const auto type =
      want_string(field(*obj, path, "type", v, true), path + "/type", v);
  if (!type) return;
  if (*type != "uniform_box" && *type != "truncated_gaussian") {
    fail(v, path + "/type", "unknown input law '" + *type + "'");
    return;
  }
  const auto sigma2 =
      want_number(field(*obj, path, "sigma2", v, false), path + "/sigma2", v);
  if (sigma2 && !(*sigma2 > 0.0)) fail(v, path + "/sigma2", "must be > 0");
}

// Net reference: a registry name or an inline model document.
const NetModel* check_net_ref(const json* j, const std::string& path,
                              Violations& v, NetModel& storage) {
  const json* obj = want_object(j, path, v);
  if (!obj) return nullptr;
  check_known_keys(*obj, path, {"registry", "model"}, v);
  const bool has_registry = obj->contains("registry");
  const bool has_model = obj->contains("model");
  if (has_registry == has_model) {
    fail(v, path, "needs exactly one of 'registry' or 'model'");
    return nullptr;
  }
  try {
    storage = detail::net_from_config_json(*obj);
    storage.validate();
    return &storage;
  } catch (const config_error& e) {
    fail(v, path, e.what());
    return nullptr;
  }
}

void check_sample_dist(const json* j, const std::string& path, Violations& v) {
  const json* obj = want_object(j, path, v);
  if (!obj) return;
  const auto type =
      want_string(field(*obj, path, "type", v, true), path + "/type", v);
  if (!type) return;
  if (*type == "exponential") {
    check_known_keys(*obj, path, {"type", "rate"}, v);
    const auto rate =
        want_number(field(*obj, path, "rate", v, false), path + "/rate", v);
    if (rate && !(*rate > 0.0)) fail(v, path + "/rate", "must be > 0");
  } else if (*type == "uniform") {
    check_known_keys(*obj, path, {"type", "lo", "hi"}, v);
    const auto lo =
        want_number(field(*obj, path, "lo", v, true), path + "/lo", v);
    const auto hi =
        want_number(field(*obj, path, "hi", v, true), path + "/hi", v);
    if (lo && !(*lo >= 0.0))
      fail(v, path + "/lo",
           "must be >= 0 (increasing-convex comparisons need nonnegative "
           "samples)");
    if (lo && hi && !(*lo < *hi)) fail(v, path + "/hi", "must exceed lo");
  } else if (*type == "abs_innovation") {
    check_known_keys(*obj, path, {"type", "innovation"}, v);
    check_innovation(field(*obj, path, "innovation", v, true),
                     path + "/innovation", v);
  } else {
    fail(v, path + "/type", "unknown sample distribution '" + *type + "'");
  }
}

void check_true_function(const json* j, const std::string& path,
                         Violations& v) {
  const json* obj = want_object(j, path, v);
  if (!obj) return;
  check_known_keys(*obj, path, {"name", "coefficients"}, v);
  const auto name =
      want_string(field(*obj, path, "name", v, true), path + "/name", v);
  if (!name) return;
  const auto& known = true_function_names();
  if (std::find(known.begin(), known.end(), *name) == known.end()) {
    fail(v, path + "/name", "unknown true function '" + *name + "'");
    return;
  }
  const auto coeffs =
      check_number_array(*obj, path, "coefficients", v,
                         *name != "sin2pi",  // required except for sin2pi
                         "must be a number", nullptr);
  if (*name == "poly1d" && coeffs && coeffs->empty())
    fail(v, path + "/coefficients", "must not be empty");
  if (*name == "linear" && coeffs && coeffs->size() != 2)
    fail(v, path + "/coefficients",
         "linear on one input needs exactly [c0, c1]");
}

// field_dim plus a multi-index grid; shared by the two field experiments.
std::optional<int> check_field_dim(const json& p, const std::string& base,
                                   Violations& v) {
  const auto dim =
      want_integer(field(p, base, "field_dim", v, true), base + "/field_dim", v);
  if (!dim) return std::nullopt;
  if (*dim != 1 && *dim != 2) {
    fail(v, base + "/field_dim", "must be 1 or 2");
    return std::nullopt;
  }
  return static_cast<int>(*dim);
}

bool check_multi_index(const json& e, const std::string& path, int dim,
                       Violations& v) {
  if (e.is_number_integer()) {
    if (dim != 1) {
      fail(v, path, "must list one entry per dimension");
      return false;
    }
    if (e.get<long>() < 1) {
      fail(v, path, "components must be >= 1");
      return false;
    }
    return true;
  }
  if (!e.is_array() || e.size() != static_cast<std::size_t>(dim)) {
    fail(v, path, "must be an integer or an array of field_dim integers");
    return false;
  }
  for (const json& c : e) {
    if (!c.is_number_integer() || c.get<long>() < 1) {
      fail(v, path, "components must be integers >= 1");
      return false;
    }
  }
  return true;
}

// Common structural block of field_gap / stationarity_check; the semantic
// cross-checks run through FieldSpec::validate afterwards.
void check_field_common(const json& p, const std::string& base, Violations& v,
                        std::optional<int>& dim_out) {
  check_int_grid(p, base, "lambda_grid", v, true,
                 std::numeric_limits<long>::min(), true);
  dim_out = check_field_dim(p, base, v);
  check_functional_ref(field(p, base, "psi", v, true), base + "/psi", v);
  check_functional_ref(field(p, base, "phi", v, true), base + "/phi", v);
  check_innovation(field(p, base, "xi", v, true), base + "/xi", v);
  const auto window =
      want_integer(field(p, base, "window", v, false), base + "/window", v);
  if (window && *window < 1) fail(v, base + "/window", "must be >= 1");
  const auto tol = want_number(field(p, base, "tail_tolerance", v, false),
                               base + "/tail_tolerance", v);
  if (tol && !(*tol > 0.0)) fail(v, base + "/tail_tolerance", "must be > 0");
}

void semantic_field_spec(const json& p, const std::string& base, Violations& v,
                         const std::vector<std::vector<long>>& n_grid) {
  try {
    FieldSpec spec;
    spec.lambda_grid = p.at("lambda_grid").get<std::vector<long>>();
    spec.field_dim = p.at("field_dim").get<int>();
    spec.n_grid = n_grid;
    spec.psi = detail::functional_from_json(p.at("psi"));
    spec.phi = detail::functional_from_json(p.at("phi"));
    spec.window = p.value("window", 64);
    spec.xi_spec = detail::innovation_from_json(p.at("xi"));
    spec.tail_tolerance = p.value("tail_tolerance", 1e-8);
    spec.validate();
  } catch (const config_error& e) {
    fail(v, base, e.what());
  }
}

void check_ar1_gap(const json& p, const std::string& base, Violations& v) {
  check_known_keys(p, base,
                   {"n_grid", "replications", "r_values", "rho", "mu",
                    "innovation", "uncertainty", "truncation",
                    "series_tolerance", "max_path_length"},
                   v);
  const auto n_grid = check_int_grid(p, base, "n_grid", v, true, 1, true);
  check_replications(p, base, v);
  check_number_array(p, base, "r_values", v, true, "must be > 0", positive);
  const auto rho =
      want_number(field(p, base, "rho", v, true), base + "/rho", v);
  if (rho && !(std::abs(*rho) < 1.0))
    fail(v, base + "/rho", "rho must lie in (-1,1)");
  want_number(field(p, base, "mu", v, false), base + "/mu", v);
  check_innovation(field(p, base, "innovation", v, true), base + "/innovation",
                   v);
  if (const json* u = field(p, base, "uncertainty", v, false))
    check_uncertainty(u, base + "/uncertainty", v,
                      n_grid ? n_grid->back() : 0);
  if (const json* t = field(p, base, "truncation", v, false))
    check_truncation(t, base + "/truncation", v);
  const auto tol = want_number(field(p, base, "series_tolerance", v, false),
                               base + "/series_tolerance", v);
  if (tol && !(*tol > 0.0)) fail(v, base + "/series_tolerance", "must be > 0");
  const auto mp = want_integer(field(p, base, "max_path_length", v, false),
                               base + "/max_path_length", v);
  if (mp && *mp < 1) fail(v, base + "/max_path_length", "must be >= 1");
}

void check_ui_diagnostic(const json& p, const std::string& base,
                         Violations& v) {
  check_known_keys(
      p, base,
      {"source", "n_grid", "replications", "r", "a_grid", "delta", "cap"}, v);
  const std::string spath = base + "/source";
  if (const json* src = want_object(field(p, base, "source", v, true), spath, v)) {
    check_known_keys(*src, spath, {"type", "innovation"}, v);
    const auto type =
        want_string(field(*src, spath, "type", v, true), spath + "/type", v);
    if (type) {
      if (*type == "iid")
        check_innovation(field(*src, spath, "innovation", v, true),
                         spath + "/innovation", v);
      else if (*type != "spike")
        fail(v, spath + "/type", "unknown source type '" + *type + "'");
    }
  }
  check_int_grid(p, base, "n_grid", v, true, 1, true);
  check_replications(p, base, v);
  const auto r = want_number(field(p, base, "r", v, false), base + "/r", v);
  if (r && !(*r > 0.0)) fail(v, base + "/r", "must be > 0");
  check_number_array(p, base, "a_grid", v, false, "must be >= 0", non_negative,
                     true);
  const auto delta =
      want_number(field(p, base, "delta", v, true), base + "/delta", v);
  if (delta && !(*delta > 0.0)) fail(v, base + "/delta", "must be > 0");
  const auto cap =
      want_number(field(p, base, "cap", v, true), base + "/cap", v);
  if (cap && !(*cap > 0.0)) fail(v, base + "/cap", "must be > 0");
}

void check_ic_compare(const json& p, const std::string& base, Violations& v) {
  check_known_keys(p, base, {"sample1", "sample2", "size", "t_grid"}, v);
  check_sample_dist(field(p, base, "sample1", v, true), base + "/sample1", v);
  check_sample_dist(field(p, base, "sample2", v, true), base + "/sample2", v);
  const auto size =
      want_integer(field(p, base, "size", v, true), base + "/size", v);
  if (size && *size < 2) fail(v, base + "/size", "must be >= 2");
  check_number_array(p, base, "t_grid", v, false, "must be >= 0", non_negative,
                     true);
}

void check_field_gap(const json& p, const std::string& base, Violations& v) {
  check_known_keys(p, base,
                   {"lambda_grid", "field_dim", "n_grid", "psi", "phi",
                    "window", "xi", "tail_tolerance", "replications",
                    "r_values"},
                   v);
  std::optional<int> dim;
  check_field_common(p, base, v, dim);
  check_replications(p, base, v);
  check_number_array(p, base, "r_values", v, true, "must be > 0", positive);
  std::vector<std::vector<long>> n_grid;
  bool grid_ok = dim.has_value();
  const std::string npath = base + "/n_grid";
  if (const json* arr =
          want_array(field(p, base, "n_grid", v, true), npath, v)) {
    if (arr->empty()) {
      fail(v, npath, "must not be empty");
      grid_ok = false;
    } else if (dim) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        if (!check_multi_index((*arr)[i], npath + "/" + std::to_string(i),
                               *dim, v)) {
          grid_ok = false;
          continue;
        }
        n_grid.push_back(detail::multi_index_from_json((*arr)[i], *dim));
      }
    }
  } else {
    grid_ok = false;
  }
  if (grid_ok && v.empty()) semantic_field_spec(p, base, v, n_grid);
}

void check_stationarity(const json& p, const std::string& base,
                        Violations& v) {
  check_known_keys(p, base,
                   {"lambda_grid", "field_dim", "n", "psi", "phi", "window",
                    "xi", "tail_tolerance", "replications", "pairs", "alpha"},
                   v);
  std::optional<int> dim;
  check_field_common(p, base, v, dim);
  check_replications(p, base, v);
  bool n_ok = false;
  if (const json* n = field(p, base, "n", v, true)) {
    if (dim) n_ok = check_multi_index(*n, base + "/n", *dim, v);
  }
  const std::string ppath = base + "/pairs";
  if (const json* pairs = field(p, base, "pairs", v, true)) {
    if (pairs->is_string()) {
      if (pairs->get<std::string>() != "all")
        fail(v, ppath, "must be \"all\" or an array of [lambda, lambda'] pairs");
    } else if (pairs->is_array()) {
      for (std::size_t i = 0; i < pairs->size(); ++i) {
        const json& e = (*pairs)[i];
        const bool shaped = e.is_array() && e.size() == 2 &&
                            e[0].is_number_integer() &&
                            e[1].is_number_integer();
        if (!shaped)
          fail(v, ppath + "/" + std::to_string(i),
               "must be a [lambda, lambda'] integer pair");
      }
    } else {
      fail(v, ppath, "must be \"all\" or an array of [lambda, lambda'] pairs");
    }
  }
  const auto alpha =
      want_number(field(p, base, "alpha", v, false), base + "/alpha", v);
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0))
    fail(v, base + "/alpha", "must lie in (0,1)");
  if (n_ok && dim && v.empty())
    semantic_field_spec(p, base, v,
                        {detail::multi_index_from_json(p.at("n"), *dim)});
}

void check_net_theorem_c(const json& p, const std::string& base,
                         Violations& v) {
  check_known_keys(
      p, base, {"net", "perturbation", "n_grid", "input_law", "replications"},
      v);
  NetModel storage;
  const NetModel* net =
      check_net_ref(field(p, base, "net", v, true), base + "/net", v, storage);
  const std::string ppath = base + "/perturbation";
  if (const json* pert =
          want_object(field(p, base, "perturbation", v, true), ppath, v)) {
    check_known_keys(*pert, ppath, {"direction", "normalized", "magnitude"},
                     v);
    if (const json* dir = field(*pert, ppath, "direction", v, true)) {
      if (dir->is_string()) {
        if (dir->get<std::string>() != "ones")
          fail(v, ppath + "/direction",
               "must be \"ones\" or an array of numbers");
      } else if (dir->is_array()) {
        bool numbers = true;
        for (const json& e : *dir) numbers = numbers && e.is_number();
        if (!numbers || dir->empty())
          fail(v, ppath + "/direction", "must be a nonempty number array");
        else if (net &&
                 dir->size() != static_cast<std::size_t>(net->zeta_dim()))
          fail(v, ppath + "/direction",
               "length must equal the last-layer weight count (" +
                   std::to_string(net->zeta_dim()) + ")");
      } else {
        fail(v, ppath + "/direction",
             "must be \"ones\" or an array of numbers");
      }
    }
    if (const json* norm = field(*pert, ppath, "normalized", v, false))
      if (!norm->is_boolean())
        fail(v, ppath + "/normalized", "must be a boolean");
    const auto mag = want_number(field(*pert, ppath, "magnitude", v, false),
                                 ppath + "/magnitude", v);
    if (mag && !(*mag > 0.0)) fail(v, ppath + "/magnitude", "must be > 0");
  }
  check_int_grid(p, base, "n_grid", v, true, 1, true);
  check_input_law(field(p, base, "input_law", v, true), base + "/input_law", v);
  check_replications(p, base, v, 1);
}

void check_net_moment_bound(const json& p, const std::string& base,
                            Violations& v) {
  check_known_keys(p, base,
                   {"net", "input_law", "delta", "x0", "replications"}, v);
  NetModel storage;
  const NetModel* net =
      check_net_ref(field(p, base, "net", v, true), base + "/net", v, storage);
  check_input_law(field(p, base, "input_law", v, true), base + "/input_law", v);
  const auto delta =
      want_number(field(p, base, "delta", v, true), base + "/delta", v);
  if (delta && !(*delta > 0.0)) fail(v, base + "/delta", "must be > 0");
  if (const json* x0 = field(p, base, "x0", v, false)) {
    if (x0->is_string()) {
      if (x0->get<std::string>() != "origin")
        fail(v, base + "/x0", "must be \"origin\", an array, or null");
    } else if (x0->is_array()) {
      bool numbers = true;
      for (const json& e : *x0) numbers = numbers && e.is_number();
      if (!numbers)
        fail(v, base + "/x0", "must be a number array");
      else if (net && x0->size() !=
                          static_cast<std::size_t>(net->input_dim()))
        fail(v, base + "/x0",
             "length must equal the input dimension (" +
                 std::to_string(net->input_dim()) + ")");
    } else if (!x0->is_null()) {
      fail(v, base + "/x0", "must be \"origin\", an array, or null");
    }
  }
  check_replications(p, base, v);
}

void check_kriging_gap(const json& p, const std::string& base, Violations& v) {
  check_known_keys(p, base,
                   {"true_function", "domain", "design_sizes", "lengthscale",
                    "basis_degree", "nugget", "test_points", "replications",
                    "r_values"},
                   v);
  check_true_function(field(p, base, "true_function", v, true),
                      base + "/true_function", v);
  const std::string dpath = base + "/domain";
  if (const json* dom = want_object(field(p, base, "domain", v, true), dpath, v)) {
    check_known_keys(*dom, dpath, {"lo", "hi"}, v);
    const auto lo =
        want_number(field(*dom, dpath, "lo", v, true), dpath + "/lo", v);
    const auto hi =
        want_number(field(*dom, dpath, "hi", v, true), dpath + "/hi", v);
    if (lo && hi && !(*lo < *hi)) fail(v, dpath + "/hi", "must exceed lo");
  }
  const auto sizes =
      check_int_grid(p, base, "design_sizes", v, true, 1, true);
  const auto ell = want_number(field(p, base, "lengthscale", v, true),
                               base + "/lengthscale", v);
  if (ell && !(*ell > 0.0)) fail(v, base + "/lengthscale", "must be > 0");
  const auto degree = want_integer(field(p, base, "basis_degree", v, false),
                                   base + "/basis_degree", v);
  if (degree && *degree < 0) fail(v, base + "/basis_degree", "must be >= 0");
  if (degree && sizes && sizes->front() < *degree + 1)
    fail(v, base + "/design_sizes",
         "smallest design needs at least basis_degree + 1 points");
  const auto nugget =
      want_number(field(p, base, "nugget", v, false), base + "/nugget", v);
  if (nugget && !(*nugget > 0.0)) fail(v, base + "/nugget", "must be > 0");
  const std::string tpath = base + "/test_points";
  if (const json* tp =
          want_object(field(p, base, "test_points", v, true), tpath, v)) {
    const auto type =
        want_string(field(*tp, tpath, "type", v, true), tpath + "/type", v);
    if (type && *type == "grid") {
      check_known_keys(*tp, tpath, {"type", "count"}, v);
      const auto count =
          want_integer(field(*tp, tpath, "count", v, true), tpath + "/count", v);
      if (count && *count < 1) fail(v, tpath + "/count", "must be >= 1");
    } else if (type && *type == "list") {
      check_known_keys(*tp, tpath, {"type", "points"}, v);
      check_number_array(*tp, tpath, "points", v, true, "must be a number",
                         nullptr);
    } else if (type) {
      fail(v, tpath + "/type", "must be \"grid\" or \"list\"");
    }
  }
  check_replications(p, base, v);
  check_number_array(p, base, "r_values", v, true, "must be > 0", positive);
}

void check_inequality_suite(const json& p, const std::string& base,
                            Violations& v) {
  check_known_keys(p, base,
                   {"pairs", "families", "spike_n", "r_pointwise", "r_cr",
                    "r_minkowski"},
                   v);
  const auto pairs =
      want_integer(field(p, base, "pairs", v, false), base + "/pairs", v);
  if (pairs && *pairs < 1) fail(v, base + "/pairs", "must be >= 1");
  if (const json* fams = want_array(field(p, base, "families", v, false),
                                    base + "/families", v)) {
    static const std::set<std::string> kAllowed = {
        "gaussian", "student_t", "centered_exponential", "scaled_uniform",
        "spike"};
    std::set<std::string> seen;
    for (std::size_t i = 0; i < fams->size(); ++i) {
      const std::string path = base + "/families/" + std::to_string(i);
      const json& e = (*fams)[i];
      if (!e.is_string()) {
        fail(v, path, "must be a string");
        continue;
      }
      const std::string name = e.get<std::string>();
      if (!kAllowed.count(name))
        fail(v, path, "unknown family '" + name + "'");
      else if (!seen.insert(name).second)
        fail(v, path, "duplicate family '" + name + "'");
    }
    if (fams->empty()) fail(v, base + "/families", "must not be empty");
  }
  const auto spike_n =
      want_integer(field(p, base, "spike_n", v, false), base + "/spike_n", v);
  if (spike_n && *spike_n < 2) fail(v, base + "/spike_n", "must be >= 2");
  check_number_array(p, base, "r_pointwise", v, false, "must lie in (0,1]",
                     in_unit_interval);
  check_number_array(p, base, "r_cr", v, false, "must be > 0", positive);
  check_number_array(p, base, "r_minkowski", v, false, "must be >= 1",
                     at_least_one);
}

void check_params(const std::string& kind, const json& p, Violations& v) {
  const std::string base = "/params";
  if (kind == "ar1_gap") return check_ar1_gap(p, base, v);
  if (kind == "ui_diagnostic") return check_ui_diagnostic(p, base, v);
  if (kind == "ic_compare") return check_ic_compare(p, base, v);
  if (kind == "field_gap") return check_field_gap(p, base, v);
  if (kind == "stationarity_check") return check_stationarity(p, base, v);
  if (kind == "net_theorem_c") return check_net_theorem_c(p, base, v);
  if (kind == "net_moment_bound") return check_net_moment_bound(p, base, v);
  if (kind == "kriging_gap") return check_kriging_gap(p, base, v);
  if (kind == "inequality_suite") return check_inequality_suite(p, base, v);
}

Violations validate_document(const json& doc) {
  Violations v;
  if (!doc.is_object()) {
    fail(v, "/", "document must be a JSON object");
    return v;
  }
  check_known_keys(doc, "",
                   {"schema_version", "kind", "master_seed", "workers",
                    "output_dir", "plots", "params"},
                   v);
  const auto schema = want_integer(
      field(doc, "", "schema_version", v, true), "/schema_version", v);
  if (schema && *schema != kConfigSchemaVersion)
    fail(v, "/schema_version",
         "must be " + std::to_string(kConfigSchemaVersion));
  const auto kind =
      want_string(field(doc, "", "kind", v, true), "/kind", v);
  if (kind) {
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), *kind) == kinds.end())
      fail(v, "/kind", "unknown experiment kind '" + *kind + "'");
  }
  if (const json* seed = field(doc, "", "master_seed", v, true)) {
    if (!seed->is_number_unsigned())
      fail(v, "/master_seed", "must be an unsigned integer");
  }
  const auto workers =
      want_integer(field(doc, "", "workers", v, false), "/workers", v);
  if (workers && (*workers < 1 || *workers > 4096))
    fail(v, "/workers", "must lie in [1, 4096]");
  want_string(field(doc, "", "output_dir", v, false), "/output_dir", v);
  if (const json* plots = field(doc, "", "plots", v, false))
    if (!plots->is_boolean()) fail(v, "/plots", "must be a boolean");
  const json* params =
      want_object(field(doc, "", "params", v, true), "/params", v);
  if (params && kind) check_params(*kind, *params, v);
  return v;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "ar1_gap",         "ui_diagnostic",     "ic_compare",
      "field_gap",       "stationarity_check", "net_theorem_c",
      "net_moment_bound", "kriging_gap",       "inequality_suite"};
  return kinds;
}

std::vector<std::string> validate_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return {std::string("/: document is not valid JSON: ") + e.what()};
  }
  return validate_document(doc);
}

ExperimentConfig parse_config_text(const std::string& text) {
  const Violations v = validate_config_text(text);
  if (!v.empty()) {
    std::string msg = "invalid config:";
    for (const std::string& line : v) msg += "\n  " + line;
    throw config_error(msg);
  }
  const json doc = json::parse(text);
  ExperimentConfig config;
  config.kind = doc.at("kind").get<std::string>();
  config.master_seed = doc.at("master_seed").get<std::uint64_t>();
  config.workers = doc.value("workers", 1u);
  config.output_dir = doc.value("output_dir", std::string());
  config.plots = doc.value("plots", true);
  config.params_text = doc.at("params").dump();
  return config;
}

std::string ExperimentConfig::digest() const {
  json canonical;  // plain json objects iterate in sorted key order
  canonical["schema_version"] = kConfigSchemaVersion;
  canonical["kind"] = kind;
  canonical["master_seed"] = master_seed;
  canonical["params"] = json::parse(params_text);
  return hex16(fnv1a64(canonical.dump()));
}

namespace detail {

InnovationSpec innovation_from_json(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "gaussian")
    return InnovationSpec::gaussian(j.value("sigma2", 1.0));
  if (family == "student_t")
    return InnovationSpec::student_t(j.value("nu", 5.0), j.value("sigma2", 1.0));
  if (family == "centered_exponential")
    return InnovationSpec::centered_exponential(j.value("rate", 1.0));
  if (family == "scaled_uniform")
    return InnovationSpec::scaled_uniform(j.value("half_width", 1.0));
  throw config_error("unknown innovation family '" + family + "'");
}

UncertaintyRule uncertainty_from_json(const nlohmann::json& j) {
  const std::string rule = j.at("rule").get<std::string>();
  if (rule == "zero") return UncertaintyRule::zero();
  if (rule == "inverse_index") return UncertaintyRule::inverse_index();
  if (rule == "custom")
    return UncertaintyRule::custom(j.at("values").get<std::vector<double>>());
  throw config_error("unknown uncertainty rule '" + rule + "'");
}

TruncationRule truncation_from_json(const nlohmann::json& j) {
  const std::string rule = j.at("rule").get<std::string>();
  if (rule == "ceil_log2_times")
    return TruncationRule::ceil_log2_times(j.value("c", 2.0));
  if (rule == "fixed") return TruncationRule::fixed(j.at("q").get<long>());
  throw config_error("unknown truncation rule '" + rule + "'");
}

FunctionalRef functional_from_json(const nlohmann::json& j) {
  FunctionalRef ref;
  ref.name = j.at("name").get<std::string>();
  const CausalFunctional& fn = find_functional(ref.name);
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  for (const std::string& p : split_names(fn.param_names))
    ref.params.push_back(params.at(p).get<double>());
  return ref;
}

std::vector<long> multi_index_from_json(const nlohmann::json& j, int dim) {
  if (j.is_number_integer()) {
    if (dim != 1)
      throw config_error("multi-index must list one entry per dimension");
    return {j.get<long>()};
  }
  std::vector<long> out = j.get<std::vector<long>>();
  if (out.size() != static_cast<std::size_t>(dim))
    throw config_error("multi-index must list one entry per dimension");
  return out;
}

std::vector<std::vector<long>> n_grid_from_json(const nlohmann::json& j,
                                                int dim) {
  std::vector<std::vector<long>> out;
  for (const nlohmann::json& e : j) out.push_back(multi_index_from_json(e, dim));
  return out;
}

NetModel net_from_config_json(const nlohmann::json& j) {
  if (j.contains("registry"))
    return find_net(j.at("registry").get<std::string>());
  if (j.contains("model")) return net_from_json_text(j.at("model").dump());
  throw config_error("net needs exactly one of 'registry' or 'model'");
}

InputLaw input_law_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "uniform_box") return InputLaw::uniform_box();
  if (type == "truncated_gaussian")
    return InputLaw::truncated_gaussian(j.value("sigma2", 1.0));
  throw config_error("unknown input law '" + type + "'");
}

TrueFunctionRef true_function_from_json(const nlohmann::json& j) {
  TrueFunctionRef fn;
  fn.name = j.at("name").get<std::string>();
  fn.coefficients = j.value("coefficients", std::vector<double>());
  return fn;
}

}  // namespace detail
}  // namespace mgap
