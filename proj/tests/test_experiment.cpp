#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgap/errors.hpp"
#include "mgap/experiment/config.hpp"
#include "mgap/experiment/csv.hpp"
#include "mgap/experiment/manifest.hpp"
#include "mgap/experiment/registry.hpp"
#include "mgap/experiment/runner.hpp"
#include "mgap/experiment/svg.hpp"
#include "mgap/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// fresh scratch directory per test, removed on scope exit
struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("mgap_test_" + tag + "_" + std::to_string(++counter));
    fs::remove_all(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string small_ar1_config(const std::string& extra = "") {
  return std::string(R"({
    "schema_version": 1,
    "kind": "ar1_gap",
    "master_seed": 7)") +
         extra + R"(,
    "params": {
      "n_grid": [50, 100],
      "replications": 400,
      "r_values": [1.0],
      "rho": 0.5,
      "mu": 1.0,
      "innovation": {"family": "gaussian", "sigma2": 1.0},
      "uncertainty": {"rule": "inverse_index"},
      "truncation": {"rule": "ceil_log2_times", "c": 2.0}
    }
  })";
}

bool has_violation(const std::vector<std::string>& v, const std::string& line) {
  return std::find(v.begin(), v.end(), line) != v.end();
}

}  // namespace

TEST_CASE("double formatting is the shortest exact round-trip") {
  for (const double v : {0.1, 1.0 / 3.0, -2.5, 1e-300, 6.02214076e23, 0.0,
                         0.016117964694287834}) {
    const std::string text = mgap::format_double(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(mgap::format_double(1.0) == "1");
  CHECK(mgap::format_double(0.5) == "0.5");
  CHECK(mgap::format_double(-0.0) == "-0");
}

TEST_CASE("csv tables render typed cells with a fixed layout") {
  mgap::CsvTable table({"n", "value", "label", "flag", "maybe"});
  table.add_row({2LL, 0.5, std::string("abc"), true, std::monostate{}});
  table.add_row({-3LL, 1.0 / 3.0, std::string("x"), false, 7.0});
  CHECK(table.str() ==
        "n,value,label,flag,maybe\n"
        "2,0.5,abc,true,\n"
        "-3,0.3333333333333333,x,false,7\n");
  CHECK(table.rows() == 2);

  CHECK_THROWS_AS(table.add_row({1LL}), mgap::config_error);
  CHECK_THROWS_AS(table.add_row({1LL, 2.0, std::string("a,b"), true, 0.0}),
                  mgap::config_error);
  CHECK_THROWS_AS(mgap::CsvTable(std::vector<std::string>{}),
                  mgap::config_error);
}

TEST_CASE("checksums match published test vectors") {
  CHECK(mgap::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(mgap::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(mgap::fnv1a64("hello") == 0xa430d84680aabd0bULL);
  CHECK(mgap::hex16(0xcbf29ce484222325ULL) == "cbf29ce484222325");
  CHECK(mgap::hex16(0x1ULL) == "0000000000000001");
}

TEST_CASE("plot rendering is a pure function of its spec") {
  mgap::PlotSpec spec;
  spec.title = "gap";
  spec.x_label = "n";
  spec.y_label = "value";
  spec.log_x = true;
  spec.log_y = true;
  spec.series.push_back({"a", {10.0, 100.0, 1000.0}, {0.1, 0.01, 0.001}});
  const std::string svg = mgap::render_line_plot_svg(spec);
  CHECK(svg == mgap::render_line_plot_svg(spec));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  mgap::PlotSpec empty;
  CHECK_THROWS_AS(mgap::render_line_plot_svg(empty), mgap::config_error);
  spec.series[0].ys.pop_back();
  CHECK_THROWS_AS(mgap::render_line_plot_svg(spec), mgap::config_error);
}

TEST_CASE("a complete config validates cleanly") {
  CHECK(mgap::validate_config_text(small_ar1_config()).empty());
  const auto cfg = mgap::parse_config_text(small_ar1_config());
  CHECK(cfg.kind == "ar1_gap");
  CHECK(cfg.master_seed == 7);
  CHECK(cfg.workers == 1);
  CHECK(cfg.plots);
  CHECK(cfg.output_dir.empty());
}

TEST_CASE("validation reports every violation with its path") {
  const auto missing = mgap::validate_config_text(
      R"({"schema_version": 1, "kind": "ar1_gap", "params": {}})");
  CHECK(has_violation(missing, "/master_seed: required field is missing"));

  std::string bad_rho = small_ar1_config();
  const auto pos = bad_rho.find("\"rho\": 0.5");
  bad_rho.replace(pos, 10, "\"rho\": 1.5");
  CHECK(has_violation(mgap::validate_config_text(bad_rho),
                      "/params/rho: rho must lie in (-1,1)"));

  const auto unknown = mgap::validate_config_text(
      R"({"schema_version": 1, "kind": "frobnicate", "master_seed": 1,
          "params": {}})");
  CHECK(has_violation(unknown, "/kind: unknown experiment kind 'frobnicate'"));

  const auto negative_seed = mgap::validate_config_text(
      R"({"schema_version": 1, "kind": "inequality_suite", "master_seed": -4,
          "params": {}})");
  CHECK(has_violation(negative_seed, "/master_seed: must be an unsigned integer"));

  const auto bad_schema = mgap::validate_config_text(
      R"({"schema_version": 2, "kind": "inequality_suite", "master_seed": 1,
          "params": {}})");
  CHECK(has_violation(bad_schema, "/schema_version: must be 1"));

  const auto extra_key = mgap::validate_config_text(
      R"({"schema_version": 1, "kind": "inequality_suite", "master_seed": 1,
          "params": {"pair": 10}})");
  CHECK(has_violation(extra_key, "/params/pair: unknown field"));

  const auto bad_workers = mgap::validate_config_text(
      R"({"schema_version": 1, "kind": "inequality_suite", "master_seed": 1,
          "workers": 0, "params": {}})");
  CHECK(has_violation(bad_workers, "/workers: must lie in [1, 4096]"));

  const auto bad_plots = mgap::validate_config_text(
      R"({"schema_version": 1, "kind": "inequality_suite", "master_seed": 1,
          "plots": "yes", "params": {}})");
  CHECK(has_violation(bad_plots, "/plots: must be a boolean"));

  const auto not_json = mgap::validate_config_text("{nope");
  REQUIRE(not_json.size() == 1);
  CHECK(not_json[0].rfind("/: document is not valid JSON", 0) == 0);

  CHECK_THROWS_AS(mgap::parse_config_text("{nope"), mgap::config_error);
}

TEST_CASE("the digest identifies the computation, not the delivery") {
  const auto base = mgap::parse_config_text(small_ar1_config());
  auto moved = base;
  moved.workers = 8;
  moved.output_dir = "elsewhere";
  moved.plots = false;
  CHECK(base.digest() == moved.digest());
  CHECK(base.digest().size() == 16);

  auto reseeded = base;
  reseeded.master_seed = 8;
  CHECK(base.digest() != reseeded.digest());

  auto reparametrized = base;
  reparametrized.params_text = json::parse(R"({"pairs": 10})").dump();
  CHECK(base.digest() != reparametrized.digest());

  // key order in the source text must not matter
  const auto a = mgap::parse_config_text(
      R"({"schema_version": 1, "kind": "inequality_suite", "master_seed": 2,
          "params": {"pairs": 100, "spike_n": 50}})");
  const auto b = mgap::parse_config_text(
      R"({"master_seed": 2, "params": {"spike_n": 50, "pairs": 100},
          "kind": "inequality_suite", "schema_version": 1})");
  CHECK(a.digest() == b.digest());
}

TEST_CASE("the ingredient catalog is stable, sorted and complete") {
  const std::string text = mgap::registry_json_text();
  CHECK(text == mgap::registry_json_text());
  const json doc = json::parse(text);
  CHECK(doc.at("schema_version").get<int>() == mgap::kConfigSchemaVersion);
  CHECK(doc.at("toolkit_version").get<std::string>() == mgap::kVersion);

  std::vector<std::string> fn_names;
  for (const auto& fn : doc.at("functionals"))
    fn_names.push_back(fn.at("name").get<std::string>());
  CHECK(std::is_sorted(fn_names.begin(), fn_names.end()));
  for (const char* expected : {"constant", "ar1_window", "ar1_window_trunc",
                               "clipped_poly", "lambda_probe"})
    CHECK(std::find(fn_names.begin(), fn_names.end(), expected) !=
          fn_names.end());
  CHECK(doc.at("innovation_families").size() == 4);
  CHECK(doc.at("nets").size() == 4);
  CHECK(doc.at("true_functions").size() == 3);
}

TEST_CASE("a run emits data, plots and a manifest that all agree") {
  ScratchDir dir("run");
  auto cfg = mgap::parse_config_text(small_ar1_config());
  cfg.output_dir = dir.str();
  const auto manifest = mgap::run_experiment(cfg);

  CHECK(manifest.kind == "ar1_gap");
  CHECK(manifest.seed == 7);
  CHECK(manifest.config_digest == cfg.digest());
  REQUIRE_FALSE(manifest.files.empty());

  for (const auto& file : manifest.files) {
    const std::string content = read_file(dir.path / file.name);
    CHECK(content.size() == file.bytes);
    CHECK(mgap::hex16(mgap::fnv1a64(content)) == file.checksum_hex);
  }
  const json written = json::parse(read_file(dir.path / "manifest.json"));
  CHECK(written.at("kind") == "ar1_gap");
  CHECK(written.at("files").size() == manifest.files.size());

  const json summary = json::parse(read_file(dir.path / "summary.json"));
  CHECK(summary.at("kind") == "ar1_gap");
  CHECK(summary.at("master_seed").get<std::uint64_t>() == 7);

  // csv has a header plus one line per (n, r) combination
  const std::string csv = read_file(dir.path / "ar1_gap.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.rfind("n,r,", 0) == 0);
}

TEST_CASE("reruns and worker counts leave the data files bit-identical") {
  ScratchDir d1("det1"), d2("det2"), d4("det4");
  auto cfg = mgap::parse_config_text(small_ar1_config());

  cfg.output_dir = d1.str();
  const auto m1 = mgap::run_experiment(cfg);
  cfg.output_dir = d2.str();
  const auto m2 = mgap::run_experiment(cfg);
  cfg.output_dir = d4.str();
  cfg.workers = 4;
  const auto m4 = mgap::run_experiment(cfg);

  REQUIRE(m1.files.size() == m2.files.size());
  REQUIRE(m1.files.size() == m4.files.size());
  for (std::size_t i = 0; i < m1.files.size(); ++i) {
    CHECK(m1.files[i].name == m2.files[i].name);
    CHECK(m1.files[i].checksum_hex == m2.files[i].checksum_hex);
    CHECK(m1.files[i].checksum_hex == m4.files[i].checksum_hex);
    CHECK(read_file(d1.path / m1.files[i].name) ==
          read_file(d4.path / m4.files[i].name));
  }
}

TEST_CASE("plots can be switched off without touching the data") {
  ScratchDir with("plots_on"), without("plots_off");
  auto cfg = mgap::parse_config_text(small_ar1_config());
  cfg.output_dir = with.str();
  const auto m_with = mgap::run_experiment(cfg);
  cfg.output_dir = without.str();
  cfg.plots = false;
  const auto m_without = mgap::run_experiment(cfg);

  const auto is_svg = [](const mgap::ManifestFile& f) {
    return f.name.size() > 4 &&
           f.name.compare(f.name.size() - 4, 4, ".svg") == 0;
  };
  CHECK(std::any_of(m_with.files.begin(), m_with.files.end(), is_svg));
  CHECK(std::none_of(m_without.files.begin(), m_without.files.end(), is_svg));
  for (const auto& f : m_without.files) {
    const auto match =
        std::find_if(m_with.files.begin(), m_with.files.end(),
                     [&](const auto& g) { return g.name == f.name; });
    REQUIRE(match != m_with.files.end());
    CHECK(match->checksum_hex == f.checksum_hex);
  }
}

TEST_CASE("a failing run cleans up and names its stage") {
  ScratchDir dir("fail");
  // passes validation, but the honest simulation length is over budget
  std::string text = small_ar1_config();
  text.replace(text.find("\"rho\": 0.5"), 10, "\"rho\": 0.99");
  text.replace(text.find("\"truncation\""), 12,
               "\"max_path_length\": 100, \"truncation\"");
  REQUIRE(mgap::validate_config_text(text).empty());
  auto cfg = mgap::parse_config_text(text);
  cfg.output_dir = dir.str();
  try {
    mgap::run_experiment(cfg);
    FAIL("expected a resource error");
  } catch (const mgap::resource_error& e) {
    CHECK(std::string(e.what()).rfind("ar1_gap/compute:", 0) == 0);
  }
  CHECK_FALSE(fs::exists(dir.path / "manifest.json"));
  CHECK_FALSE(fs::exists(dir.path / "ar1_gap.csv"));
}

TEST_CASE("an unwritable output location fails without leftovers") {
  ScratchDir dir("blocked");
  fs::create_directories(dir.path);
  const fs::path blocker = dir.path / "blocker";
  std::ofstream(blocker) << "file";
  auto cfg = mgap::parse_config_text(small_ar1_config());
  cfg.output_dir = (blocker / "sub").string();
  CHECK_THROWS_AS(mgap::run_experiment(cfg), mgap::resource_error);
  CHECK_FALSE(fs::exists(blocker / "sub"));

  cfg.output_dir.clear();
  CHECK_THROWS_AS(mgap::run_experiment(cfg), mgap::config_error);
}

TEST_CASE("the moment-cap verdict reaches the run summary") {
  ScratchDir dir("spike");
  const std::string text = R"({
    "schema_version": 1,
    "kind": "ui_diagnostic",
    "master_seed": 11,
    "params": {
      "source": {"type": "spike"},
      "n_grid": [10, 100],
      "replications": 20000,
      "r": 1.0,
      "a_grid": [5.0, 25.0],
      "delta": 1.0,
      "cap": 5.0
    }
  })";
  auto cfg = mgap::parse_config_text(text);
  cfg.output_dir = dir.str();
  mgap::run_experiment(cfg);
  const json summary = json::parse(read_file(dir.path / "summary.json"));
  CHECK(summary.at("ui_suspect").get<bool>());
  CHECK_FALSE(summary.at("moment_check_pass").get<bool>());
  CHECK(summary.at("max_moment_estimate").get<double>() > 5.0);
}

TEST_CASE("the inequality sweep reports zero violations end to end") {
  ScratchDir dir("ineq");
  const std::string text = R"({
    "schema_version": 1,
    "kind": "inequality_suite",
    "master_seed": 5,
    "params": {"pairs": 20000}
  })";
  auto cfg = mgap::parse_config_text(text);
  cfg.output_dir = dir.str();
  mgap::run_experiment(cfg);
  const json summary = json::parse(read_file(dir.path / "summary.json"));
  CHECK(summary.at("total_violations").get<long long>() == 0);
  CHECK(summary.at("all_zero").get<bool>());
}

TEST_CASE("manifest text lists its fields in a fixed order") {
  mgap::RunManifest manifest;
  manifest.kind = "demo";
  manifest.version = "0.0.0";
  manifest.config_digest = "00ff";
  manifest.seed = 3;
  manifest.workers = 2;
  manifest.files.push_back({"a.csv", 10, "aa"});
  manifest.created_utc = "2000-01-01T00:00:00Z";
  const std::string text = manifest.to_json_text();
  CHECK(text.find("\"kind\"") < text.find("\"version\""));
  CHECK(text.find("\"version\"") < text.find("\"files\""));
  const json parsed = json::parse(text);
  CHECK(parsed.at("files")[0].at("name") == "a.csv");
  CHECK(parsed.at("seed").get<int>() == 3);
}
