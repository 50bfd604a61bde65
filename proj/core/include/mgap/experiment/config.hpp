#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mgap {

// Parsed top-level experiment configuration. The kind-specific parameter
// block is kept as JSON text; the runner interprets it after validation,
// so this header stays free of any JSON library types.
struct ExperimentConfig {
  std::string kind;
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
  std::string output_dir;  // empty means the caller decides
  bool plots = true;
  std::string params_text;

  // Digest over (schema_version, kind, master_seed, params) in a canonical
  // key-sorted form; identifies the computation, not the delivery options.
  std::string digest() const;
};

const std::vector<std::string>& experiment_kinds();

// Full schema check. Returns one "path: message" line per violation,
// empty when the document is valid. Malformed JSON yields a single
// violation on the root path.
std::vector<std::string> validate_config_text(const std::string& text);

// Validates, then extracts; throws config_error listing every violation.
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace mgap
