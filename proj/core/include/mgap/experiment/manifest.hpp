#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mgap {

std::uint64_t fnv1a64(std::string_view data);
std::string hex16(std::uint64_t value);

struct ManifestFile {
  std::string name;
  std::uint64_t bytes = 0;
  std::string checksum_hex;
};

// Written as the final step of a run, so its presence marks a complete
// output directory. `created_utc` is informational and deliberately kept
// out of every data-file checksum.
struct RunManifest {
  std::string kind;
  std::string version;
  std::string config_digest;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::vector<ManifestFile> files;
  std::string created_utc;

  std::string to_json_text() const;
};

}  // namespace mgap
