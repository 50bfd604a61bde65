#include "mgap/experiment/manifest.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace mgap {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::string RunManifest::to_json_text() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["version"] = version;
  j["config_digest"] = config_digest;
  j["seed"] = seed;
  j["workers"] = workers;
  j["files"] = nlohmann::ordered_json::array();
  for (const ManifestFile& f : files) {
    j["files"].push_back({{"name", f.name},
                          {"bytes", f.bytes},
                          {"checksum", f.checksum_hex}});
  }
  j["created_utc"] = created_utc;
  return j.dump(2) + "\n";
}

}  // namespace mgap
