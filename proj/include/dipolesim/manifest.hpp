#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dipolesim {

// FNV-1a over raw bytes; used for config and output-file checksums. Not
// cryptographic, just a stable fingerprint for regression diffs.
std::uint64_t fnv1a64(std::string_view bytes);

struct OutputRecord {
  std::string file;       // name relative to the output directory
  std::string checksum;   // "fnv1a64:" + 16 hex digits
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string version;           // library version string
  std::string preset;
  std::string config_checksum;   // over the canonical serialized config
  std::vector<std::uint64_t> seeds;
  double wall_time_seconds = 0.0;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<OutputRecord> outputs;
};

std::string checksum_string(std::uint64_t value);
std::string manifest_to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace dipolesim
