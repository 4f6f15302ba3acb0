#include "dipolesim/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "dipolesim/errors.hpp"

namespace dipolesim {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string checksum_string(std::uint64_t value) {
  static const char* hex = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4)
    out += hex[(value >> shift) & 0xF];
  return out;
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["version"] = manifest.version;
  j["preset"] = manifest.preset;
  j["config_checksum"] = manifest.config_checksum;
  j["seeds"] = manifest.seeds;
  j["wall_time_seconds"] = manifest.wall_time_seconds;
  nlohmann::ordered_json tol = nlohmann::ordered_json::object();
  for (const auto& [name, value] : manifest.tolerances) tol[name] = value;
  j["tolerances"] = std::move(tol);
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const OutputRecord& rec : manifest.outputs) {
    nlohmann::ordered_json o;
    o["file"] = rec.file;
    o["checksum"] = rec.checksum;
    o["bytes"] = rec.bytes;
    outputs.push_back(std::move(o));
  }
  j["outputs"] = std::move(outputs);
  return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << manifest_to_json(manifest);
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace dipolesim
