// File plumbing shared by the CLI: digests, atomic writes, run manifests.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace ifa::io {

inline constexpr const char* kLibraryVersion = "0.1.0";

// FNV-1a 64-bit, used for file digests and checkpoint checksums.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);
// Write via temp file + rename so readers never observe partial content.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

std::string file_digest(const std::filesystem::path& path);

// Every CLI command drops one of these next to its outputs.
struct RunManifest {
  std::string command_line;
  nlohmann::json parameters;
  std::string calibration_digest;
  std::map<std::string, std::string> output_digests; // filename -> fnv1a64 hex
  nlohmann::json counts;
  double wall_seconds = 0;

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& dir) const;
};

} // namespace ifa::io
