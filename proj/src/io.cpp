#include "ifa/io.hpp"

#include <fstream>
#include <sstream>

namespace ifa::io {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(data.data(), long(data.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string file_digest(const std::filesystem::path& path) {
  return hex64(fnv1a64(read_file(path)));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["version"] = kLibraryVersion;
  j["command_line"] = command_line;
  j["parameters"] = parameters;
  j["calibration_digest"] = calibration_digest;
  j["output_digests"] = output_digests;
  j["counts"] = counts;
  j["wall_seconds"] = wall_seconds;
  return j;
}

void RunManifest::write(const std::filesystem::path& dir) const {
  write_file_atomic(dir / "manifest.json", to_json().dump(2) + "\n");
}

} // namespace ifa::io
