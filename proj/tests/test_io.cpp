#include <doctest.h>

#include <filesystem>

#include "ifa/io.hpp"

using namespace ifa::io;
namespace fs = std::filesystem;

TEST_CASE("fnv1a64 is stable and order-sensitive") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("ab") != fnv1a64("ba"));
  CHECK(hex64(fnv1a64("rule")) == hex64(fnv1a64("rule")));
  CHECK(hex64(0xabcull).size() == 16);
}

TEST_CASE("atomic writes leave no partial file behind") {
  const fs::path dir = fs::temp_directory_path() / "ifa_io_test";
  fs::create_directories(dir);
  const fs::path f = dir / "x.txt";
  write_file_atomic(f, "one");
  CHECK(read_file(f) == "one");
  write_file_atomic(f, "two");
  CHECK(read_file(f) == "two");
  CHECK(!fs::exists(dir / "x.txt.tmp"));
  CHECK(file_digest(f) == hex64(fnv1a64("two")));
  fs::remove_all(dir);
}

TEST_CASE("run manifest serializes its fields") {
  RunManifest man;
  man.command_line = "ifa scan pairs --out out";
  man.calibration_digest = "deadbeef";
  man.parameters = {{"window", 10}};
  man.counts = {{"complex_pairs", 74}};
  man.output_digests["pairs.csv"] = "0123456789abcdef";
  const auto j = man.to_json();
  CHECK(j["version"] == kLibraryVersion);
  CHECK(j["command_line"] == "ifa scan pairs --out out");
  CHECK(j["parameters"]["window"] == 10);
  CHECK(j["output_digests"]["pairs.csv"] == "0123456789abcdef");
}
