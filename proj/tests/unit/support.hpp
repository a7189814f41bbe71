#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tailorsql/docs/catalog.hpp"
#include "tailorsql/embed/provider.hpp"
#include "tailorsql/serve/build.hpp"
#include "tailorsql/serve/config.hpp"
#include "tailorsql/text.hpp"

namespace test_support {

inline std::string fixture(const std::string& rel) { return std::string(TAILORSQL_FIXTURES) + "/" + rel; }

inline std::string read_fixture(const std::string& rel) { return tailorsql::text::read_file(fixture(rel)); }

inline tailorsql::docs::SchemaCatalog load_catalog(const std::string& dir) {
  tailorsql::Diagnostics diags;
  auto catalog = tailorsql::docs::parse_schema(read_fixture(dir + "/schema.sql"), diags);
  catalog.attach_stats(nlohmann::json::parse(read_fixture(dir + "/stats.json")), diags);
  return catalog;
}

inline tailorsql::serve::BuildFiles fixture_files(const std::string& dir) {
  return {fixture(dir + "/schema.sql"), fixture(dir + "/stats.json"), fixture(dir + "/log.sql")};
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  static std::mt19937_64 rng(std::random_device{}());
  auto p = std::filesystem::temp_directory_path() / ("tailorsql_test_" + name + "_" + std::to_string(rng() % 1000000));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// name -> bytes for every file in a directory.
inline std::map<std::string, std::string> directory_bytes(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) out[e.path().filename().string()] = file_bytes(e.path());
  return out;
}

}  // namespace test_support
