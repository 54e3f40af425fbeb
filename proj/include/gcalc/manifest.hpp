#pragma once

// Run manifest written next to every CLI report: what ran, with which
// configuration and seeds, and SHA-256 digests of the files it produced.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace gcalc {

inline constexpr const char* kToolVersion = "0.1.0";

/// Hex SHA-256 of a byte string / of a file's contents (throws Error when unreadable).
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestOutput {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config;
  std::vector<std::uint64_t> seeds;
  std::string tool_version = kToolVersion;
  double wall_time_seconds = 0.0;
  std::vector<ManifestOutput> outputs;

  /// Hashes `file` and records it relative to the manifest directory when possible.
  void add_output(const std::filesystem::path& file, const std::filesystem::path& base = {});
  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace gcalc
