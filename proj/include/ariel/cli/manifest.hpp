#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ariel/trainer.hpp"

namespace ariel::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  TrainConfig config;
  /// Command-specific settings that are not TrainConfig keys.
  nlohmann::json options = nlohmann::json::object();
  /// Input path -> SHA-256.
  std::map<std::string, std::string> inputs;
  std::vector<std::string> outputs;

  void add_input(const std::filesystem::path& path);
  /// Adds every regular file of a directory, in name order.
  void add_input_dir(const std::filesystem::path& dir);
};

nlohmann::json to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace ariel::cli
