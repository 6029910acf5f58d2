#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ariel/trainer.hpp"

namespace ariel::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

/// Loads the config file (if any) and applies "key=value" overrides in order.
TrainConfig resolve_config(const std::filesystem::path& config_path, const std::vector<std::string>& overrides);

/// Entry point of the ariel tool. Errors are reported as a single line on
/// stderr of the form  error code=<n> kind=<kind> ... message="..."
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace ariel::cli
