#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ariel/error.hpp"
#include "ariel/trainer.hpp"

namespace ariel {

/// Unknown key or malformed value; key() names the offender.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what) : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Config text: one "key = value" per line, '#' starts a comment, blank
/// lines ignored. Keys are the TrainConfig field names; attack settings use
/// the "attack." prefix. Unset keys keep their defaults.
TrainConfig parse_config(std::string_view text);
TrainConfig load_config(const std::filesystem::path& path);

/// Sets one key from its text value.
void set_config_value(TrainConfig& config, std::string_view key, std::string_view value);

/// Every key with its current value, in canonical order.
std::vector<std::pair<std::string, std::string>> config_entries(const TrainConfig& config);
std::string to_config_text(const TrainConfig& config);
nlohmann::json to_json(const TrainConfig& config);

std::string_view anchor_name(AttackAnchor anchor);

}  // namespace ariel
