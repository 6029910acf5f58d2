#include "ariel/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ariel {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key), "config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

struct Field {
  const char* key;
  std::function<void(TrainConfig&, std::string_view key, std::string_view)> set;
  std::function<std::string(const TrainConfig&)> get;
};

Field real(const char* key, double TrainConfig::*member) {
  return {key, [member](TrainConfig& c, std::string_view k, std::string_view v) { c.*member = parse_number<double>(k, v); },
          [member](const TrainConfig& c) { return format_double(c.*member); }};
}

Field real(const char* key, double AttackConfig::*member) {
  return {key,
          [member](TrainConfig& c, std::string_view k, std::string_view v) { c.attack.*member = parse_number<double>(k, v); },
          [member](const TrainConfig& c) { return format_double(c.attack.*member); }};
}

template <typename Owner, typename Int>
Field integer(const char* key, Int Owner::*member) {
  if constexpr (std::is_same_v<Owner, TrainConfig>) {
    return {key, [member](TrainConfig& c, std::string_view k, std::string_view v) { c.*member = parse_number<Int>(k, v); },
            [member](const TrainConfig& c) { return std::to_string(c.*member); }};
  } else {
    return {key,
            [member](TrainConfig& c, std::string_view k, std::string_view v) { c.attack.*member = parse_number<Int>(k, v); },
            [member](const TrainConfig& c) { return std::to_string(c.attack.*member); }};
  }
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      real("tau", &TrainConfig::tau),
      real("eps1", &TrainConfig::eps1),
      real("eps2", &TrainConfig::eps2),
      real("gamma", &TrainConfig::gamma),
      integer("period_T", &TrainConfig::period_t),
      integer("subgraph_size", &TrainConfig::subgraph_size),
      real("p_edge_1", &TrainConfig::p_edge_1),
      real("p_feat_1", &TrainConfig::p_feat_1),
      real("p_edge_2", &TrainConfig::p_edge_2),
      real("p_feat_2", &TrainConfig::p_feat_2),
      real("learning_rate", &TrainConfig::learning_rate),
      real("weight_decay", &TrainConfig::weight_decay),
      integer("epochs", &TrainConfig::epochs),
      integer("seed", &TrainConfig::seed),
      integer("hidden_dim", &TrainConfig::hidden_dim),
      integer("embed_dim", &TrainConfig::embed_dim),
      integer("proj_dim", &TrainConfig::proj_dim),
      integer("attack.steps", &AttackConfig::steps),
      real("attack.alpha", &AttackConfig::alpha),
      real("attack.beta", &AttackConfig::beta),
      real("attack.delta_A_fraction", &AttackConfig::delta_a_fraction),
      real("attack.delta_X", &AttackConfig::delta_x),
      Field{"attack.anchor",
            [](TrainConfig& c, std::string_view k, std::string_view v) {
              if (v == "view1") c.attack.anchor = AttackAnchor::kView1;
              else if (v == "view2") c.attack.anchor = AttackAnchor::kView2;
              else if (v == "original") c.attack.anchor = AttackAnchor::kOriginal;
              else throw ConfigError(std::string(k), "config key 'attack.anchor': expected view1, view2 or original");
            },
            [](const TrainConfig& c) { return std::string(anchor_name(c.attack.anchor)); }},
      integer("attack.discrete_samples", &AttackConfig::discrete_samples),
  };
  return table;
}

}  // namespace

std::string_view anchor_name(AttackAnchor anchor) {
  switch (anchor) {
    case AttackAnchor::kView1: return "view1";
    case AttackAnchor::kView2: return "view2";
    case AttackAnchor::kOriginal: return "original";
  }
  return "view1";
}

void set_config_value(TrainConfig& config, std::string_view key, std::string_view value) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(config, key, trim(value));
      return;
    }
  }
  throw ConfigError(std::string(key), "unknown config key '" + std::string(key) + "'");
}

TrainConfig parse_config(std::string_view text) {
  TrainConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const TrainConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Field& f : fields()) out.emplace_back(f.key, f.get(config));
  return out;
}

std::string to_config_text(const TrainConfig& config) {
  std::string text;
  for (const auto& [k, v] : config_entries(config)) text += k + " = " + v + "\n";
  return text;
}

nlohmann::json to_json(const TrainConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : config_entries(config)) {
    if (k == "attack.anchor") j[k] = v;
    else j[k] = nlohmann::json::parse(v);
  }
  return j;
}

}  // namespace ariel
