/*
 * Copyright 2026 The tmgld Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tmgld/experiments.hpp"

namespace tmgld::experiments {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Best-effort location of a key given its path of enclosing keys.
std::pair<std::size_t, std::size_t> locate(const std::string& text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  for (const auto& key : path) {
    const auto found = text.find('"' + key + '"', pos);
    if (found == std::string::npos) return {0, 0};
    pos = found;
  }
  return line_col(text, pos);
}

[[noreturn]] void fail_at(const std::string& msg, const std::string& text, const std::vector<std::string>& path) {
  const auto [line, col] = locate(text, path);
  throw ConfigError(msg, line, col);
}

bool same_kind(const json& def, const json& val) {
  if (def.is_boolean()) return val.is_boolean();
  if (def.is_string()) return val.is_string();
  if (def.is_array()) {
    if (!val.is_array()) return false;
    for (const auto& v : val)
      if (!v.is_number()) return false;
    return true;
  }
  if (def.is_number_integer() || def.is_number_unsigned())
    return val.is_number_unsigned() || (val.is_number_integer() && val.get<long long>() >= 0) ||
           (val.is_number_float() && val.get<double>() >= 0.0 && std::floor(val.get<double>()) == val.get<double>());
  if (def.is_number()) return val.is_number();
  return false;
}

std::string kind_name(const json& def) {
  if (def.is_boolean()) return "a boolean";
  if (def.is_string()) return "a string";
  if (def.is_array()) return "a list of numbers";
  if (def.is_number_integer() || def.is_number_unsigned()) return "a non-negative integer";
  return "a number";
}

}  // namespace

const json& Params::at(const std::string& path) const {
  const auto dot = path.find('.');
  if (dot == std::string::npos) throw std::logic_error("parameter path needs a section: " + path);
  const auto section = path.substr(0, dot), key = path.substr(dot + 1);
  if (!tree_.contains(section) || !tree_.at(section).contains(key))
    throw std::logic_error("preset is missing parameter " + path);
  return tree_.at(section).at(key);
}

bool Params::has(const std::string& path) const {
  const auto dot = path.find('.');
  if (dot == std::string::npos) return false;
  const auto section = path.substr(0, dot), key = path.substr(dot + 1);
  return tree_.contains(section) && tree_.at(section).contains(key);
}

double Params::num(const std::string& path) const { return at(path).get<double>(); }

std::uint64_t Params::count(const std::string& path) const {
  const auto& v = at(path);
  if (v.is_number_float()) return static_cast<std::uint64_t>(v.get<double>());
  return v.get<std::uint64_t>();
}

bool Params::flag(const std::string& path) const { return at(path).get<bool>(); }
std::string Params::text(const std::string& path) const { return at(path).get<std::string>(); }
std::vector<double> Params::list(const std::string& path) const { return at(path).get<std::vector<double>>(); }

json ExperimentConfig::canonical() const {
  return {{"preset", preset}, {"seed", seed}, {"params", params.tree()}};
}

std::string ExperimentConfig::hash() const {
  const std::string s = canonical().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig default_config(const std::string& preset, std::uint64_t seed) {
  const auto& info = find_preset(preset);
  ExperimentConfig cfg;
  cfg.preset = info.name;
  cfg.seed = seed;
  cfg.output_dir = "out/" + info.name;
  cfg.params = Params(info.defaults());
  return cfg;
}

void apply_overrides(ExperimentConfig& cfg, const json& overrides, const std::string& text) {
  if (!overrides.is_object()) fail_at("'overrides' must be an object", text, {"overrides"});
  json& tree = cfg.params.tree();
  for (const auto& [section, body] : overrides.items()) {
    if (!tree.contains(section))
      fail_at("unknown override section '" + section + "' for preset " + cfg.preset, text, {"overrides", section});
    if (!body.is_object()) fail_at("override section '" + section + "' must be an object", text, {"overrides", section});
    for (const auto& [key, value] : body.items()) {
      if (!tree[section].contains(key))
        fail_at("unknown override key '" + section + "." + key + "' for preset " + cfg.preset, text,
                {"overrides", section, key});
      const json& def = tree[section][key];
      if (!same_kind(def, value))
        fail_at("override '" + section + "." + key + "' must be " + kind_name(def), text, {"overrides", section, key});
      if ((def.is_number_integer() || def.is_number_unsigned()) && value.is_number_float())
        tree[section][key] = static_cast<std::uint64_t>(value.get<double>());
      else
        tree[section][key] = value;
    }
  }
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": syntax error";
    throw ConfigError(os.str(), line, col);
  }
  if (!doc.is_object()) throw ConfigError(source + ": top level must be an object", 1, 1);
  for (const auto& [key, value] : doc.items()) {
    if (key != "preset" && key != "seed" && key != "output_dir" && key != "overrides")
      fail_at(source + ": unknown key '" + key + "'", text, {key});
  }
  if (!doc.contains("preset") || !doc["preset"].is_string())
    throw ConfigError(source + ": missing string key 'preset'", 1, 1);
  const std::string preset = doc["preset"];
  bool known = false;
  for (const auto& p : presets()) known = known || p.name == preset;
  if (!known) fail_at(source + ": unknown preset '" + preset + "'", text, {"preset"});

  ExperimentConfig cfg = default_config(preset);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail_at(source + ": 'seed' must be a non-negative integer", text, {"seed"});
    cfg.seed = doc["seed"];
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) fail_at(source + ": 'output_dir' must be a string", text, {"output_dir"});
    cfg.output_dir = doc["output_dir"];
  }
  if (doc.contains("overrides")) {
    try {
      apply_overrides(cfg, doc["overrides"], text);
    } catch (const ConfigError& e) {
      std::ostringstream os;
      os << source << ":" << e.line() << ":" << e.column() << ": " << e.what();
      throw ConfigError(os.str(), e.line(), e.column());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace tmgld::experiments
