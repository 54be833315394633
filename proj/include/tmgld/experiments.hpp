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

#ifndef TMGLD_EXPERIMENTS_HPP
#define TMGLD_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tmgld/analysis.hpp"

namespace tmgld::experiments {

inline constexpr const char* kVersion = "0.1.0";

// Raised for anything wrong with a config: bad syntax, unknown keys, wrong
// types. Line and column are 1-based and 0 when not applicable.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

// Effective parameters of a run: the preset defaults with overrides merged in.
// Sections: dynamics, model, loss, data, experiment.
class Params {
 public:
  Params() = default;
  explicit Params(nlohmann::json tree) : tree_(std::move(tree)) {}

  double num(const std::string& path) const;
  std::uint64_t count(const std::string& path) const;
  bool flag(const std::string& path) const;
  std::string text(const std::string& path) const;
  std::vector<double> list(const std::string& path) const;
  bool has(const std::string& path) const;

  const nlohmann::json& tree() const { return tree_; }
  nlohmann::json& tree() { return tree_; }

 private:
  const nlohmann::json& at(const std::string& path) const;
  nlohmann::json tree_;
};

struct ExperimentConfig {
  std::string preset;
  std::uint64_t seed = 0;
  std::string output_dir;
  Params params;

  /// FNV-1a 64 of the canonical JSON of (preset, seed, params), as 16 hex digits.
  std::string hash() const;
  nlohmann::json canonical() const;
};

/// Parses a config document. `source` names the input in error messages.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

/// Config for a preset with its defaults and no overrides.
ExperimentConfig default_config(const std::string& preset, std::uint64_t seed = 1);

/// Merges `overrides` (section -> key -> value) into cfg.params; unknown keys throw.
void apply_overrides(ExperimentConfig& cfg, const nlohmann::json& overrides, const std::string& text = {});

struct Criterion {
  int id = 0;  // acceptance criterion number; 0 for informational checks
  std::string name;
  bool passed = false;
  std::string measured;
  std::string threshold;
};

struct Table {
  std::string file;  // e.g. "results.csv"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentResult {
  std::string preset;
  std::vector<Criterion> criteria;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, double>> metrics;  // summary values, first one feeds sweeps
  std::vector<std::string> notes;

  bool passed() const;
  double metric(const std::string& name) const;
};

// Raised when a chain diverges inside an experiment.
class ExperimentDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PresetInfo {
  std::string name;
  std::string summary;
  std::vector<int> criteria;
  std::function<nlohmann::json()> defaults;
  std::function<ExperimentResult(const ExperimentConfig&)> run;
  // Presets with a supervised objective can audit its assumptions; empty otherwise.
  std::function<AuditReport(const ExperimentConfig&)> audit;
};

const std::vector<PresetInfo>& presets();
const PresetInfo& find_preset(const std::string& name);

/// Runs the preset; converts chain divergence into ExperimentDiverged.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes every table plus report.txt and provenance.json into cfg.output_dir.
void write_artifacts(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Human-readable summary with one PASS/FAIL line per criterion and a provenance block.
std::string format_report(const ExperimentConfig& cfg, const ExperimentResult& result);

std::string format_number(double v);

inline constexpr const char* kSweepAxes[] = {"n", "beta", "eta", "lambda", "M", "N"};

struct SweepResult {
  Table table;  // one row per value plus a fit row
  std::vector<ExperimentResult> runs;
  bool fit_sufficient = false;
  double fit_value = 0.0;
};

/// Runs the preset once per axis value (concurrently when threads > 1) and
/// fits the preset's sweep metric against the axis.
SweepResult run_sweep(const ExperimentConfig& base, const std::string& axis, const std::vector<double>& values,
                      int threads = 1);

/// Entry point shared by the tmgld executable and the tests.
int cli_main(int argc, const char* const* argv);

}  // namespace tmgld::experiments

#endif  // TMGLD_EXPERIMENTS_HPP
