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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "internal.hpp"
#include "tmgld/kernels.hpp"

namespace tmgld::experiments {

using nlohmann::json;

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> all = {
      detail::posterior_validate_preset(), detail::ou_moment_preset(),        detail::stepsize_bias_preset(),
      detail::ergodicity_preset(),         detail::grad_check_preset(),       detail::lipschitz_suite_preset(),
      detail::bernstein_suite_preset(),    detail::correlation_suite_preset(), detail::regression_rate_preset(),
      detail::classification_rate_preset(), detail::finite_width_demo_preset(), detail::wasserstein_demo_preset()};
  return all;
}

const PresetInfo& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + name + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto& info = find_preset(cfg.preset);
  try {
    return info.run(cfg);
  } catch (const ChainDiverged& e) {
    const auto& s = e.last_finite();
    throw ExperimentDiverged(std::string(e.what()) + "; last finite state at step " + std::to_string(s.step) +
                             ", |coeffs| = " + format_number(s.coeffs.norm()) +
                             ", last |grad| = " + format_number(s.last_grad_norm) + "; try a smaller dynamics.eta");
  }
}

namespace {

std::string axis_key(const ExperimentConfig& cfg, const std::string& axis) {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> candidates = {
      {"n", {"experiment.ns", "data.n"}},
      {"beta", {"experiment.betas", "dynamics.beta"}},
      {"eta", {"experiment.etas", "dynamics.eta"}},
      {"lambda", {"experiment.lambdas", "dynamics.lambda"}},
      {"M", {"model.M"}},
      {"N", {"model.n_modes", "dynamics.n_modes"}}};
  for (const auto& [name, keys] : candidates) {
    if (name != axis) continue;
    for (const auto& k : keys)
      if (cfg.params.has(k)) return k;
    throw ConfigError("axis '" + axis + "' is not sweepable for preset " + cfg.preset);
  }
  throw ConfigError("unknown sweep axis '" + axis + "' (expected one of n, beta, eta, lambda, M, N)");
}

void set_axis(ExperimentConfig& cfg, const std::string& key, double value) {
  const auto dot = key.find('.');
  json& slot = cfg.params.tree()[key.substr(0, dot)][key.substr(dot + 1)];
  if (slot.is_array()) {
    slot = json::array({value});
  } else if (slot.is_number_integer() || slot.is_number_unsigned()) {
    if (!(value >= 0.0) || std::floor(value) != value)
      throw ConfigError("sweep value " + format_number(value) + " for " + key + " must be a non-negative integer");
    slot = static_cast<std::uint64_t>(value);
  } else {
    slot = value;
  }
}

struct SweepFit {
  std::string kind;
  std::size_t min_points = 2;
};

SweepFit sweep_fit(const std::string& preset, const std::string& axis) {
  if (axis == "eta") return {"stepsize_bias_slope", 3};
  if (axis == "n") return {"excess_risk_slope", 4};
  if (axis == "beta" && preset == "classification-rate") return {"log_metric_beta_correlation", 3};
  return {"log_log_slope", 2};
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& base, const std::string& axis, const std::vector<double>& values,
                      int threads) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  const std::string key = axis_key(base, axis);
  std::vector<ExperimentConfig> cfgs;
  for (double v : values) {
    ExperimentConfig c = base;
    set_axis(c, key, v);
    c.output_dir = base.output_dir + "/" + axis + "=" + format_number(v);
    cfgs.push_back(std::move(c));
  }

  SweepResult out;
  out.runs.resize(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        out.runs[i] = run_experiment(cfgs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::clamp<int>(threads, 1, static_cast<int>(cfgs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  const std::string metric = out.runs.front().metrics.empty() ? "metric" : out.runs.front().metrics.front().first;
  out.table.file = "sweep.csv";
  out.table.header = {axis, metric, "passed", "config_hash"};
  std::vector<double> ys;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const auto& run = out.runs[i];
    const double y = run.metrics.empty() ? std::nan("") : run.metrics.front().second;
    ys.push_back(y);
    out.table.rows.push_back({format_number(values[i]), format_number(y), run.passed() ? "1" : "0", cfgs[i].hash()});
  }

  const auto fit = sweep_fit(base.preset, axis);
  std::string cell;
  if (values.size() < fit.min_points) {
    cell = "insufficient-points";
  } else {
    try {
      if (fit.kind == "stepsize_bias_slope") {
        out.fit_value = fit_stepsize_bias(values, ys).slope;
      } else if (fit.kind == "excess_risk_slope") {
        out.fit_value = excess_risk_rate_fit(values, ys).slope;
      } else {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < values.size(); ++i) {
          if (!(ys[i] > 0.0) || (fit.kind == "log_log_slope" && !(values[i] > 0.0)))
            throw std::invalid_argument("non-positive values");
          lx.push_back(fit.kind == "log_log_slope" ? std::log(values[i]) : values[i]);
          ly.push_back(std::log(ys[i]));
        }
        out.fit_value = fit.kind == "log_log_slope" ? fit_line(lx, ly).slope : correlation(lx, ly);
      }
      out.fit_sufficient = true;
      cell = format_number(out.fit_value);
    } catch (const std::invalid_argument&) {
      cell = "undefined-non-positive-values";
    }
  }
  out.table.rows.push_back({"fit", fit.kind, cell, ""});
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitDiverged = 3;

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("cannot parse sweep value '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct CommonArgs {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  auto* cfg = cmd->add_option("--config", a.config, "JSON experiment config");
  auto* pre = cmd->add_option("--preset", a.preset, "run a preset with its defaults instead of a config file");
  cfg->excludes(pre);
  cmd->add_option("--seed", a.seed, "override the config seed");
  cmd->add_option("--out", a.out, "override the output directory");
}

ExperimentConfig resolve(const CommonArgs& a) {
  if (a.config.empty() && a.preset.empty()) throw ConfigError("either --config or --preset is required");
  ExperimentConfig cfg = a.config.empty() ? default_config(a.preset) : load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (!a.out.empty()) cfg.output_dir = a.out;
  return cfg;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"tmgld: Langevin sampling of transport-map models"};
  app.set_version_flag("--version", kVersion);
  bool list = false;
  int threads = 1;
  app.add_flag("--preset-list", list, "list the available presets and exit");
  app.add_option("--threads", threads, "OpenMP threads for kernels and concurrent sweep runs")
      ->check(CLI::PositiveNumber);

  CommonArgs run_args, sweep_args, audit_args;
  std::string axis, values_text;
  auto* run = app.add_subcommand("run", "run one experiment and write its artifacts");
  add_common(run, run_args);
  auto* sweep = app.add_subcommand("sweep", "run a preset once per value of one parameter");
  add_common(sweep, sweep_args);
  sweep->add_option("--axis", axis, "n, beta, eta, lambda, M or N")->required();
  sweep->add_option("--values", values_text, "comma-separated values")->required();
  auto* audit = app.add_subcommand("audit", "check the modelling assumptions of a preset's objective");
  add_common(audit, audit_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  if (list) {
    for (const auto& p : presets()) {
      std::cout << p.name << "  criteria:";
      if (p.criteria.empty()) std::cout << " none";
      for (int c : p.criteria) std::cout << " " << c;
      std::cout << "\n    " << p.summary << "\n";
    }
    return kExitPass;
  }
  kernels::set_threads(threads);

  try {
    if (*run) {
      const auto cfg = resolve(run_args);
      const auto result = run_experiment(cfg);
      write_artifacts(cfg, result);
      std::cout << format_report(cfg, result);
      std::cout << "artifacts: " << cfg.output_dir << "\n";
      return result.passed() ? kExitPass : kExitFail;
    }
    if (*sweep) {
      const auto base = resolve(sweep_args);
      const auto res = run_sweep(base, axis, parse_values(values_text), threads);
      bool all = true;
      for (std::size_t i = 0; i < res.runs.size(); ++i) {
        ExperimentConfig c = base;
        set_axis(c, axis_key(base, axis), parse_values(values_text)[i]);
        c.output_dir = base.output_dir + "/" + axis + "=" + res.table.rows[i][0];
        write_artifacts(c, res.runs[i]);
        all = all && res.runs[i].passed();
      }
      detail::write_table(base, res.table);
      for (const auto& row : res.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
        std::cout << "\n";
      }
      std::cout << "artifacts: " << base.output_dir << "\n";
      return all ? kExitPass : kExitFail;
    }
    if (*audit) {
      const auto cfg = resolve(audit_args);
      const auto& info = find_preset(cfg.preset);
      if (!info.audit) throw ConfigError("preset " + cfg.preset + " has no supervised objective to audit");
      const auto rep = info.audit(cfg);
      for (const auto& item : rep.items)
        std::cout << item.name << ": " << to_string(item.status) << " (margin " << format_number(item.margin) << ") "
                  << item.detail << "\n";
      return rep.all_checkable_pass() ? kExitPass : kExitFail;
    }
    std::cerr << app.help();
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ExperimentDiverged& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace tmgld::experiments
