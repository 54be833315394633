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

// Runs every acceptance criterion through its preset with default settings
// and prints one PASS/FAIL line per criterion. Runtime budgets are part of
// the pass condition.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmgld/experiments.hpp"

namespace ex = tmgld::experiments;

namespace {

struct Gate {
  int id;
  std::string preset;
  std::optional<double> budget_seconds;
};

const std::vector<Gate> kGates = {
    {1, "posterior-validate", 120.0}, {2, "ou-moment", 30.0},          {3, "stepsize-bias", 300.0},
    {4, "ergodicity", 120.0},         {5, "grad-check", 60.0},          {6, "lipschitz-suite", std::nullopt},
    {7, "bernstein-suite", std::nullopt}, {8, "correlation-suite", std::nullopt}, {9, "regression-rate", 1200.0},
    {10, "classification-rate", 1200.0},  {11, "finite-width-demo", 120.0},      {12, "regression-rate", std::nullopt},
};

struct Outcome {
  ex::ExperimentResult result;
  double seconds = 0.0;
  std::string error;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string out_root = argc > 1 ? argv[1] : "acceptance_artifacts";
  std::map<std::string, Outcome> runs;
  for (const auto& g : kGates) {
    if (runs.count(g.preset)) continue;
    auto cfg = ex::default_config(g.preset, 1);
    cfg.output_dir = out_root + "/" + g.preset;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o.result = ex::run_experiment(cfg);
      ex::write_artifacts(cfg, o.result);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "[%s finished in %.1f s]\n", g.preset.c_str(), o.seconds);
    runs.emplace(g.preset, std::move(o));
  }

  int failures = 0;
  for (const auto& g : kGates) {
    const auto& o = runs.at(g.preset);
    const ex::Criterion* c = nullptr;
    for (const auto& k : o.result.criteria)
      if (k.id == g.id) c = &k;
    const bool in_budget = !g.budget_seconds || o.seconds <= *g.budget_seconds;
    const bool pass = o.error.empty() && c != nullptr && c->passed && in_budget;
    failures += !pass;
    char timing[96];
    if (g.budget_seconds)
      std::snprintf(timing, sizeof timing, "runtime %.1f s (budget %.0f s)", o.seconds, *g.budget_seconds);
    else
      std::snprintf(timing, sizeof timing, "runtime %.1f s", o.seconds);
    std::cout << "CRITERION " << g.id << ": " << (pass ? "PASS" : "FAIL") << "  [" << g.preset << "] ";
    if (!o.error.empty())
      std::cout << "error: " << o.error;
    else if (c == nullptr)
      std::cout << "criterion not reported";
    else
      std::cout << c->name << "; " << c->measured << " (need " << c->threshold << ")";
    std::cout << "; " << timing << "\n";
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << "\n";
  return failures == 0 ? 0 : 1;
}
