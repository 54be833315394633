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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tmgld/experiments.hpp"

using namespace tmgld::experiments;
namespace fs = std::filesystem;

namespace {

struct Captured {
  int code = 0;
  std::string out, err;
};

Captured cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tmgld");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  Captured c;
  c.code = cli_main(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  c.out = out.str();
  c.err = err.str();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("cli_test_out") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("every preset has defaults that parse and hash") {
  CHECK(presets().size() == 12);
  for (const auto& p : presets()) {
    const auto cfg = default_config(p.name);
    CHECK(cfg.hash().size() == 16);
    CHECK(parse_config("{\"preset\": \"" + p.name + "\"}").hash() == cfg.hash());
  }
}

TEST_CASE("config hash ignores the output directory and tracks seed and overrides") {
  auto a = parse_config(R"({"preset": "bernstein-suite", "seed": 4, "output_dir": "x"})");
  auto b = parse_config(R"({"preset": "bernstein-suite", "seed": 4, "output_dir": "y"})");
  auto c = parse_config(R"({"preset": "bernstein-suite", "seed": 5})");
  auto d = parse_config(R"({"preset": "bernstein-suite", "seed": 4, "overrides": {"experiment": {"step": 0.01}}})");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash() != d.hash());
  CHECK(d.params.num("experiment.step") == 0.01);
}

TEST_CASE("unknown override keys are rejected with a location") {
  const std::string text = "{\n  \"preset\": \"bernstein-suite\",\n  \"overrides\": {\n    \"experiment\": {\"stepp\": 0.01}\n  }\n}\n";
  try {
    parse_config(text, "cfg.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("experiment.stepp") != std::string::npos);
    CHECK(e.line() == 4);
    CHECK(e.column() == 20);
  }
  CHECK_THROWS_AS(parse_config(R"({"preset": "bernstein-suite", "overrides": {"solver": {}}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"preset": "bernstein-suite", "sed": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"preset": "no-such-preset"})"), ConfigError);
}

TEST_CASE("type mismatches and syntax errors are config errors") {
  CHECK_THROWS_AS(parse_config(R"({"preset": "bernstein-suite", "overrides": {"experiment": {"step": "big"}}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"preset": "grad-check", "overrides": {"experiment": {"configs": 2.5}}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"preset": "bernstein-suite", "seed": -1})"), ConfigError);
  try {
    parse_config("{\n  \"preset\": \"bernstein-suite\",\n  \"seed\": 1,,\n}", "bad.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
  }
}

TEST_CASE("same seed reproduces every artifact byte for byte") {
  const auto dir = scratch("determinism");
  REQUIRE(cli({"run", "--preset", "correlation-suite", "--out", (dir / "a").string()}).code == 0);
  REQUIRE(cli({"run", "--preset", "correlation-suite", "--out", (dir / "b").string()}).code == 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    CHECK(slurp(entry.path()) == slurp(dir / "b" / name));
    ++compared;
  }
  CHECK(compared == 3);  // correlation.csv, report.txt, provenance.json
  const auto csv = slurp(dir / "a" / "correlation.csv");
  CHECK(csv.rfind("# preset=correlation-suite seed=1 config_hash=", 0) == 0);
  const auto report = slurp(dir / "a" / "report.txt");
  CHECK(report.find("CRITERION 8 PASS") != std::string::npos);
  CHECK(report.find("config_hash: " + default_config("correlation-suite").hash()) != std::string::npos);

  REQUIRE(cli({"run", "--preset", "correlation-suite", "--seed", "2", "--out", (dir / "c").string()}).code == 0);
  CHECK(slurp(dir / "c" / "correlation.csv") != csv);
}

TEST_CASE("bad key exits with status 2 and names the key") {
  const auto dir = scratch("badkey");
  const auto cfg = write_config(dir, R"({"preset": "bernstein-suite", "overrides": {"experiment": {"Rz": [1.0]}}})");
  const auto r = cli({"run", "--config", cfg.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("experiment.Rz") != std::string::npos);
  CHECK(cli({"run"}).code == 2);
  CHECK(cli({"run", "--config", (dir / "missing.json").string()}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
}

TEST_CASE("divergence exits with status 3") {
  const auto dir = scratch("diverge");
  const auto cfg = write_config(
      dir, R"({"preset": "posterior-validate", "output_dir": ")" + (dir / "out").string() +
               R"(", "overrides": {"dynamics": {"eta": 5.0, "beta": 50.0, "steps": 2000, "burn_in": 100}}})");
  const auto r = cli({"run", "--config", cfg.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("last finite state") != std::string::npos);
}

TEST_CASE("failing criteria exit with status 1") {
  const auto dir = scratch("fail");
  // a 1e-30 tolerance cannot be met by finite differences
  const auto cfg = write_config(
      dir, R"({"preset": "grad-check", "output_dir": ")" + (dir / "out").string() +
               R"(", "overrides": {"experiment": {"configs": 3, "tol": 1e-30}}})");
  const auto r = cli({"run", "--config", cfg.string()});
  CHECK(r.code == 1);
  CHECK(slurp(dir / "out" / "report.txt").find("CRITERION 5 FAIL") != std::string::npos);
}

TEST_CASE("preset list and audit") {
  const auto r = cli({"--preset-list"});
  CHECK(r.code == 0);
  CHECK(r.out.find("regression-rate") != std::string::npos);
  const auto a = cli({"audit", "--preset", "classification-rate"});
  CHECK(a.code == 0);
  CHECK(a.out.find("strong low noise: pass") != std::string::npos);
  CHECK(a.out.find("not machine-checkable") != std::string::npos);
  CHECK(cli({"audit", "--preset", "bernstein-suite"}).code == 2);
}

TEST_CASE("single-value sweep equals a run plus an insufficient-points fit row") {
  const auto dir = scratch("sweep1");
  const auto s = cli({"sweep", "--preset", "wasserstein-demo", "--axis", "N", "--values", "10", "--out",
                      (dir / "sweep").string()});
  REQUIRE(s.code == 0);
  const auto sweep_csv = slurp(dir / "sweep" / "sweep.csv");
  CHECK(sweep_csv.find("fit,log_log_slope,insufficient-points") != std::string::npos);

  const auto cfg = write_config(dir, R"({"preset": "wasserstein-demo", "output_dir": ")" + (dir / "run").string() +
                                         R"(", "overrides": {"model": {"n_modes": 10}}})");
  REQUIRE(cli({"run", "--config", cfg.string()}).code == 0);
  CHECK(slurp(dir / "sweep" / "N=10" / "transport.csv") == slurp(dir / "run" / "transport.csv"));
  CHECK(slurp(dir / "sweep" / "N=10" / "report.txt") == slurp(dir / "run" / "report.txt"));
}

TEST_CASE("eta sweep appends a step-size bias slope") {
  auto base = default_config("stepsize-bias");
  base.params.tree()["experiment"]["horizon"] = 2000.0;
  const auto res = run_sweep(base, "eta", {0.2, 0.1, 0.05}, 2);
  REQUIRE(res.runs.size() == 3);
  CHECK(res.fit_sufficient);
  CHECK(res.table.rows.size() == 4);
  CHECK(res.table.rows.back()[1] == "stepsize_bias_slope");
  CHECK(res.fit_value > 0.0);
  // concurrency does not change results
  const auto serial = run_sweep(base, "eta", {0.2, 0.1, 0.05}, 1);
  CHECK(serial.table.rows == res.table.rows);
}

TEST_CASE("sweep rejects axes a preset does not have") {
  CHECK_THROWS_AS(run_sweep(default_config("bernstein-suite"), "eta", {0.1}), ConfigError);
  CHECK_THROWS_AS(run_sweep(default_config("stepsize-bias"), "temperature", {0.1}), ConfigError);
  CHECK_THROWS_AS(run_sweep(default_config("wasserstein-demo"), "N", {2.5}), ConfigError);
}
