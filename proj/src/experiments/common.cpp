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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <Eigen/Core>

#include "internal.hpp"

namespace tmgld::experiments {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool ExperimentResult::passed() const {
  for (const auto& c : criteria)
    if (!c.passed) return false;
  return true;
}

double ExperimentResult::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  throw std::out_of_range("no metric named " + name);
}

namespace {

std::string compiler_id() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

std::string eigen_version() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

json provenance(const ExperimentConfig& cfg) {
  return {{"preset", cfg.preset},
          {"seed", cfg.seed},
          {"config_hash", cfg.hash()},
          {"tmgld_version", kVersion},
          {"eigen_version", eigen_version()},
          {"compiler", compiler_id()},
          {"params", cfg.params.tree()}};
}

}  // namespace

std::string format_report(const ExperimentConfig& cfg, const ExperimentResult& result) {
  std::ostringstream os;
  os << "preset: " << result.preset << "\n\n";
  for (const auto& c : result.criteria) {
    if (c.id > 0)
      os << "CRITERION " << c.id << " ";
    else
      os << "CHECK ";
    os << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "\n";
    os << "    measured:  " << c.measured << "\n";
    os << "    threshold: " << c.threshold << "\n";
  }
  if (!result.notes.empty()) {
    os << "\nnotes:\n";
    for (const auto& n : result.notes) os << "  - " << n << "\n";
  }
  os << "\nprovenance:\n";
  os << "  seed: " << cfg.seed << "\n";
  os << "  config_hash: " << cfg.hash() << "\n";
  os << "  tmgld_version: " << kVersion << "\n";
  os << "  eigen_version: " << eigen_version() << "\n";
  os << "  compiler: " << compiler_id() << "\n";
  os << "\noverall: " << (result.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

void write_artifacts(const ExperimentConfig& cfg, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  for (const auto& t : result.tables) detail::write_table(cfg, t);
  {
    std::ofstream out(dir / "report.txt", std::ios::binary);
    out << format_report(cfg, result);
  }
  {
    std::ofstream out(dir / "provenance.json", std::ios::binary);
    out << provenance(cfg).dump(2) << "\n";
  }
}

namespace detail {

void write_table(const ExperimentConfig& cfg, const Table& t) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  std::ofstream out(dir / t.file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / t.file).string());
  out << "# preset=" << cfg.preset << " seed=" << cfg.seed << " config_hash=" << cfg.hash() << " version=" << kVersion
      << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

Criterion criterion(int id, std::string name, bool passed, std::string measured, std::string threshold) {
  return {id, std::move(name), passed, std::move(measured), std::move(threshold)};
}

Table& add_table(ExperimentResult& result, std::string file, std::vector<std::string> header) {
  result.tables.push_back({std::move(file), std::move(header), {}});
  return result.tables.back();
}

DynamicsConfig dynamics_from(const Params& p) {
  DynamicsConfig d;
  if (p.has("dynamics.eta")) d.eta = p.num("dynamics.eta");
  if (p.has("dynamics.beta")) d.beta = p.num("dynamics.beta");
  if (p.has("dynamics.lambda")) d.lambda = p.num("dynamics.lambda");
  if (p.has("dynamics.n_modes")) d.n_modes = p.count("dynamics.n_modes");
  if (p.has("dynamics.steps")) d.steps = p.count("dynamics.steps");
  if (p.has("dynamics.burn_in")) d.burn_in = p.count("dynamics.burn_in");
  if (p.has("dynamics.thin")) d.thin = p.count("dynamics.thin");
  if (p.has("dynamics.batch_size")) d.batch_size = p.count("dynamics.batch_size");
  return d;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  return mix_seed(mix_seed(seed, purpose), index);
}

BasisPtr cosine_basis(std::size_t n_modes, std::size_t dim_in, double c_mu) {
  return std::make_shared<const SpectralBasis>(make_cosine_basis(dim_in, 1, make_eigen_sequence(c_mu, 2.0, n_modes)));
}

Eigen::MatrixXd ball_points(std::size_t n, std::size_t d, double radius, RngStream& rng) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  rng.fill_normal(X);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    X.row(i) *= r / X.row(i).norm();
  }
  return X;
}

Eigen::MatrixXd polar_grid(std::size_t radii, std::size_t angles, double D) {
  Eigen::MatrixXd grid(static_cast<Eigen::Index>(radii * angles), 2);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < radii; ++i) {
    const double r = D * static_cast<double>(i + 1) / static_cast<double>(radii);
    for (std::size_t j = 0; j < angles; ++j) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angles);
      grid.row(row++) << r * std::cos(t), r * std::sin(t);
    }
  }
  return grid;
}

Coeffs perturbation(const Coeffs& like, double scale, RngStream& rng) {
  Coeffs p(like.rows(), like.cols());
  rng.fill_normal(p);
  return p * (scale / p.norm());
}

TwoLayerSetup two_layer_setup(std::size_t M, std::size_t d, std::size_t n_modes, double bandwidth, double R, double D,
                              RngStream& rng) {
  ParticleCloud cloud = sample_cloud(M, d, rng);
  ClipConfig clip;
  clip.R = R;
  clip.input_bound_D = D;
  TwoLayerSetup s;
  s.basis = std::make_shared<const SpectralBasis>(gram_eigenbasis(cloud, bandwidth, n_modes, d + 1));
  s.model = make_two_layer_model(std::move(cloud), clip);
  s.identity = identity_coeffs(s.model, *s.basis);
  return s;
}

Eigen::VectorXd bounded_noise(std::size_t n, double C, RngStream& rng) {
  Eigen::VectorXd e(static_cast<Eigen::Index>(n));
  for (auto& v : e) v = rng.uniform(-C, C);
  return e;
}

double rel_error(const Coeffs& a, const Coeffs& b) {
  const double denom = std::max({a.norm(), b.norm(), 1e-12});
  return (a - b).norm() / denom;
}

}  // namespace detail

}  // namespace tmgld::experiments
