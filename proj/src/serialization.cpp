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

#include "tmgld/serialization.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace tmgld {

using nlohmann::json;

namespace {

template <typename Derived>
json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = m;
  std::vector<Scalar> flat(dense.data(), dense.data() + dense.size());
  return {{"rows", dense.rows()}, {"cols", dense.cols()}, {"col_major", flat}};
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto flat = j.at("col_major").get<std::vector<Scalar>>();
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols) throw std::invalid_argument("matrix size mismatch");
  return Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(flat.data(), rows, cols);
}

Eigen::VectorXd vector_from_json(const json& j) { return matrix_from_json<double>(j).reshaped(); }

json double_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double double_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>(); }

json cloud_json(const ParticleCloud& c) {
  return {{"w", matrix_to_json(c.w)},
          {"a", matrix_to_json(c.a)},
          {"weights", matrix_to_json(c.weights)},
          {"mode", c.mode == CloudMode::finite_width ? "finite_width" : "monte_carlo"}};
}

ParticleCloud cloud_from(const json& j) {
  ParticleCloud c;
  c.w = matrix_from_json<double>(j.at("w"));
  c.a = vector_from_json(j.at("a"));
  c.weights = vector_from_json(j.at("weights"));
  const auto mode = j.at("mode").get<std::string>();
  if (mode == "finite_width") c.mode = CloudMode::finite_width;
  else if (mode == "monte_carlo") c.mode = CloudMode::monte_carlo;
  else throw std::invalid_argument("unknown cloud mode '" + mode + "'");
  c.validate();
  return c;
}

const char* basis_kind_name(BasisKind k) {
  switch (k) {
    case BasisKind::synthetic_diagonal: return "synthetic_diagonal";
    case BasisKind::gram_eigenbasis: return "gram_eigenbasis";
    case BasisKind::cosine_tensor: return "cosine_tensor";
  }
  return "?";
}

json basis_json(const SpectralBasis& b) {
  return {{"kind", basis_kind_name(b.kind)},
          {"dim_in", b.dim_in},
          {"dim_out", b.dim_out},
          {"n_modes", b.n_modes},
          {"mu", matrix_to_json(b.eigen.mu)},
          {"c_mu", b.eigen.c_mu},
          {"decay_exponent", b.eigen.decay_exponent},
          {"basis_vectors", matrix_to_json(b.basis_vectors)},
          {"nodes", matrix_to_json(b.nodes)},
          {"node_weights", matrix_to_json(b.node_weights)},
          {"bandwidth", b.bandwidth},
          {"usable_rank", b.usable_rank},
          {"frequencies", matrix_to_json(b.frequencies)}};
}

SpectralBasis basis_from(const json& j) {
  SpectralBasis b;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "synthetic_diagonal") b.kind = BasisKind::synthetic_diagonal;
  else if (kind == "gram_eigenbasis") b.kind = BasisKind::gram_eigenbasis;
  else if (kind == "cosine_tensor") b.kind = BasisKind::cosine_tensor;
  else throw std::invalid_argument("unknown basis kind '" + kind + "'");
  b.dim_in = j.at("dim_in");
  b.dim_out = j.at("dim_out");
  b.n_modes = j.at("n_modes");
  b.eigen.mu = vector_from_json(j.at("mu"));
  b.eigen.c_mu = j.at("c_mu");
  b.eigen.decay_exponent = j.at("decay_exponent");
  b.basis_vectors = matrix_from_json<double>(j.at("basis_vectors"));
  b.nodes = matrix_from_json<double>(j.at("nodes"));
  b.node_weights = vector_from_json(j.at("node_weights"));
  b.bandwidth = j.at("bandwidth");
  b.usable_rank = j.at("usable_rank");
  b.frequencies = matrix_from_json<int>(j.at("frequencies"));
  if (static_cast<std::size_t>(b.eigen.mu.size()) != b.n_modes) throw std::invalid_argument("basis: mu size mismatch");
  return b;
}

const char* arch_name(Architecture a) {
  switch (a) {
    case Architecture::two_layer: return "two_layer";
    case Architecture::identity_map: return "identity_map";
    case Architecture::resnet: return "resnet";
    case Architecture::wasserstein: return "wasserstein";
  }
  return "?";
}

json model_json(const ModelSpec& m) {
  json blocks = json::array();
  for (const auto& a : m.resnet_a) blocks.push_back(matrix_to_json(a));
  return {{"arch", arch_name(m.arch)},
          {"cloud", cloud_json(m.cloud)},
          {"clip",
           {{"R", double_or_null(m.clip.R)},
            {"activation", m.clip.activation == Activation::tanh ? "tanh" : "smoothed_relu"},
            {"input_bound_D", m.clip.input_bound_D}}},
          {"input_dim", m.input_dim},
          {"resnet_blocks", m.resnet_blocks},
          {"resnet_a", blocks},
          {"readout", matrix_to_json(m.readout)}};
}

ModelSpec model_from(const json& j) {
  ModelSpec m;
  const auto arch = j.at("arch").get<std::string>();
  if (arch == "two_layer") m.arch = Architecture::two_layer;
  else if (arch == "identity_map") m.arch = Architecture::identity_map;
  else if (arch == "resnet") m.arch = Architecture::resnet;
  else if (arch == "wasserstein") m.arch = Architecture::wasserstein;
  else throw std::invalid_argument("unknown architecture '" + arch + "'");
  if (m.arch == Architecture::two_layer || m.arch == Architecture::resnet) m.cloud = cloud_from(j.at("cloud"));
  const auto& c = j.at("clip");
  m.clip.R = double_from(c.at("R"));
  const auto act = c.at("activation").get<std::string>();
  if (act == "tanh") m.clip.activation = Activation::tanh;
  else if (act == "smoothed_relu") m.clip.activation = Activation::smoothed_relu;
  else throw std::invalid_argument("unknown activation '" + act + "'");
  m.clip.input_bound_D = c.at("input_bound_D");
  m.input_dim = j.at("input_dim");
  m.resnet_blocks = j.at("resnet_blocks");
  for (const auto& a : j.at("resnet_a")) m.resnet_a.push_back(matrix_from_json<double>(a));
  m.readout = vector_from_json(j.at("readout"));
  return m;
}

json parse(std::istream& is, const char* what) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
  if (j.value("version", -1) != kSerializationVersion)
    throw std::invalid_argument(std::string(what) + ": unsupported version");
  return j;
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

void emit(std::ostream& os, json body) {
  body["version"] = kSerializationVersion;
  os << body.dump(1) << '\n';
}

}  // namespace

void write_cloud(std::ostream& os, const ParticleCloud& cloud) { emit(os, {{"cloud", cloud_json(cloud)}}); }

ParticleCloud read_cloud(std::istream& is) {
  const json j = parse(is, "cloud");
  return guarded("cloud", [&] { return cloud_from(j.at("cloud")); });
}

void write_basis(std::ostream& os, const SpectralBasis& basis) { emit(os, {{"basis", basis_json(basis)}}); }

SpectralBasis read_basis(std::istream& is) {
  const json j = parse(is, "basis");
  return guarded("basis", [&] { return basis_from(j.at("basis")); });
}

void write_model(std::ostream& os, const ModelSpec& model) { emit(os, {{"model", model_json(model)}}); }

ModelSpec read_model(std::istream& is) {
  const json j = parse(is, "model");
  return guarded("model", [&] { return model_from(j.at("model")); });
}

void write_map(std::ostream& os, const TransportMap& map) {
  if (!map.basis) throw std::invalid_argument("write_map: map has no basis");
  emit(os, {{"coeffs", matrix_to_json(map.coeffs)}, {"gamma", map.gamma}, {"basis", basis_json(*map.basis)}});
}

TransportMap read_map(std::istream& is) {
  const json j = parse(is, "map");
  return guarded("map", [&] {
    TransportMap m;
    m.coeffs = matrix_from_json<double>(j.at("coeffs"));
    m.gamma = j.at("gamma");
    m.basis = std::make_shared<const SpectralBasis>(basis_from(j.at("basis")));
    if (static_cast<std::size_t>(m.coeffs.rows()) != m.basis->n_modes)
      throw std::invalid_argument("map: coefficient rows do not match the basis");
    return m;
  });
}

}  // namespace tmgld
