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

#include "tmgld/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmgld {

std::size_t ModelSpec::map_dim_out() const {
  switch (arch) {
    case Architecture::two_layer: return cloud.dim() + 1;
    case Architecture::identity_map: return 1;
    case Architecture::resnet: return cloud.dim() * resnet_blocks;
    case Architecture::wasserstein: return input_dim;
  }
  return 0;
}

void ModelSpec::validate(const SpectralBasis& basis) const {
  if (basis.dim_out != map_dim_out()) throw std::invalid_argument("model/basis mismatch: output dimension");
  switch (arch) {
    case Architecture::two_layer:
    case Architecture::resnet:
      cloud.validate();
      if (basis.kind != BasisKind::gram_eigenbasis ||
          basis.basis_vectors.rows() != static_cast<Eigen::Index>(cloud.size()))
        throw std::invalid_argument("model/cloud mismatch: cloud architectures need a gram basis over the cloud");
      if (!(clip.R >= 1.0)) throw std::invalid_argument("clip radius R must be >= 1");
      if (arch == Architecture::resnet &&
          (resnet_blocks == 0 || resnet_a.size() != resnet_blocks ||
           readout.size() != static_cast<Eigen::Index>(cloud.dim())))
        throw std::invalid_argument("resnet: block parameters inconsistent with block count");
      break;
    case Architecture::identity_map:
    case Architecture::wasserstein:
      if (basis.kind == BasisKind::synthetic_diagonal)
        throw std::invalid_argument("identity/wasserstein models need a basis with point evaluation");
      if (basis.dim_in != input_dim) throw std::invalid_argument("model/basis mismatch: input dimension");
      break;
  }
}

ModelSpec make_two_layer_model(ParticleCloud cloud, ClipConfig clip) {
  cloud.validate();
  ModelSpec m;
  m.arch = Architecture::two_layer;
  m.input_dim = cloud.dim();
  m.cloud = std::move(cloud);
  m.clip = clip;
  return m;
}

ModelSpec make_identity_model(std::size_t input_dim) {
  ModelSpec m;
  m.arch = Architecture::identity_map;
  m.input_dim = input_dim;
  return m;
}

ModelSpec make_wasserstein_model(std::size_t dim) {
  ModelSpec m;
  m.arch = Architecture::wasserstein;
  m.input_dim = dim;
  return m;
}

ModelSpec make_resnet_model(ParticleCloud cloud, ClipConfig clip, std::size_t blocks, RngStream& rng,
                            double a_scale) {
  cloud.validate();
  if (blocks == 0) throw std::invalid_argument("make_resnet_model: need >= 1 block");
  ModelSpec m;
  m.arch = Architecture::resnet;
  m.input_dim = cloud.dim();
  m.resnet_blocks = blocks;
  const auto M = static_cast<Eigen::Index>(cloud.size());
  const auto d = static_cast<Eigen::Index>(cloud.dim());
  const double scale = a_scale / std::sqrt(static_cast<double>(d));
  for (std::size_t t = 0; t < blocks; ++t) {
    Eigen::MatrixXd A(M, d);
    rng.fill_normal(A);
    m.resnet_a.push_back(scale * A);
  }
  m.readout.resize(d);
  rng.fill_normal(m.readout);
  m.readout /= std::sqrt(static_cast<double>(d));
  m.cloud = std::move(cloud);
  m.clip = clip;
  return m;
}

Coeffs identity_coeffs(const ModelSpec& model, const SpectralBasis& basis) {
  model.validate(basis);
  switch (model.arch) {
    case Architecture::two_layer: {
      // W(w, a) = (w, a)
      return basis.project_values(model.cloud.joint_points());
    }
    case Architecture::resnet: {
      const auto d = static_cast<Eigen::Index>(model.cloud.dim());
      Eigen::MatrixXd values(model.cloud.w.rows(), d * static_cast<Eigen::Index>(model.resnet_blocks));
      for (std::size_t t = 0; t < model.resnet_blocks; ++t)
        values.middleCols(static_cast<Eigen::Index>(t) * d, d) = model.cloud.w;
      return basis.project_values(values);
    }
    case Architecture::wasserstein:
      if (basis.kind == BasisKind::gram_eigenbasis) return basis.project_values(basis.nodes);
      throw std::invalid_argument("identity_coeffs: wasserstein identity needs a gram basis");
    case Architecture::identity_map:
      break;
  }
  return Coeffs::Zero(static_cast<Eigen::Index>(basis.n_modes), static_cast<Eigen::Index>(basis.dim_out));
}

Eigen::MatrixXd map_values_at_cloud(const TransportMap& W) {
  if (W.basis->kind != BasisKind::gram_eigenbasis)
    throw std::invalid_argument("map_values_at_cloud: gram basis required");
  return W.basis->basis_vectors * W.effective_coeffs();
}

namespace {

kernels::TwoLayerArgs two_layer_args(const ModelSpec& model, const Eigen::MatrixXd& values) {
  return {values, model.cloud.weights, model.clip.R, model.clip.activation};
}

kernels::ResNetArgs resnet_args(const ModelSpec& model, const Eigen::MatrixXd& values) {
  return {values, model.cloud.weights, model.resnet_a, model.readout, model.clip.R, model.clip.activation};
}

}  // namespace

double forward(const ModelSpec& model, const TransportMap& W, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != model.input_dim) throw std::invalid_argument("forward: input dimension");
  Eigen::MatrixXd X = x.transpose();
  if (model.arch == Architecture::wasserstein)
    throw std::invalid_argument("forward: wasserstein maps are vector valued, use forward_vector");
  return predict(model, W, X, Exec::serial)[0];
}

Eigen::VectorXd forward_vector(const ModelSpec& model, const TransportMap& W, const Eigen::VectorXd& x) {
  if (model.arch != Architecture::wasserstein && model.arch != Architecture::identity_map)
    throw std::invalid_argument("forward_vector: only wasserstein and identity_map maps are vector valued");
  return W.effective_coeffs().transpose() * W.basis->evaluate(x);
}

Eigen::VectorXd predict(const ModelSpec& model, const TransportMap& W, const Eigen::MatrixXd& X, Exec exec) {
  model.validate(*W.basis);
  switch (model.arch) {
    case Architecture::two_layer: {
      const Eigen::MatrixXd values = map_values_at_cloud(W);
      return kernels::two_layer_forward(exec, two_layer_args(model, values), X);
    }
    case Architecture::resnet: {
      const Eigen::MatrixXd values = map_values_at_cloud(W);
      return kernels::resnet_forward(exec, resnet_args(model, values), X);
    }
    case Architecture::identity_map:
      return W.basis->evaluate_rows(X) * W.effective_coeffs().col(0);
    case Architecture::wasserstein:
      break;
  }
  throw std::invalid_argument("predict: wasserstein maps have no scalar prediction");
}

double empirical_risk(const ModelSpec& model, const TransportMap& W, const Dataset& data, LossKind loss, Exec exec) {
  if (data.size() == 0) throw std::invalid_argument("empirical_risk: empty dataset");
  const Eigen::VectorXd f = predict(model, W, data.X, exec);
  double s = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) s += loss_value(loss, data.y[i], f[i]);
  return s / static_cast<double>(f.size());
}

Coeffs gradient(const ModelSpec& model, const TransportMap& W, const Dataset& data, LossKind loss, Exec exec) {
  if (data.size() == 0) throw std::invalid_argument("gradient: empty dataset");
  model.validate(*W.basis);
  const Eigen::VectorXd f = predict(model, W, data.X, exec);
  const double inv_n = 1.0 / static_cast<double>(data.size());
  Eigen::VectorXd dl(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) dl[i] = inv_n * loss_derivative(loss, data.y[i], f[i]);

  Coeffs g_eff;
  switch (model.arch) {
    case Architecture::two_layer: {
      const Eigen::MatrixXd values = map_values_at_cloud(W);
      g_eff = W.basis->basis_vectors.transpose() *
              kernels::two_layer_value_grad(exec, two_layer_args(model, values), data.X, dl);
      break;
    }
    case Architecture::resnet: {
      const Eigen::MatrixXd values = map_values_at_cloud(W);
      g_eff = W.basis->basis_vectors.transpose() *
              kernels::resnet_value_grad(exec, resnet_args(model, values), data.X, dl);
      break;
    }
    case Architecture::identity_map:
      g_eff = W.basis->evaluate_rows(data.X).transpose() * dl;
      break;
    case Architecture::wasserstein:
      throw std::invalid_argument("gradient: use the wasserstein objective for transport problems");
  }
  // d/d alpha of f(T^{gamma/2} alpha) = T^{gamma/2} grad
  return fractional_power_scale(g_eff, W.basis->eigen, W.gamma);
}

LipschitzGap lipschitz_gap(const ModelSpec& model, const TransportMap& W, const TransportMap& W_other,
                           const Eigen::MatrixXd& x_grid) {
  if (model.arch != Architecture::two_layer) throw std::invalid_argument("lipschitz_gap: two-layer model required");
  const double D = model.clip.input_bound_D;
  for (Eigen::Index i = 0; i < x_grid.rows(); ++i)
    if (x_grid.row(i).norm() > D * (1.0 + 1e-12)) throw std::invalid_argument("lipschitz_gap: grid leaves the D-ball");
  const Eigen::VectorXd f = predict(model, W, x_grid);
  const Eigen::VectorXd g = predict(model, W_other, x_grid);
  const Eigen::MatrixXd diff = map_values_at_cloud(W) - map_values_at_cloud(W_other);
  double l2 = 0.0;
  for (Eigen::Index m = 0; m < diff.rows(); ++m) l2 += model.cloud.weights[m] * diff.row(m).squaredNorm();
  LipschitzGap gap;
  gap.lhs = (f - g).cwiseAbs().maxCoeff();
  gap.rhs = (1.0 + model.clip.R * D) * std::sqrt(l2);
  return gap;
}

double kernel_discrepancy(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q, double bandwidth) {
  auto mean_kernel = [bandwidth](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      for (Eigen::Index j = 0; j < B.rows(); ++j)
        s += std::exp(-(A.row(i) - B.row(j)).squaredNorm() / (2.0 * bandwidth * bandwidth));
    return s / static_cast<double>(A.rows() * B.rows());
  };
  return mean_kernel(P, P) + mean_kernel(Q, Q) - 2.0 * mean_kernel(P, Q);
}

double wasserstein_objective_values(const Eigen::MatrixXd& source, const Eigen::MatrixXd& pushed,
                                    const Eigen::MatrixXd& target, double penalty, double bandwidth) {
  if (source.rows() == 0 || target.rows() == 0) throw std::invalid_argument("wasserstein_objective: empty sample");
  if (pushed.rows() != source.rows() || pushed.cols() != source.cols())
    throw std::invalid_argument("wasserstein_objective: pushed sample shape mismatch");
  const double displacement = (source - pushed).rowwise().squaredNorm().mean();
  return displacement + penalty * kernel_discrepancy(pushed, target, bandwidth);
}

Eigen::MatrixXd wasserstein_objective_point_grad(const Eigen::MatrixXd& source, const Eigen::MatrixXd& pushed,
                                                 const Eigen::MatrixXd& target, double penalty, double bandwidth) {
  const auto n = static_cast<double>(pushed.rows());
  const auto m = static_cast<double>(target.rows());
  const double h2 = bandwidth * bandwidth;
  Eigen::MatrixXd g = -2.0 / n * (source - pushed);
  for (Eigen::Index i = 0; i < pushed.rows(); ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(pushed.cols());
    // d/du k(u, v) = -(u - v) k(u, v) / h^2
    for (Eigen::Index j = 0; j < pushed.rows(); ++j) {
      const Eigen::RowVectorXd diff = pushed.row(i) - pushed.row(j);
      acc -= 2.0 / (n * n) * diff * std::exp(-diff.squaredNorm() / (2.0 * h2)) / h2;
    }
    for (Eigen::Index j = 0; j < target.rows(); ++j) {
      const Eigen::RowVectorXd diff = pushed.row(i) - target.row(j);
      acc += 2.0 / (n * m) * diff * std::exp(-diff.squaredNorm() / (2.0 * h2)) / h2;
    }
    g.row(i) += penalty * acc;
  }
  return g;
}

double wasserstein_objective(const ModelSpec& model, const TransportMap& W, const Eigen::MatrixXd& source,
                             const Eigen::MatrixXd& target, double penalty, double bandwidth) {
  if (model.arch != Architecture::wasserstein) throw std::invalid_argument("wasserstein_objective: wrong model");
  const Eigen::MatrixXd pushed = W.basis->evaluate_rows(source) * W.effective_coeffs();
  return wasserstein_objective_values(source, pushed, target, penalty, bandwidth);
}

}  // namespace tmgld
