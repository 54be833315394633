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

#include "tmgld/objective.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tmgld {

Coeffs Objective::stochastic_gradient(const Coeffs& coeffs, RngStream&, std::size_t) const {
  return gradient(coeffs);
}

SupervisedObjective::SupervisedObjective(ModelSpec model, BasisPtr basis, Dataset data, LossKind loss, double gamma,
                                         Exec exec)
    : model_(std::move(model)),
      basis_(std::move(basis)),
      data_(std::move(data)),
      loss_(loss),
      gamma_(gamma),
      exec_(exec) {
  if (!basis_) throw std::invalid_argument("SupervisedObjective: null basis");
  if (data_.size() == 0) throw std::invalid_argument("SupervisedObjective: empty dataset");
  if (data_.y.size() != data_.X.rows()) throw std::invalid_argument("SupervisedObjective: X/y size mismatch");
  if (gamma_ < 0.0) throw std::invalid_argument("SupervisedObjective: gamma must be >= 0");
  model_.validate(*basis_);
  if (model_.arch == Architecture::wasserstein)
    throw std::invalid_argument("SupervisedObjective: wasserstein is not a supervised model");
  if (model_.arch == Architecture::identity_map) features_ = basis_->evaluate_rows(data_.X);
}

Eigen::VectorXd SupervisedObjective::predict(const Coeffs& coeffs, const Eigen::MatrixXd& X) const {
  return tmgld::predict(model_, as_map(coeffs), X, exec_);
}

Eigen::VectorXd SupervisedObjective::pointwise_losses(const Coeffs& coeffs) const {
  const Eigen::VectorXd f = model_.arch == Architecture::identity_map
                                ? Eigen::VectorXd(features_ * fractional_power_scale(coeffs, basis_->eigen, gamma_))
                                : predict(coeffs, data_.X);
  Eigen::VectorXd out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) out[i] = loss_value(loss_, data_.y[i], f[i]);
  return out;
}

double SupervisedObjective::value(const Coeffs& coeffs) const { return pointwise_losses(coeffs).mean(); }

double SupervisedObjective::risk_on(const Coeffs& coeffs, const Dataset& data) const {
  const Eigen::VectorXd f = predict(coeffs, data.X);
  double s = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) s += loss_value(loss_, data.y[i], f[i]);
  return s / static_cast<double>(f.size());
}

Coeffs SupervisedObjective::gradient_on(const Coeffs& coeffs, const Dataset& data,
                                        const Eigen::MatrixXd* features) const {
  if (features == nullptr) return tmgld::gradient(model_, as_map(coeffs), data, loss_, exec_);
  const Coeffs eff = fractional_power_scale(coeffs, basis_->eigen, gamma_);
  const Eigen::VectorXd f = *features * eff.col(0);
  Eigen::VectorXd dl(f.size());
  const double inv_n = 1.0 / static_cast<double>(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) dl[i] = inv_n * loss_derivative(loss_, data.y[i], f[i]);
  Coeffs g = features->transpose() * dl;
  return fractional_power_scale(g, basis_->eigen, gamma_);
}

Coeffs SupervisedObjective::gradient(const Coeffs& coeffs) const {
  return gradient_on(coeffs, data_, model_.arch == Architecture::identity_map ? &features_ : nullptr);
}

Coeffs SupervisedObjective::stochastic_gradient(const Coeffs& coeffs, RngStream& rng, std::size_t batch) const {
  const std::size_t n = data_.size();
  if (batch == 0 || batch >= n) return gradient(coeffs);
  // partial Fisher-Yates: first `batch` entries are a uniform subset
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (std::size_t i = 0; i < batch; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  Dataset sub;
  sub.X.resize(static_cast<Eigen::Index>(batch), data_.X.cols());
  sub.y.resize(static_cast<Eigen::Index>(batch));
  Eigen::MatrixXd sub_features;
  if (model_.arch == Architecture::identity_map) sub_features.resize(static_cast<Eigen::Index>(batch), features_.cols());
  for (std::size_t i = 0; i < batch; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    sub.X.row(r) = data_.X.row(idx[i]);
    sub.y[r] = data_.y[idx[i]];
    if (sub_features.size() > 0) sub_features.row(r) = features_.row(idx[i]);
  }
  return gradient_on(coeffs, sub, sub_features.size() > 0 ? &sub_features : nullptr);
}

WassersteinObjective::WassersteinObjective(BasisPtr basis, Eigen::MatrixXd source, Eigen::MatrixXd target,
                                           double penalty, double bandwidth)
    : basis_(std::move(basis)),
      source_(std::move(source)),
      target_(std::move(target)),
      penalty_(penalty),
      bandwidth_(bandwidth) {
  if (!basis_) throw std::invalid_argument("WassersteinObjective: null basis");
  if (source_.rows() == 0 || target_.rows() == 0) throw std::invalid_argument("WassersteinObjective: empty sample");
  if (!(penalty_ > 0.0)) throw std::invalid_argument("WassersteinObjective: penalty must be positive");
  if (basis_->dim_out != static_cast<std::size_t>(source_.cols()))
    throw std::invalid_argument("WassersteinObjective: basis output dimension must match the sample dimension");
  features_ = basis_->evaluate_rows(source_);
}

double WassersteinObjective::value(const Coeffs& coeffs) const {
  return wasserstein_objective_values(source_, pushed(coeffs), target_, penalty_, bandwidth_);
}

Coeffs WassersteinObjective::gradient(const Coeffs& coeffs) const {
  return features_.transpose() *
         wasserstein_objective_point_grad(source_, pushed(coeffs), target_, penalty_, bandwidth_);
}

}  // namespace tmgld
