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

#ifndef TMGLD_OBJECTIVE_HPP
#define TMGLD_OBJECTIVE_HPP

#include <cstddef>
#include <vector>

#include "tmgld/losses.hpp"
#include "tmgld/rng.hpp"
#include "tmgld/spectral.hpp"
#include "tmgld/transport.hpp"

namespace tmgld {

// Scalar risk L(alpha) over mode coefficients, with its gradient. This is
// what the dynamics and the finite-difference oracle consume.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t n_modes() const = 0;
  virtual std::size_t dim_out() const = 0;
  virtual const EigenSequence& eigen() const = 0;

  virtual double value(const Coeffs& coeffs) const = 0;
  virtual Coeffs gradient(const Coeffs& coeffs) const = 0;

  /// Unbiased mini-batch gradient; the default ignores batching.
  virtual Coeffs stochastic_gradient(const Coeffs& coeffs, RngStream& rng, std::size_t batch) const;
};

// Empirical risk of a supervised model on a fixed dataset. For identity_map
// models the feature matrix is cached.
class SupervisedObjective : public Objective {
 public:
  SupervisedObjective(ModelSpec model, BasisPtr basis, Dataset data, LossKind loss, double gamma = 0.0,
                      Exec exec = Exec::parallel);

  std::size_t n_modes() const override { return basis_->n_modes; }
  std::size_t dim_out() const override { return basis_->dim_out; }
  const EigenSequence& eigen() const override { return basis_->eigen; }

  double value(const Coeffs& coeffs) const override;
  Coeffs gradient(const Coeffs& coeffs) const override;
  Coeffs stochastic_gradient(const Coeffs& coeffs, RngStream& rng, std::size_t batch) const override;

  /// Predictions at arbitrary inputs.
  Eigen::VectorXd predict(const Coeffs& coeffs, const Eigen::MatrixXd& X) const;
  /// Mean loss on another dataset (e.g. held-out data).
  double risk_on(const Coeffs& coeffs, const Dataset& data) const;
  /// Per-sample losses on the training data.
  Eigen::VectorXd pointwise_losses(const Coeffs& coeffs) const;

  TransportMap as_map(const Coeffs& coeffs) const { return {coeffs, basis_, gamma_}; }

  const ModelSpec& model() const { return model_; }
  const Dataset& data() const { return data_; }
  const BasisPtr& basis() const { return basis_; }
  LossKind loss() const { return loss_; }
  double gamma() const { return gamma_; }

 private:
  Coeffs gradient_on(const Coeffs& coeffs, const Dataset& data, const Eigen::MatrixXd* features) const;

  ModelSpec model_;
  BasisPtr basis_;
  Dataset data_;
  LossKind loss_;
  double gamma_;
  Exec exec_;
  Eigen::MatrixXd features_;  // identity_map only
};

// Soft-constrained optimal transport: mean |X - W(X)|^2 + penalty MMD^2(W#source, target).
class WassersteinObjective : public Objective {
 public:
  WassersteinObjective(BasisPtr basis, Eigen::MatrixXd source, Eigen::MatrixXd target, double penalty,
                       double bandwidth = 1.0);

  std::size_t n_modes() const override { return basis_->n_modes; }
  std::size_t dim_out() const override { return basis_->dim_out; }
  const EigenSequence& eigen() const override { return basis_->eigen; }

  double value(const Coeffs& coeffs) const override;
  Coeffs gradient(const Coeffs& coeffs) const override;

  Eigen::MatrixXd pushed(const Coeffs& coeffs) const { return features_ * coeffs; }
  const Eigen::MatrixXd& source() const { return source_; }
  const Eigen::MatrixXd& target() const { return target_; }

 private:
  BasisPtr basis_;
  Eigen::MatrixXd source_, target_;
  double penalty_, bandwidth_;
  Eigen::MatrixXd features_;
};

}  // namespace tmgld

#endif  // TMGLD_OBJECTIVE_HPP
