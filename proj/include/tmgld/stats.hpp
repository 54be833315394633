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

#ifndef TMGLD_STATS_HPP
#define TMGLD_STATS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace tmgld {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y ~ intercept + slope * x. Requires >= 2 points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);
double correlation(std::span<const double> x, std::span<const double> y);

struct BatchMeans {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_batches = 0;
};

// Batch-means standard error for an autocorrelated series; trailing samples
// that do not fill a batch are dropped.
BatchMeans batch_means(std::span<const double> series, std::size_t n_batches);

/// Streaming accumulator that keeps per-batch sums without storing the series.
class BatchAccumulator {
 public:
  explicit BatchAccumulator(std::size_t batch_size);
  void push(double v);
  BatchMeans result() const;
  std::size_t count() const { return count_; }

 private:
  std::size_t batch_size_;
  std::size_t count_ = 0;
  std::size_t in_batch_ = 0;
  double current_ = 0.0;
  std::vector<double> batch_sums_;
};

}  // namespace tmgld

#endif  // TMGLD_STATS_HPP
