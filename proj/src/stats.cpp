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

#include "tmgld/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace tmgld {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 paired points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss_res += r * r;
  }
  // a perfectly flat series is fit exactly
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double e : v) s += e;
  return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double e : v) s += (e - m) * (e - m);
  return s / static_cast<double>(v.size() - 1);
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation: need >= 2 paired points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

BatchMeans batch_means(std::span<const double> series, std::size_t n_batches) {
  if (n_batches < 2) throw std::invalid_argument("batch_means: need >= 2 batches");
  const std::size_t size = series.size() / n_batches;
  if (size == 0) throw std::invalid_argument("batch_means: series shorter than batch count");
  std::vector<double> means(n_batches);
  for (std::size_t b = 0; b < n_batches; ++b) means[b] = mean(series.subspan(b * size, size));
  BatchMeans out;
  out.mean = mean(means);
  out.std_error = std::sqrt(sample_variance(means) / static_cast<double>(n_batches));
  out.n_batches = n_batches;
  return out;
}

BatchAccumulator::BatchAccumulator(std::size_t batch_size) : batch_size_(batch_size) {
  if (batch_size_ == 0) throw std::invalid_argument("BatchAccumulator: batch size must be positive");
}

void BatchAccumulator::push(double v) {
  current_ += v;
  ++count_;
  if (++in_batch_ == batch_size_) {
    batch_sums_.push_back(current_);
    current_ = 0.0;
    in_batch_ = 0;
  }
}

BatchMeans BatchAccumulator::result() const {
  std::vector<double> means;
  means.reserve(batch_sums_.size());
  for (double s : batch_sums_) means.push_back(s / static_cast<double>(batch_size_));
  BatchMeans out;
  out.n_batches = means.size();
  out.mean = mean(means);
  out.std_error = means.size() >= 2 ? std::sqrt(sample_variance(means) / static_cast<double>(means.size())) : 0.0;
  return out;
}

}  // namespace tmgld
