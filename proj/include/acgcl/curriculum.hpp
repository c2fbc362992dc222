/*
 * Copyright 2026 The ACGCL Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace acgcl {

struct PacingConfig {
  double theta0 = 15.0;          // percent points
  double max_difficulty = 50.0;  // M, percent points
  double ramp_epochs = 1.0;      // T

  void validate() const;
};

// min(1, theta0/M + (1 - theta0/M) t/T) * M
double pacing_theta(double t, const PacingConfig& config);

enum class WeightMode { spl, hard_acl, soft_acl, uniform };

WeightMode parse_weight_mode(std::string_view name);
std::string_view to_string(WeightMode mode);

struct AclThresholds {
  double lambda1 = 1.0;  // upper
  double lambda2 = 0.0;  // lower
  double eta1 = 1.05;    // > 1
  double eta2 = 0.95;    // in (0, 1)

  void validate() const;
};

struct SampleWeights {
  WeightMode mode = WeightMode::uniform;
  std::vector<double> values;
};

// 1 if L < lambda, else 0.
SampleWeights spl_weights(std::span<const double> losses, double lambda);
// 1 if lambda2 < L < lambda1, else 0.
SampleWeights hard_acl_weights(std::span<const double> losses, const AclThresholds& t);
// 1 if lambda2 <= L < lambda1; L / lambda2 if L < lambda2; else 0.
SampleWeights soft_acl_weights(std::span<const double> losses, const AclThresholds& t);
SampleWeights uniform_weights(std::size_t n);

// SPL uses lambda1 as its threshold.
SampleWeights compute_weights(WeightMode mode, std::span<const double> losses, const AclThresholds& t);

// lambda1 = median (interpolated for even counts), lambda2 = 0.95 * min.
AclThresholds init_thresholds(std::span<const double> losses, double eta1, double eta2);
AclThresholds decay_thresholds(const AclThresholds& t);

struct WeightHistogram {
  double zero = 0.0;  // fractions of the batch
  double fractional = 0.0;
  double one = 0.0;
};

WeightHistogram histogram(std::span<const double> weights);

}  // namespace acgcl
