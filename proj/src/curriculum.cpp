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

#include "acgcl/curriculum.hpp"

#include <algorithm>
#include <string>

#include "acgcl/error.hpp"

namespace acgcl {

void PacingConfig::validate() const {
  if (!(theta0 > 0.0)) throw ConfigError("theta0 must be > 0");
  if (!(max_difficulty <= 100.0)) throw ConfigError("max_difficulty must be <= 100");
  if (!(theta0 <= max_difficulty)) throw ConfigError("theta0 must be <= max_difficulty");
  if (!(ramp_epochs >= 1.0)) throw ConfigError("ramp_epochs must be >= 1");
}

double pacing_theta(double t, const PacingConfig& config) {
  const double m = config.max_difficulty;
  const double start = config.theta0 / m;
  return std::min(1.0, start + (1.0 - start) * t / config.ramp_epochs) * m;
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "spl") return WeightMode::spl;
  if (name == "hard") return WeightMode::hard_acl;
  if (name == "soft") return WeightMode::soft_acl;
  if (name == "uniform") return WeightMode::uniform;
  throw ConfigError("unknown weighting mode '" + std::string(name) + "' (expected soft, hard, spl or uniform)");
}

std::string_view to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::spl: return "spl";
    case WeightMode::hard_acl: return "hard";
    case WeightMode::soft_acl: return "soft";
    case WeightMode::uniform: return "uniform";
  }
  return "?";
}

void AclThresholds::validate() const {
  if (!(lambda2 < lambda1)) {
    throw ConfigError("thresholds out of order: lambda2=" + std::to_string(lambda2) +
                      " must be < lambda1=" + std::to_string(lambda1));
  }
}

SampleWeights spl_weights(std::span<const double> losses, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("SPL threshold must be > 0");
  SampleWeights w{WeightMode::spl, {}};
  w.values.reserve(losses.size());
  for (double l : losses) w.values.push_back(l < lambda ? 1.0 : 0.0);
  return w;
}

SampleWeights hard_acl_weights(std::span<const double> losses, const AclThresholds& t) {
  t.validate();
  SampleWeights w{WeightMode::hard_acl, {}};
  w.values.reserve(losses.size());
  for (double l : losses) w.values.push_back(t.lambda2 < l && l < t.lambda1 ? 1.0 : 0.0);
  return w;
}

SampleWeights soft_acl_weights(std::span<const double> losses, const AclThresholds& t) {
  t.validate();
  if (!(t.lambda2 > 0.0)) throw ConfigError("soft weighting needs lambda2 > 0");
  SampleWeights w{WeightMode::soft_acl, {}};
  w.values.reserve(losses.size());
  for (double l : losses) {
    if (l < t.lambda2) {
      w.values.push_back(l / t.lambda2);
    } else if (l < t.lambda1) {
      w.values.push_back(1.0);
    } else {
      w.values.push_back(0.0);
    }
  }
  return w;
}

SampleWeights uniform_weights(std::size_t n) { return {WeightMode::uniform, std::vector<double>(n, 1.0)}; }

SampleWeights compute_weights(WeightMode mode, std::span<const double> losses, const AclThresholds& t) {
  switch (mode) {
    case WeightMode::spl: return spl_weights(losses, t.lambda1);
    case WeightMode::hard_acl: return hard_acl_weights(losses, t);
    case WeightMode::soft_acl: return soft_acl_weights(losses, t);
    case WeightMode::uniform: break;
  }
  return uniform_weights(losses.size());
}

AclThresholds init_thresholds(std::span<const double> losses, double eta1, double eta2) {
  if (losses.empty()) throw SizeError("init_thresholds: no losses");
  if (!(eta1 > 1.0)) throw ConfigError("eta1 must be > 1");
  if (!(eta2 > 0.0 && eta2 < 1.0)) throw ConfigError("eta2 must be in (0, 1)");
  std::vector<double> sorted(losses.begin(), losses.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return {median, 0.95 * sorted.front(), eta1, eta2};
}

AclThresholds decay_thresholds(const AclThresholds& t) {
  AclThresholds out = t;
  out.lambda1 *= t.eta1;
  out.lambda2 *= t.eta2;
  return out;
}

WeightHistogram histogram(std::span<const double> weights) {
  WeightHistogram h;
  if (weights.empty()) return h;
  for (double w : weights) {
    if (w == 0.0) {
      h.zero += 1.0;
    } else if (w == 1.0) {
      h.one += 1.0;
    } else {
      h.fractional += 1.0;
    }
  }
  const double n = static_cast<double>(weights.size());
  h.zero /= n;
  h.fractional /= n;
  h.one /= n;
  return h;
}

}  // namespace acgcl
