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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acgcl/augment.hpp"
#include "acgcl/curriculum.hpp"
#include "acgcl/losses.hpp"
#include "acgcl/probe.hpp"
#include "acgcl/sampler.hpp"
#include "acgcl/sinkhorn.hpp"

namespace acgcl {

enum class Pacing { linear, constant };

struct TrainConfig {
  std::string data;  // graph directory
  std::uint64_t seed = 0;

  std::size_t subgraph_size = 20;  // K
  std::size_t embed_dim = 64;
  std::size_t n_layers = 1;
  double learning_rate = 0.001;
  std::size_t batch_size = 500;  // capped at n_nodes
  std::size_t inner_steps = 10;
  std::size_t epochs = 50;
  double ramp_epochs = 0.0;  // T; 0 means `epochs`

  double theta0 = 15.0;
  double max_difficulty = 50.0;
  std::string pacing = "linear";  // linear | constant (theta = M throughout)
  double gamma = -1.0;            // >= 0 overrides the pacing-derived threshold

  std::string acl_mode = "soft";  // soft | hard | spl | uniform
  double eta1 = 1.05;
  double eta2 = 0.95;

  double alpha = 1.0;
  double beta = 1.0;
  double xi = 1.0;
  double epsilon = 0.1;
  bool normalize_total = false;

  std::string metric = "euclidean";
  std::string semantics = "label";  // label | degree
  std::size_t degree_buckets = 4;

  std::size_t patience = 20;
  double min_improvement = 1e-4;

  double teleport = 0.15;
  std::size_t dense_cutoff = 2000;

  double sinkhorn_reg = 0.05;
  std::size_t sinkhorn_iters = 200;
  double sinkhorn_tol = 1e-6;
  std::size_t distance_samples = 50000;
  // Subgraph index file: loaded when it exists, written after sampling
  // otherwise. Empty disables caching.
  std::string subgraph_cache;

  std::size_t probe_iters = 500;
  double probe_l2 = 1e-4;
  double probe_lr = 0.5;

  // Used only when the data directory carries no splits.csv.
  double train_frac = 0.4;
  double val_frac = 0.2;

  // Throws ConfigError naming the offending key.
  void validate() const;
  void set(std::string_view key, std::string_view value);
  std::vector<std::pair<std::string, std::string>> to_key_values() const;

  PacingConfig pacing_config() const;
  Pacing pacing_kind() const;
  WeightMode weight_mode() const { return parse_weight_mode(acl_mode); }
  DistanceMetric distance_metric() const { return parse_metric(metric); }
  SemanticKind semantic_kind() const { return parse_semantics(semantics); }
  LossWeights loss_weights() const { return {alpha, beta, xi, epsilon}; }
  SinkhornConfig sinkhorn() const;
  PprOptions ppr() const;
  ProbeConfig probe() const { return {probe_iters, probe_l2, probe_lr}; }
};

// Flat "key = value" lines; '#' starts a comment; blank lines are ignored.
TrainConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");
// Overrides are "key=value" strings applied after the file, then validated.
TrainConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
TrainConfig apply_overrides(TrainConfig config, const std::vector<std::string>& overrides);
TrainConfig from_key_values(const std::vector<std::pair<std::string, std::string>>& kv);

std::string format_double(double v);

}  // namespace acgcl
