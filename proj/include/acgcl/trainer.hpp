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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acgcl/augment.hpp"
#include "acgcl/config.hpp"
#include "acgcl/encoder.hpp"
#include "acgcl/graph.hpp"
#include "acgcl/metrics.hpp"
#include "acgcl/sampler.hpp"

namespace acgcl {

struct StepRow {
  std::size_t epoch = 0;
  std::size_t step = 0;  // 1-based within the epoch
  double total = 0.0;    // weighted objective that was minimized
  double mean_loss = 0.0;
  double mean_intra = 0.0;
  double mean_inter = 0.0;
  double balance = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double active_fraction = 0.0;  // share of samples with weight > 0
  WeightHistogram weights;
};

struct EpochRow {
  std::size_t epoch = 0;
  double theta = 0.0;
  double gamma = 0.0;
  double lambda1 = 0.0;  // at the end of the inner loop
  double lambda2 = 0.0;
  double mean_loss = 0.0;
  double active_fraction = 0.0;
  double val_accuracy = 0.0;  // NaN without labels
  std::size_t positive_replaced = 0;
  std::size_t negative_replaced = 0;
};

struct TrainReport {
  std::vector<EpochRow> epochs;
  std::vector<StepRow> steps;
  std::size_t patience_left = 0;
  std::optional<std::string> checkpoint;
};

struct TrainResult {
  GcnParams params;  // parameters after the last epoch
  TrainReport report;
};

// Everything that depends only on the graph and configuration, shared by
// training, evaluation and the difficulty experiment.
struct PreparedGraph {
  std::vector<Subgraph> subgraphs;
  SemanticAssignment semantics;
  DistanceDistribution distances;
  Splits splits;
};

PreparedGraph prepare(const Graph& graph, const TrainConfig& config);

// Splits attached to the graph, or a seeded random split.
Splits resolve_splits(const Graph& graph, const TrainConfig& config);

TrainResult train(const Graph& graph, const TrainConfig& config, MetricsSink* sink = nullptr);
TrainResult train(const Graph& graph, const PreparedGraph& prepared, const TrainConfig& config,
                  MetricsSink* sink = nullptr);

// Center-node embedding of every subgraph under the original adjacency,
// one row per node.
Matrix embed_all(const GcnParams& params, const std::vector<Subgraph>& subgraphs);

// Validation accuracy of the probe fit on the train split.
double validation_accuracy(const Matrix& embeddings, const Graph& graph, const Splits& splits,
                           const TrainConfig& config);
double test_accuracy(const Matrix& embeddings, const Graph& graph, const Splits& splits, const TrainConfig& config);

// CSV "node_id,e0,...,e{d-1}".
void export_embeddings(const Matrix& embeddings, const std::filesystem::path& path);

// Checkpoint with the configuration embedded as metadata.
void save_model(const GcnParams& params, const TrainConfig& config, const std::filesystem::path& path);
GcnParams load_model(const std::filesystem::path& path, TrainConfig* config = nullptr);

struct DifficultyRow {
  double theta = 0.0;
  double gamma = 0.0;
  double mean_loss = 0.0;
  double std_loss = 0.0;  // population standard deviation over subgraphs
};

// Mean inter-graph loss of a frozen encoder over all subgraphs, after
// augmenting at each difficulty in the grid.
std::vector<DifficultyRow> difficulty_curve(const GcnParams& params, const PreparedGraph& prepared,
                                            const TrainConfig& config, const std::vector<double>& theta_grid);

// Writes "theta,gamma,mean_loss,std" rows.
void save_difficulty_csv(const std::vector<DifficultyRow>& rows, const std::filesystem::path& path);

}  // namespace acgcl
