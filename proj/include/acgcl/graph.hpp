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
#include <optional>
#include <vector>

#include "acgcl/matrix.hpp"

namespace acgcl {

using NodeId = std::uint32_t;

struct Splits {
  std::vector<NodeId> train;
  std::vector<NodeId> val;
  std::vector<NodeId> test;
};

// Undirected graph with dense node features. Adjacency is stored as sorted,
// duplicate-free neighbor lists; a node appears in its own list only when the
// input explicitly contained a self-loop.
class Graph {
 public:
  Graph() = default;
  Graph(Matrix features, const std::vector<std::pair<NodeId, NodeId>>& edges);

  std::size_t n_nodes() const noexcept { return features_.rows(); }
  std::size_t feature_dim() const noexcept { return features_.cols(); }
  const Matrix& features() const noexcept { return features_; }
  std::span<const double> feature(NodeId i) const { return features_.row(i); }

  const std::vector<NodeId>& neighbors(NodeId i) const { return adjacency_[i]; }
  std::size_t degree(NodeId i) const { return adjacency_[i].size(); }
  bool has_edge(NodeId i, NodeId j) const;
  std::size_t n_edges() const;  // undirected, self-loops counted once

  // Every undirected edge once, with first <= second, sorted.
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;

  const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<int> labels);
  int n_classes() const;

  const std::optional<Splits>& splits() const noexcept { return splits_; }
  void set_splits(Splits splits);

  // Throws ContractError describing the first violated invariant.
  void validate() const;

 private:
  Matrix features_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::optional<std::vector<int>> labels_;
  std::optional<Splits> splits_;
};

struct SbmConfig {
  std::vector<std::size_t> block_sizes;
  double p_intra = 0.1;
  double p_inter = 0.01;
  std::size_t feature_dim = 16;
  // One mean vector per block; when empty, block b is centered on the unit
  // vector e_(b mod feature_dim).
  std::vector<std::vector<double>> feature_centers;
  double feature_noise = 1.0;
  // Random train/val/test node split attached to the generated graph.
  double train_fraction = 0.4;
  double val_fraction = 0.2;

  void validate() const;
};

Graph generate_sbm(const SbmConfig& config, std::uint64_t seed);

// Uniformly random disjoint split; the remainder after train and val is test.
Splits random_splits(std::size_t n_nodes, double train_fraction, double val_fraction,
                     std::uint64_t seed);

// Loaders for the on-disk formats (see README). Node ids are 0-based and
// contiguous; the feature file fixes n_nodes.
Graph load_graph(const std::filesystem::path& edge_path, const std::filesystem::path& feature_path,
                 const std::optional<std::filesystem::path>& label_path = std::nullopt);
Splits load_splits(const std::filesystem::path& path, std::size_t n_nodes);

void save_edges(const Graph& g, const std::filesystem::path& path);
void save_features(const Graph& g, const std::filesystem::path& path);
void save_labels(const Graph& g, const std::filesystem::path& path);
void save_splits(const Splits& s, const std::filesystem::path& path);

// Directory layout: edges.txt, features.csv, optional labels.csv and splits.csv.
Graph load_graph_dir(const std::filesystem::path& dir);
void save_graph_dir(const Graph& g, const std::filesystem::path& dir);

}  // namespace acgcl
