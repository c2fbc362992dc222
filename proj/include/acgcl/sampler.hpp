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
#include <span>
#include <vector>

#include "acgcl/graph.hpp"
#include "acgcl/matrix.hpp"

namespace acgcl {

struct PprOptions {
  double teleport = 0.15;
  // Graphs up to this size use the exact dense solve.
  std::size_t dense_cutoff = 2000;
  std::size_t max_iters = 1000;
  // l1 residual at which a power-iteration row is accepted.
  double tolerance = 1e-6;
};

// Dense PPR score matrix S = teleport * (I - (1 - teleport) * A D^-1)^-1.
// Row i holds the scores used to rank neighbors of node i.
struct ImportanceScores {
  Matrix scores;
  double teleport = 0.15;
};

struct Subgraph {
  // Center first. Length is always K; the center id repeats as padding when
  // fewer than K nodes are reachable.
  std::vector<NodeId> parent_indices;
  Matrix features;   // K x D
  Matrix adjacency;  // K x K, 0/1, induced from the parent graph
  NodeId center = 0;

  std::size_t size() const noexcept { return parent_indices.size(); }
};

// A * D^-1 with D the degree matrix; zero-degree columns stay zero.
Matrix column_normalize(const Graph& graph);

// Exact dense scores via an LU solve. Throws SizeError beyond dense_cutoff.
ImportanceScores compute_ppr_scores(const Graph& graph, const PprOptions& options = {});

// Score row i by power iteration on r = teleport e_i + (1 - teleport) D^-1 A r.
// Throws ConvergenceError when max_iters is exhausted.
std::vector<double> ppr_row_power(const Graph& graph, NodeId node, const PprOptions& options = {});

// Full matrix assembled from power-iteration rows.
ImportanceScores compute_ppr_scores_power(const Graph& graph, const PprOptions& options = {});

// K highest-scoring indices, descending, ties by ascending id; `self` is
// forced to position 0.
std::vector<NodeId> top_rank(std::span<const double> scores, std::size_t k, NodeId self);

Subgraph extract_subgraph(const Graph& graph, std::span<const NodeId> indices);

// One K-node subgraph per node, in node order. Uses dense scores up to
// dense_cutoff and per-row power iteration beyond.
std::vector<Subgraph> sample_all_subgraphs(const Graph& graph, std::size_t k,
                                           const PprOptions& options = {});

// Cache of the parent index lists, one line per subgraph:
//   # acgcl-subgraphs v1 n=<count> k=<K>
//   <center>,<i_0>,...,<i_{K-1}>
void save_subgraph_indices(const std::vector<Subgraph>& subgraphs, const std::filesystem::path& path);
std::vector<std::vector<NodeId>> load_subgraph_indices(const std::filesystem::path& path);

}  // namespace acgcl
