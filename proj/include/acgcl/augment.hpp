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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "acgcl/graph.hpp"
#include "acgcl/matrix.hpp"
#include "acgcl/sampler.hpp"

namespace acgcl {

enum class DistanceMetric { euclidean, manhattan, cosine };

DistanceMetric parse_metric(std::string_view name);
std::string_view to_string(DistanceMetric metric);

// Cosine distance is 1 - cos-similarity; a zero vector is at distance 1 from
// everything.
double pair_distance(std::span<const double> a, std::span<const double> b, DistanceMetric metric);

// K x K matrix of pair_distance over the subgraph's rows.
Matrix distance_matrix(const Matrix& features, DistanceMetric metric);

enum class SemanticKind { label, degree_bucket };

SemanticKind parse_semantics(std::string_view name);
std::string_view to_string(SemanticKind kind);

// Per-node semantic variable y_i, indexed by parent-graph node id.
struct SemanticAssignment {
  SemanticKind kind = SemanticKind::label;
  std::vector<int> values;
  std::size_t n_buckets = 0;  // degree mode only
};

SemanticAssignment label_semantics(const Graph& graph);
// Equal-frequency bins over the observed degree distribution.
SemanticAssignment degree_semantics(const Graph& graph, std::size_t n_buckets = 4);
// Labels when present, otherwise degree buckets.
SemanticAssignment make_semantics(const Graph& graph, SemanticKind preferred, std::size_t n_buckets = 4);

struct DistanceDistribution {
  std::vector<double> sorted;  // ascending, never empty
  std::size_t sample_budget = 0;
};

// Pools within-subgraph pair distances between distinct parent nodes. When
// the budget covers every pair the result is the exact multiset; otherwise
// `sample_budget` pairs are drawn uniformly with replacement.
DistanceDistribution estimate_distance_distribution(const std::vector<Subgraph>& subgraphs,
                                                    DistanceMetric metric, std::size_t sample_budget,
                                                    std::uint64_t seed);

// Percentile theta in [0, 100], linear interpolation between order statistics.
double quantile(const DistanceDistribution& dist, double theta);

enum class Polarity { positive, negative };

struct MirrorPair {
  std::size_t c = 0;  // subgraph positions
  std::size_t d = 0;
  double distance_sum = 0.0;
};

// Exhaustive search for the mirror pair of positions (a, b). Candidates are
// ordered position pairs (c, d) whose parent nodes are distinct from each
// other and from those of a and b. Positive polarity requires y_c = y_a and
// y_d = y_b; negative requires y_c != y_a or y_d != y_b. The pair minimizing
// d(x_c, x_a) + d(x_d, x_b) is returned if that sum is < 2 * gamma; ties go
// to the lexicographically smallest (c, d).
std::optional<MirrorPair> find_mirror_pair(const Subgraph& subgraph, std::size_t a, std::size_t b, double gamma,
                                           const SemanticAssignment& semantics, DistanceMetric metric,
                                           Polarity polarity);

// Same search against a precomputed distance matrix and per-position
// semantic values.
std::optional<MirrorPair> find_mirror_pair(const Matrix& distances, std::span<const int> semantic,
                                           std::span<const NodeId> parents, std::size_t a, std::size_t b,
                                           double gamma, Polarity polarity);

struct MirrorRecord {
  std::size_t a = 0;
  std::size_t b = 0;
  Polarity polarity = Polarity::positive;
  std::size_t c = 0;
  std::size_t d = 0;
  double distance_sum = 0.0;
  double original_edge = 0.0;
  double mirrored_edge = 0.0;
};

struct MirrorStats {
  std::size_t positive_replaced = 0;
  std::size_t positive_unmatched = 0;
  std::size_t negative_replaced = 0;
  std::size_t negative_unmatched = 0;
};

struct MirrorGraphs {
  Matrix positive;  // K x K
  Matrix negative;  // K x K
  MirrorStats stats;
  std::vector<MirrorRecord> log;  // filled only when requested
};

// Visits every unordered position pair (a < b) with distinct parent nodes
// once. A pair with a mirror takes the subgraph edge state of that mirror;
// otherwise it keeps its own edge. Outputs are symmetric with zero diagonal.
MirrorGraphs cg_augment(const Subgraph& subgraph, double gamma, const SemanticAssignment& semantics,
                        DistanceMetric metric, bool keep_log = false);

}  // namespace acgcl
