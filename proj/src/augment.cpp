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

#include "acgcl/augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "acgcl/error.hpp"
#include "acgcl/kernels.hpp"
#include "acgcl/random.hpp"

namespace acgcl {

DistanceMetric parse_metric(std::string_view name) {
  if (name == "euclidean") return DistanceMetric::euclidean;
  if (name == "manhattan") return DistanceMetric::manhattan;
  if (name == "cosine") return DistanceMetric::cosine;
  throw ConfigError("unknown distance metric '" + std::string(name) + "'");
}

std::string_view to_string(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::euclidean:
      return "euclidean";
    case DistanceMetric::manhattan:
      return "manhattan";
    case DistanceMetric::cosine:
      return "cosine";
  }
  return "?";
}

double pair_distance(std::span<const double> a, std::span<const double> b, DistanceMetric metric) {
  if (a.size() != b.size()) {
    throw ShapeError("pair_distance: dimensions " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  switch (metric) {
    case DistanceMetric::euclidean:
      return std::sqrt(kernels::squared_distance(a, b));
    case DistanceMetric::manhattan:
      return kernels::manhattan_distance(a, b);
    case DistanceMetric::cosine: {
      const double na = std::sqrt(kernels::dot(a, a));
      const double nb = std::sqrt(kernels::dot(b, b));
      if (na == 0.0 || nb == 0.0) return 1.0;
      const double cos = std::clamp(kernels::dot(a, b) / (na * nb), -1.0, 1.0);
      return std::max(0.0, 1.0 - cos);
    }
  }
  return 0.0;
}

Matrix distance_matrix(const Matrix& features, DistanceMetric metric) {
  const std::size_t k = features.rows();
  Matrix d(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      d(i, j) = pair_distance(features.row(i), features.row(j), metric);
      d(j, i) = d(i, j);
    }
  }
  return d;
}

SemanticKind parse_semantics(std::string_view name) {
  if (name == "label") return SemanticKind::label;
  if (name == "degree") return SemanticKind::degree_bucket;
  throw ConfigError("unknown semantics '" + std::string(name) + "' (expected label or degree)");
}

std::string_view to_string(SemanticKind kind) {
  return kind == SemanticKind::label ? "label" : "degree";
}

SemanticAssignment label_semantics(const Graph& graph) {
  if (!graph.labels()) throw ContractError("label semantics requested for a graph without labels");
  return {SemanticKind::label, *graph.labels(), 0};
}

SemanticAssignment degree_semantics(const Graph& graph, std::size_t n_buckets) {
  if (n_buckets == 0) throw ConfigError("degree_buckets must be >= 1");
  const std::size_t n = graph.n_nodes();
  std::vector<std::size_t> sorted(n);
  for (NodeId i = 0; i < n; ++i) sorted[i] = graph.degree(i);
  std::sort(sorted.begin(), sorted.end());
  // Bucket upper edges at the 1/B, 2/B, ... order statistics; ties stay low.
  std::vector<std::size_t> cuts;
  for (std::size_t b = 1; b < n_buckets && n > 0; ++b) cuts.push_back(sorted[std::max<std::size_t>(b * n / n_buckets, 1) - 1]);
  SemanticAssignment s{SemanticKind::degree_bucket, std::vector<int>(n), n_buckets};
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t deg = graph.degree(i);
    s.values[i] = static_cast<int>(std::count_if(cuts.begin(), cuts.end(), [&](std::size_t c) { return deg > c; }));
  }
  return s;
}

SemanticAssignment make_semantics(const Graph& graph, SemanticKind preferred, std::size_t n_buckets) {
  if (preferred == SemanticKind::label && graph.labels()) return label_semantics(graph);
  return degree_semantics(graph, n_buckets);
}

DistanceDistribution estimate_distance_distribution(const std::vector<Subgraph>& subgraphs,
                                                    DistanceMetric metric, std::size_t sample_budget,
                                                    std::uint64_t seed) {
  // Valid pairs per subgraph: positions p < q with distinct parents.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(subgraphs.size());
  std::size_t total = 0;
  for (std::size_t s = 0; s < subgraphs.size(); ++s) {
    const auto& ids = subgraphs[s].parent_indices;
    for (std::size_t p = 0; p < ids.size(); ++p)
      for (std::size_t q = p + 1; q < ids.size(); ++q)
        if (ids[p] != ids[q]) pairs[s].emplace_back(p, q);
    total += pairs[s].size();
  }
  if (total == 0) throw EmptyDistributionError("no subgraph contains two distinct nodes");

  DistanceDistribution dist;
  dist.sample_budget = sample_budget;
  auto distance_of = [&](std::size_t s, std::pair<std::size_t, std::size_t> pq) {
    const auto& f = subgraphs[s].features;
    return pair_distance(f.row(pq.first), f.row(pq.second), metric);
  };
  if (sample_budget >= total) {
    dist.sorted.reserve(total);
    for (std::size_t s = 0; s < subgraphs.size(); ++s)
      for (const auto& pq : pairs[s]) dist.sorted.push_back(distance_of(s, pq));
  } else {
    if (sample_budget == 0) throw EmptyDistributionError("sample_budget is zero");
    std::vector<std::size_t> offsets(subgraphs.size() + 1, 0);
    for (std::size_t s = 0; s < subgraphs.size(); ++s) offsets[s + 1] = offsets[s] + pairs[s].size();
    Rng rng = make_rng(seed, seed_role::kDistances);
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    dist.sorted.reserve(sample_budget);
    for (std::size_t t = 0; t < sample_budget; ++t) {
      const std::size_t flat = pick(rng);
      const auto it = std::upper_bound(offsets.begin(), offsets.end(), flat);
      const auto s = static_cast<std::size_t>(it - offsets.begin()) - 1;
      dist.sorted.push_back(distance_of(s, pairs[s][flat - offsets[s]]));
    }
  }
  std::sort(dist.sorted.begin(), dist.sorted.end());
  return dist;
}

double quantile(const DistanceDistribution& dist, double theta) {
  if (dist.sorted.empty()) throw EmptyDistributionError("quantile of an empty distribution");
  if (!(theta >= 0.0 && theta <= 100.0)) throw RangeError("theta must lie in [0, 100], got " + std::to_string(theta));
  const double pos = theta / 100.0 * static_cast<double>(dist.sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, dist.sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return dist.sorted[lo] + frac * (dist.sorted[hi] - dist.sorted[lo]);
}

std::optional<MirrorPair> find_mirror_pair(const Matrix& distances, std::span<const int> semantic,
                                           std::span<const NodeId> parents, std::size_t a, std::size_t b,
                                           double gamma, Polarity polarity) {
  const std::size_t k = parents.size();
  if (a >= k || b >= k || a == b) throw IndexError("find_mirror_pair: invalid pair");
  const double limit = 2.0 * gamma;
  const NodeId pa = parents[a];
  const NodeId pb = parents[b];
  std::optional<MirrorPair> best;
  for (std::size_t c = 0; c < k; ++c) {
    if (parents[c] == pa || parents[c] == pb) continue;
    const double dc = distances(c, a);
    if (!(dc < limit)) continue;
    const bool c_same = semantic[c] == semantic[a];
    if (polarity == Polarity::positive && !c_same) continue;
    for (std::size_t d = 0; d < k; ++d) {
      if (d == c || parents[d] == pa || parents[d] == pb || parents[d] == parents[c]) continue;
      const bool d_same = semantic[d] == semantic[b];
      const bool admissible = polarity == Polarity::positive ? d_same : (!c_same || !d_same);
      if (!admissible) continue;
      const double sum = dc + distances(d, b);
      if (!(sum < limit)) continue;
      if (!best || sum < best->distance_sum) best = MirrorPair{c, d, sum};
    }
  }
  return best;
}

namespace {

std::vector<int> positional_semantics(const Subgraph& subgraph, const SemanticAssignment& semantics) {
  std::vector<int> out(subgraph.size());
  for (std::size_t p = 0; p < subgraph.size(); ++p) {
    const NodeId id = subgraph.parent_indices[p];
    if (id >= semantics.values.size()) throw IndexError("semantic assignment does not cover node " + std::to_string(id));
    out[p] = semantics.values[id];
  }
  return out;
}

}  // namespace

std::optional<MirrorPair> find_mirror_pair(const Subgraph& subgraph, std::size_t a, std::size_t b, double gamma,
                                           const SemanticAssignment& semantics, DistanceMetric metric,
                                           Polarity polarity) {
  const Matrix distances = distance_matrix(subgraph.features, metric);
  const auto y = positional_semantics(subgraph, semantics);
  return find_mirror_pair(distances, y, subgraph.parent_indices, a, b, gamma, polarity);
}

MirrorGraphs cg_augment(const Subgraph& subgraph, double gamma, const SemanticAssignment& semantics,
                        DistanceMetric metric, bool keep_log) {
  const std::size_t k = subgraph.size();
  const Matrix& adj = subgraph.adjacency;
  const Matrix distances = distance_matrix(subgraph.features, metric);
  const auto y = positional_semantics(subgraph, semantics);

  MirrorGraphs out{adj, adj, {}, {}};
  for (std::size_t p = 0; p < k; ++p) {
    out.positive(p, p) = 0.0;
    out.negative(p, p) = 0.0;
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (subgraph.parent_indices[a] == subgraph.parent_indices[b]) continue;
      for (const Polarity pol : {Polarity::positive, Polarity::negative}) {
        Matrix& target = pol == Polarity::positive ? out.positive : out.negative;
        const auto mirror = find_mirror_pair(distances, y, subgraph.parent_indices, a, b, gamma, pol);
        std::size_t& replaced = pol == Polarity::positive ? out.stats.positive_replaced : out.stats.negative_replaced;
        std::size_t& unmatched =
            pol == Polarity::positive ? out.stats.positive_unmatched : out.stats.negative_unmatched;
        if (!mirror) {
          ++unmatched;
          continue;
        }
        ++replaced;
        const double edge = adj(mirror->c, mirror->d);
        target(a, b) = edge;
        target(b, a) = edge;
        if (keep_log) {
          out.log.push_back({a, b, pol, mirror->c, mirror->d, mirror->distance_sum, adj(a, b), edge});
        }
      }
    }
  }
  return out;
}

}  // namespace acgcl
