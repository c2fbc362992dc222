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

#include "acgcl/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "acgcl/error.hpp"
#include "acgcl/parallel.hpp"

namespace acgcl {
namespace {

void check_teleport(double teleport) {
  if (!(teleport > 0.0 && teleport < 1.0)) {
    throw RangeError("teleport must lie in (0, 1), got " + std::to_string(teleport));
  }
}

}  // namespace

Matrix column_normalize(const Graph& graph) {
  const std::size_t n = graph.n_nodes();
  Matrix out(n, n);
  for (NodeId j = 0; j < n; ++j) {
    const std::size_t deg = graph.degree(j);
    if (deg == 0) continue;
    const double w = 1.0 / static_cast<double>(deg);
    for (NodeId i : graph.neighbors(j)) out(i, j) = w;
  }
  return out;
}

ImportanceScores compute_ppr_scores(const Graph& graph, const PprOptions& options) {
  check_teleport(options.teleport);
  const std::size_t n = graph.n_nodes();
  if (n > options.dense_cutoff) {
    throw SizeError("dense PPR requested for " + std::to_string(n) + " nodes (cutoff " +
                    std::to_string(options.dense_cutoff) + ")");
  }
  Matrix system = column_normalize(graph) * (-(1.0 - options.teleport));
  for (std::size_t i = 0; i < n; ++i) system(i, i) += 1.0;
  ImportanceScores s;
  s.teleport = options.teleport;
  s.scores = solve(std::move(system), Matrix::identity(n) * options.teleport);
  return s;
}

std::vector<double> ppr_row_power(const Graph& graph, NodeId node, const PprOptions& options) {
  check_teleport(options.teleport);
  const std::size_t n = graph.n_nodes();
  if (node >= n) throw IndexError("ppr_row_power: node out of range");
  const double damp = 1.0 - options.teleport;
  std::vector<double> r(n, 0.0);
  std::vector<double> next(n, 0.0);
  r[node] = options.teleport;
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    double residual = 0.0;
    for (NodeId j = 0; j < n; ++j) {
      const auto& nbrs = graph.neighbors(j);
      double acc = 0.0;
      for (NodeId k : nbrs) acc += r[k];
      double v = nbrs.empty() ? 0.0 : damp * acc / static_cast<double>(nbrs.size());
      if (j == node) v += options.teleport;
      residual += std::fabs(v - r[j]);
      next[j] = v;
    }
    r.swap(next);
    if (residual < options.tolerance) return r;
  }
  throw ConvergenceError("PPR power iteration for node " + std::to_string(node) +
                         " did not converge in " + std::to_string(options.max_iters) + " iterations");
}

ImportanceScores compute_ppr_scores_power(const Graph& graph, const PprOptions& options) {
  const std::size_t n = graph.n_nodes();
  ImportanceScores s;
  s.teleport = options.teleport;
  s.scores = Matrix(n, n);
  parallel_for(n, [&](std::size_t i) {
    const auto row = ppr_row_power(graph, static_cast<NodeId>(i), options);
    std::copy(row.begin(), row.end(), s.scores.row(i).begin());
  });
  return s;
}

std::vector<NodeId> top_rank(std::span<const double> scores, std::size_t k, NodeId self) {
  const std::size_t n = scores.size();
  if (k == 0) throw SizeError("top_rank: K must be >= 1");
  if (k > n) throw SizeError("top_rank: K = " + std::to_string(k) + " exceeds " + std::to_string(n) + " nodes");
  if (self >= n) throw IndexError("top_rank: self index out of range");
  std::vector<NodeId> order;
  order.reserve(n - 1);
  for (NodeId i = 0; i < n; ++i)
    if (i != self) order.push_back(i);
  auto better = [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1), order.end(), better);
  std::vector<NodeId> out;
  out.reserve(k);
  out.push_back(self);
  out.insert(out.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1));
  return out;
}

Subgraph extract_subgraph(const Graph& graph, std::span<const NodeId> indices) {
  if (indices.empty()) throw SizeError("extract_subgraph: empty index list");
  const std::size_t k = indices.size();
  for (NodeId i : indices)
    if (i >= graph.n_nodes()) throw IndexError("extract_subgraph: index " + std::to_string(i) + " out of range");
  Subgraph sg;
  sg.parent_indices.assign(indices.begin(), indices.end());
  sg.center = indices[0];
  sg.features = Matrix(k, graph.feature_dim());
  sg.adjacency = Matrix(k, k);
  for (std::size_t p = 0; p < k; ++p) {
    const auto src = graph.feature(indices[p]);
    std::copy(src.begin(), src.end(), sg.features.row(p).begin());
    for (std::size_t q = 0; q < k; ++q) sg.adjacency(p, q) = graph.has_edge(indices[p], indices[q]) ? 1.0 : 0.0;
  }
  return sg;
}

std::vector<Subgraph> sample_all_subgraphs(const Graph& graph, std::size_t k, const PprOptions& options) {
  const std::size_t n = graph.n_nodes();
  if (k == 0 || k > n) throw SizeError("sample_all_subgraphs: K must lie in [1, n_nodes]");
  const bool dense = n <= options.dense_cutoff;
  ImportanceScores scores;
  if (dense) scores = compute_ppr_scores(graph, options);

  std::vector<Subgraph> out(n);
  parallel_for(n, [&](std::size_t i) {
    const auto node = static_cast<NodeId>(i);
    std::vector<double> row_storage;
    std::span<const double> row;
    if (dense) {
      row = scores.scores.row(i);
    } else {
      row_storage = ppr_row_power(graph, node, options);
      row = row_storage;
    }
    auto indices = top_rank(row, k, node);
    // Unreachable nodes carry zero mass; pad with the center instead.
    for (std::size_t p = 1; p < indices.size(); ++p)
      if (!(row[indices[p]] > 0.0)) indices[p] = node;
    out[i] = extract_subgraph(graph, indices);
  });
  return out;
}

void save_subgraph_indices(const std::vector<Subgraph>& subgraphs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::size_t k = subgraphs.empty() ? 0 : subgraphs.front().size();
  out << "# acgcl-subgraphs v1 n=" << subgraphs.size() << " k=" << k << '\n';
  for (const auto& sg : subgraphs) {
    out << sg.center;
    for (NodeId id : sg.parent_indices) out << ',' << id;
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::vector<NodeId>> load_subgraph_indices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line.rfind("# acgcl-subgraphs v1", 0) != 0) {
    throw ParseError(path.string() + ":1: missing 'acgcl-subgraphs v1' header");
  }
  std::vector<std::vector<NodeId>> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<NodeId> ids;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        ids.push_back(static_cast<NodeId>(v));
      } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad node id '" + cell + "'");
      }
    }
    if (ids.size() < 2 || ids[0] != ids[1]) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": center must lead the index list");
    }
    ids.erase(ids.begin());
    out.push_back(std::move(ids));
  }
  return out;
}

}  // namespace acgcl
