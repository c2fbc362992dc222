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

#include "acgcl/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>

#include "acgcl/error.hpp"
#include "acgcl/random.hpp"

namespace acgcl {
namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string where(const fs::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_double(std::ostream& os, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, ptr - buf);
}

void check_written(const std::ofstream& out, const fs::path& path) {
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

Graph::Graph(Matrix features, const std::vector<std::pair<NodeId, NodeId>>& edges)
    : features_(std::move(features)), adjacency_(features_.rows()) {
  const std::size_t n = features_.rows();
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) {
      throw IndexError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                       ") references a node >= n_nodes = " + std::to_string(n));
    }
    adjacency_[a].push_back(b);
    if (a != b) adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

bool Graph::has_edge(NodeId i, NodeId j) const {
  const auto& list = adjacency_[i];
  return std::binary_search(list.begin(), list.end(), j);
}

std::size_t Graph::n_edges() const { return edge_list().size(); }

std::vector<std::pair<NodeId, NodeId>> Graph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId i = 0; i < adjacency_.size(); ++i)
    for (NodeId j : adjacency_[i])
      if (i <= j) out.emplace_back(i, j);
  return out;
}

void Graph::set_labels(std::vector<int> labels) {
  if (labels.size() != n_nodes()) {
    throw ShapeError("labels: " + std::to_string(labels.size()) + " values for " +
                     std::to_string(n_nodes()) + " nodes");
  }
  labels_ = std::move(labels);
}

int Graph::n_classes() const {
  if (!labels_ || labels_->empty()) return 0;
  return *std::max_element(labels_->begin(), labels_->end()) + 1;
}

void Graph::set_splits(Splits splits) {
  splits_ = std::move(splits);
  validate();
}

void Graph::validate() const {
  const std::size_t n = n_nodes();
  if (adjacency_.size() != n) throw ContractError("adjacency row count differs from feature rows");
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : adjacency_[i]) {
      if (j >= n) throw ContractError("neighbor index out of range");
      if (!has_edge(j, i)) throw ContractError("adjacency is not symmetric");
    }
  }
  if (labels_) {
    if (labels_->size() != n) throw ContractError("label count differs from n_nodes");
    for (int y : *labels_)
      if (y < 0) throw ContractError("negative label");
  }
  if (splits_) {
    std::vector<char> seen(n, 0);
    for (const auto* part : {&splits_->train, &splits_->val, &splits_->test}) {
      for (NodeId i : *part) {
        if (i >= n) throw ContractError("split index out of range");
        if (seen[i]) throw ContractError("split sets overlap at node " + std::to_string(i));
        seen[i] = 1;
      }
    }
  }
}

void SbmConfig::validate() const {
  if (block_sizes.empty()) throw ConfigError("block_sizes: at least one block required");
  for (std::size_t s : block_sizes)
    if (s == 0) throw ConfigError("block_sizes: every block must be non-empty");
  if (!(p_inter >= 0.0 && p_inter <= p_intra && p_intra <= 1.0)) {
    throw ConfigError("p_inter/p_intra: require 0 <= p_inter <= p_intra <= 1");
  }
  if (feature_dim == 0) throw ConfigError("feature_dim: must be positive");
  if (!feature_centers.empty()) {
    if (feature_centers.size() != block_sizes.size()) throw ConfigError("feature_centers: one per block");
    for (const auto& c : feature_centers)
      if (c.size() != feature_dim) throw ConfigError("feature_centers: dimension mismatch");
  }
  if (!(feature_noise >= 0.0)) throw ConfigError("feature_noise: must be >= 0");
  if (!(train_fraction >= 0.0 && val_fraction >= 0.0 && train_fraction + val_fraction <= 1.0)) {
    throw ConfigError("train_fraction/val_fraction: must be non-negative and sum to <= 1");
  }
}

Graph generate_sbm(const SbmConfig& config, std::uint64_t seed) {
  config.validate();
  const std::size_t n = std::accumulate(config.block_sizes.begin(), config.block_sizes.end(), std::size_t{0});
  std::vector<int> block(n);
  {
    std::size_t pos = 0;
    for (std::size_t b = 0; b < config.block_sizes.size(); ++b)
      for (std::size_t k = 0; k < config.block_sizes[b]; ++k) block[pos++] = static_cast<int>(b);
  }

  Rng rng = make_rng(seed, seed_role::kGraph);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double p = block[i] == block[j] ? config.p_intra : config.p_inter;
      if (unit(rng) < p) edges.emplace_back(i, j);
    }
  }

  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix features(n, config.feature_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = static_cast<std::size_t>(block[i]);
    for (std::size_t k = 0; k < config.feature_dim; ++k) {
      const double center = config.feature_centers.empty()
                                ? (k == b % config.feature_dim ? 1.0 : 0.0)
                                : config.feature_centers[b][k];
      features(i, k) = center + config.feature_noise * noise(rng);
    }
  }

  Graph g(std::move(features), edges);
  g.set_labels(std::move(block));
  g.set_splits(random_splits(n, config.train_fraction, config.val_fraction, seed));
  return g;
}

Splits random_splits(std::size_t n_nodes, double train_fraction, double val_fraction,
                     std::uint64_t seed) {
  std::vector<NodeId> order(n_nodes);
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng = make_rng(seed, seed_role::kSplits);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(n_nodes));
  const auto n_val = std::min(n_nodes - n_train,
                              static_cast<std::size_t>(val_fraction * static_cast<double>(n_nodes)));
  Splits s;
  s.train.assign(order.begin(), order.begin() + n_train);
  s.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  s.test.assign(order.begin() + n_train + n_val, order.end());
  for (auto* part : {&s.train, &s.val, &s.test}) std::sort(part->begin(), part->end());
  return s;
}

Graph load_graph(const fs::path& edge_path, const fs::path& feature_path,
                 const std::optional<fs::path>& label_path) {
  // Features first: they fix n_nodes.
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t rows = 0;
  {
    auto in = open_in(feature_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto text = trim(line);
      if (text.empty()) continue;
      const auto cells = split(text, ',');
      if (rows == 0) dim = cells.size();
      if (cells.size() != dim) {
        throw ShapeError(where(feature_path, line_no) + ": expected " + std::to_string(dim) +
                         " feature values, found " + std::to_string(cells.size()));
      }
      for (auto cell : cells) {
        double v = 0.0;
        if (!parse_number(cell, v)) {
          throw ParseError(where(feature_path, line_no) + ": bad feature value '" + std::string(trim(cell)) + "'");
        }
        values.push_back(v);
      }
      ++rows;
    }
  }
  Matrix features(rows, dim);
  std::copy(values.begin(), values.end(), features.data());

  std::vector<std::pair<NodeId, NodeId>> edges;
  {
    auto in = open_in(edge_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto text = trim(line);
      if (text.empty() || text.front() == '#') continue;
      const auto tokens = split_ws(text);
      std::uint64_t a = 0;
      std::uint64_t b = 0;
      if (tokens.size() != 2 || !parse_number(tokens[0], a) || !parse_number(tokens[1], b)) {
        throw ParseError(where(edge_path, line_no) + ": expected 'src dst', got '" + std::string(text) + "'");
      }
      if (a >= rows || b >= rows) {
        throw IndexError(where(edge_path, line_no) + ": endpoint " + std::to_string(std::max(a, b)) +
                         " >= n_nodes = " + std::to_string(rows));
      }
      edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
  }

  Graph g(std::move(features), edges);

  if (label_path) {
    auto in = open_in(*label_path);
    std::vector<int> labels(rows, -1);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto text = trim(line);
      if (text.empty() || text.front() == '#') continue;
      const auto cells = split(text, ',');
      std::uint64_t id = 0;
      long long label = 0;
      const bool ok = cells.size() == 2 && parse_number(cells[0], id) && parse_number(cells[1], label);
      if (!ok) {
        if (line_no == 1) continue;  // header row
        throw ParseError(where(*label_path, line_no) + ": expected 'node_id,label'");
      }
      if (id >= rows) throw IndexError(where(*label_path, line_no) + ": node id out of range");
      if (label < 0) throw ParseError(where(*label_path, line_no) + ": labels must be >= 0");
      if (labels[id] != -1) throw ParseError(where(*label_path, line_no) + ": duplicate node id");
      labels[id] = static_cast<int>(label);
    }
    for (std::size_t i = 0; i < rows; ++i)
      if (labels[i] == -1) throw ParseError(label_path->string() + ": no label for node " + std::to_string(i));
    g.set_labels(std::move(labels));
  }
  return g;
}

Splits load_splits(const fs::path& path, std::size_t n_nodes) {
  auto in = open_in(path);
  Splits s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto cells = split(text, ',');
    std::uint64_t id = 0;
    if (cells.size() != 2 || !parse_number(cells[0], id)) {
      if (line_no == 1) continue;
      throw ParseError(where(path, line_no) + ": expected 'node_id,split'");
    }
    if (id >= n_nodes) throw IndexError(where(path, line_no) + ": node id out of range");
    const auto name = trim(cells[1]);
    if (name == "train") s.train.push_back(static_cast<NodeId>(id));
    else if (name == "val") s.val.push_back(static_cast<NodeId>(id));
    else if (name == "test") s.test.push_back(static_cast<NodeId>(id));
    else throw ParseError(where(path, line_no) + ": unknown split '" + std::string(name) + "'");
  }
  for (auto* part : {&s.train, &s.val, &s.test}) std::sort(part->begin(), part->end());
  return s;
}

void save_edges(const Graph& g, const fs::path& path) {
  auto out = open_out(path);
  for (const auto& [a, b] : g.edge_list()) out << a << ' ' << b << '\n';
  check_written(out, path);
}

void save_features(const Graph& g, const fs::path& path) {
  auto out = open_out(path);
  const Matrix& x = g.features();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t k = 0; k < x.cols(); ++k) {
      if (k) out << ',';
      write_double(out, x(i, k));
    }
    out << '\n';
  }
  check_written(out, path);
}

void save_labels(const Graph& g, const fs::path& path) {
  if (!g.labels()) throw ContractError("save_labels: graph has no labels");
  auto out = open_out(path);
  out << "node_id,label\n";
  for (std::size_t i = 0; i < g.n_nodes(); ++i) out << i << ',' << (*g.labels())[i] << '\n';
  check_written(out, path);
}

void save_splits(const Splits& s, const fs::path& path) {
  auto out = open_out(path);
  out << "node_id,split\n";
  for (NodeId i : s.train) out << i << ",train\n";
  for (NodeId i : s.val) out << i << ",val\n";
  for (NodeId i : s.test) out << i << ",test\n";
  check_written(out, path);
}

Graph load_graph_dir(const fs::path& dir) {
  const auto labels = dir / "labels.csv";
  Graph g = load_graph(dir / "edges.txt", dir / "features.csv",
                       fs::exists(labels) ? std::optional<fs::path>(labels) : std::nullopt);
  if (const auto splits = dir / "splits.csv"; fs::exists(splits)) {
    g.set_splits(load_splits(splits, g.n_nodes()));
  }
  return g;
}

void save_graph_dir(const Graph& g, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  save_edges(g, dir / "edges.txt");
  save_features(g, dir / "features.csv");
  if (g.labels()) save_labels(g, dir / "labels.csv");
  if (g.splits()) save_splits(*g.splits(), dir / "splits.csv");
}

}  // namespace acgcl
