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

#include "acgcl/encoder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "acgcl/error.hpp"
#include "acgcl/random.hpp"

namespace acgcl {

void GcnParams::validate() const {
  if (layers.empty()) throw ConfigError("GCN needs at least one layer");
  for (std::size_t l = 1; l < layers.size(); ++l) {
    if (layers[l].weight.rows() != layers[l - 1].weight.cols()) {
      throw ShapeError("GCN layer " + std::to_string(l) + " input width does not match previous output");
    }
  }
}

GcnParams init_gcn(std::size_t in_dim, std::size_t out_dim, std::size_t n_layers, std::uint64_t seed) {
  if (in_dim == 0 || out_dim == 0) throw ConfigError("GCN dimensions must be positive");
  if (n_layers < 1 || n_layers > 2) throw ConfigError("n_layers must be 1 or 2");
  Rng rng = make_rng(seed, seed_role::kInit);
  GcnParams p;
  std::size_t fan_in = in_dim;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + out_dim));
    std::uniform_real_distribution<double> dist(-limit, limit);
    GcnLayer layer{Matrix(fan_in, out_dim), 0.25};
    for (double& w : layer.weight.values()) w = dist(rng);
    p.layers.push_back(std::move(layer));
    fan_in = out_dim;
  }
  return p;
}

Matrix normalize_adjacency(const Matrix& adjacency) {
  const std::size_t k = adjacency.rows();
  if (adjacency.cols() != k) throw ShapeError("normalize_adjacency: adjacency must be square");
  Matrix a = adjacency;
  for (std::size_t i = 0; i < k; ++i) a(i, i) += 1.0;
  std::vector<double> inv_sqrt(k);
  for (std::size_t i = 0; i < k; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < k; ++j) deg += a(i, j);
    inv_sqrt[i] = 1.0 / std::sqrt(deg);
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) *= inv_sqrt[i] * inv_sqrt[j];
  return a;
}

GcnVars bind(ad::Tape& tape, const GcnParams& params, bool trainable) {
  params.validate();
  GcnVars v;
  for (const auto& layer : params.layers) {
    v.weights.push_back(trainable ? tape.variable(layer.weight) : tape.constant(layer.weight));
    v.slopes.push_back(trainable ? tape.variable(Matrix::scalar(layer.slope))
                                 : tape.constant(Matrix::scalar(layer.slope)));
  }
  return v;
}

namespace {

ad::Var propagate_layer(const GcnVars& params, std::size_t l, const BlockList& blocks, ad::Var transformed) {
  return ad::prelu(ad::block_propagate(blocks, transformed), params.slopes[l]);
}

ad::Var continue_layers(const GcnVars& params, const BlockList& blocks, ad::Var h) {
  for (std::size_t l = 1; l < params.weights.size(); ++l) {
    h = propagate_layer(params, l, blocks, ad::matmul(h, params.weights[l]));
  }
  return h;
}

}  // namespace

ad::Var gcn_forward(const GcnVars& params, const BlockList& blocks, ad::Var x) {
  if (params.weights.empty()) throw ConfigError("GCN has no layers");
  const ad::Var first = propagate_layer(params, 0, blocks, ad::matmul(x, params.weights[0]));
  return continue_layers(params, blocks, first);
}

Matrix gcn_forward(const GcnParams& params, const Matrix& adjacency, const Matrix& features) {
  if (adjacency.rows() != features.rows()) {
    throw ShapeError("gcn_forward: adjacency has " + std::to_string(adjacency.rows()) + " rows, features " +
                     std::to_string(features.rows()));
  }
  if (features.cols() != params.input_dim()) {
    throw ShapeError("gcn_forward: feature width " + std::to_string(features.cols()) + " != " +
                     std::to_string(params.input_dim()));
  }
  ad::Tape tape;
  const GcnVars vars = bind(tape, params, false);
  auto blocks = std::make_shared<const std::vector<Matrix>>(std::vector<Matrix>{normalize_adjacency(adjacency)});
  return gcn_forward(vars, blocks, tape.constant(features)).value();
}

TripleVars encode_triple(const GcnVars& params, ad::Var x, const BlockList& original, const BlockList& positive,
                         const BlockList& negative) {
  if (params.weights.empty()) throw ConfigError("GCN has no layers");
  const ad::Var transformed = ad::matmul(x, params.weights[0]);
  auto run = [&](const BlockList& blocks) {
    return continue_layers(params, blocks, propagate_layer(params, 0, blocks, transformed));
  };
  return {run(original), run(positive), run(negative)};
}

EmbeddingTriple encode_triple(const GcnParams& params, const Subgraph& subgraph, const MirrorGraphs& mirrors) {
  if (!mirrors.positive.same_shape(subgraph.adjacency) || !mirrors.negative.same_shape(subgraph.adjacency)) {
    throw ShapeError("encode_triple: mirror graphs do not match the subgraph");
  }
  ad::Tape tape;
  const GcnVars vars = bind(tape, params, false);
  auto single = [](const Matrix& a) {
    return std::make_shared<const std::vector<Matrix>>(std::vector<Matrix>{normalize_adjacency(a)});
  };
  const TripleVars out = encode_triple(vars, tape.constant(subgraph.features), single(subgraph.adjacency),
                                       single(mirrors.positive), single(mirrors.negative));
  return {out.original.value(), out.positive.value(), out.negative.value()};
}

std::vector<double> readout_mean(const Matrix& embeddings) {
  if (embeddings.rows() == 0) throw SizeError("readout_mean: no rows");
  std::vector<double> s(embeddings.cols(), 0.0);
  for (std::size_t r = 0; r < embeddings.rows(); ++r)
    for (std::size_t c = 0; c < s.size(); ++c) s[c] += embeddings(r, c);
  for (double& v : s) v /= static_cast<double>(embeddings.rows());
  return s;
}

std::vector<std::size_t> shuffle_negatives(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw SizeError("shuffle_negatives: need at least 2 summaries, got " + std::to_string(n));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng = make_rng(seed, seed_role::kShuffle);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::size_t> fixed;
  for (std::size_t i = 0; i < n; ++i)
    if (perm[i] == i) fixed.push_back(i);
  if (fixed.size() == 1) {
    std::swap(perm[fixed[0]], perm[(fixed[0] + 1) % n]);
  } else if (fixed.size() > 1) {
    for (std::size_t i = 0; i < fixed.size(); ++i) perm[fixed[i]] = fixed[(i + 1) % fixed.size()];
  }
  return perm;
}

std::vector<std::vector<double>> shuffle_negatives(const std::vector<std::vector<double>>& summaries,
                                                   std::uint64_t seed) {
  const auto perm = shuffle_negatives(summaries.size(), seed);
  std::vector<std::vector<double>> out;
  out.reserve(perm.size());
  for (std::size_t i : perm) out.push_back(summaries[i]);
  return out;
}

namespace {

void write_double(std::ostream& os, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, ptr - buf);
}

double read_double(const std::string& token, const std::filesystem::path& path) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(path.string() + ": bad number '" + token + "' in checkpoint");
  }
  return v;
}

}  // namespace

void save_checkpoint(const GcnParams& params, const CheckpointMeta& meta, const std::filesystem::path& path) {
  params.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "acgcl-checkpoint v1\n";
  for (const auto& [k, v] : meta) out << "meta " << k << '=' << v << '\n';
  out << "layers " << params.layers.size() << '\n';
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    out << "layer " << l << ' ' << layer.weight.rows() << ' ' << layer.weight.cols() << ' ';
    write_double(out, layer.slope);
    out << '\n';
    for (std::size_t r = 0; r < layer.weight.rows(); ++r) {
      for (std::size_t c = 0; c < layer.weight.cols(); ++c) {
        if (c) out << ',';
        write_double(out, layer.weight(r, c));
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

GcnParams load_checkpoint(const std::filesystem::path& path, CheckpointMeta* meta) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "acgcl-checkpoint v1") {
    throw ParseError(path.string() + ": not an acgcl-checkpoint v1 file");
  }
  if (meta) meta->clear();
  std::size_t n_layers = 0;
  while (std::getline(in, line)) {
    if (line.rfind("meta ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(path.string() + ": malformed meta line");
      if (meta) meta->emplace_back(line.substr(5, eq - 5), line.substr(eq + 1));
      continue;
    }
    std::istringstream ss(line);
    std::string tag;
    ss >> tag >> n_layers;
    if (tag != "layers" || !ss) throw ParseError(path.string() + ": expected 'layers <count>'");
    break;
  }
  GcnParams params;
  for (std::size_t l = 0; l < n_layers; ++l) {
    if (!std::getline(in, line)) throw ParseError(path.string() + ": truncated checkpoint");
    std::istringstream ss(line);
    std::string tag, slope_token;
    std::size_t index = 0, rows = 0, cols = 0;
    ss >> tag >> index >> rows >> cols >> slope_token;
    if (tag != "layer" || index != l || !ss) throw ParseError(path.string() + ": bad layer header '" + line + "'");
    GcnLayer layer{Matrix(rows, cols), read_double(slope_token, path)};
    for (std::size_t r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) throw ParseError(path.string() + ": truncated weights");
      std::istringstream row(line);
      std::string cell;
      std::size_t c = 0;
      while (std::getline(row, cell, ',')) {
        if (c >= cols) throw ParseError(path.string() + ": too many weights in a row");
        layer.weight(r, c++) = read_double(cell, path);
      }
      if (c != cols) throw ParseError(path.string() + ": too few weights in a row");
    }
    params.layers.push_back(std::move(layer));
  }
  params.validate();
  return params;
}

}  // namespace acgcl
