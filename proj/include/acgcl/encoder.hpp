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
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "acgcl/augment.hpp"
#include "acgcl/autodiff.hpp"
#include "acgcl/matrix.hpp"
#include "acgcl/sampler.hpp"

namespace acgcl {

struct GcnLayer {
  Matrix weight;       // d_in x d_out
  double slope = 0.25;  // PReLU slope for x <= 0
};

struct GcnParams {
  std::vector<GcnLayer> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().weight.rows(); }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().weight.cols(); }
  void validate() const;
};

// Glorot-uniform weights, slopes at 0.25. Hidden width equals out_dim.
GcnParams init_gcn(std::size_t in_dim, std::size_t out_dim, std::size_t n_layers, std::uint64_t seed);

// D~^-1/2 (A + I) D~^-1/2 with D~ the degree matrix of A + I.
Matrix normalize_adjacency(const Matrix& adjacency);

using BlockList = std::shared_ptr<const std::vector<Matrix>>;

// Parameters bound to a tape, as trainable variables or constants.
struct GcnVars {
  std::vector<ad::Var> weights;
  std::vector<ad::Var> slopes;
};

GcnVars bind(ad::Tape& tape, const GcnParams& params, bool trainable);

// Stacked forward pass: rows of `x` are grouped into consecutive blocks, one
// per normalized adjacency in `blocks`.
ad::Var gcn_forward(const GcnVars& params, const BlockList& blocks, ad::Var x);

// Single-graph forward on a raw (unnormalized) adjacency.
Matrix gcn_forward(const GcnParams& params, const Matrix& adjacency, const Matrix& features);

struct TripleVars {
  ad::Var original;
  ad::Var positive;
  ad::Var negative;
};

// Forward passes of the original, positive and negative graphs over the same
// stacked features. The first layer's feature transform is shared.
TripleVars encode_triple(const GcnVars& params, ad::Var x, const BlockList& original, const BlockList& positive,
                         const BlockList& negative);

struct EmbeddingTriple {
  Matrix original;  // K x d
  Matrix positive;
  Matrix negative;
};

EmbeddingTriple encode_triple(const GcnParams& params, const Subgraph& subgraph, const MirrorGraphs& mirrors);

std::vector<double> readout_mean(const Matrix& embeddings);

// Derangement of [0, n): a uniform shuffle whose fixed points are repaired by
// rotating them among themselves (or swapping a lone one with its
// successor). Negative i is summaries[result[i]].
std::vector<std::size_t> shuffle_negatives(std::size_t n, std::uint64_t seed);
std::vector<std::vector<double>> shuffle_negatives(const std::vector<std::vector<double>>& summaries,
                                                   std::uint64_t seed);

// Text checkpoint:
//   acgcl-checkpoint v1
//   meta <key>=<value>        (any number)
//   layers <L>
//   layer <i> <rows> <cols> <slope>
//   <rows lines of comma-separated weights>
// Doubles use shortest round-trip formatting, so save/load is exact.
using CheckpointMeta = std::vector<std::pair<std::string, std::string>>;

void save_checkpoint(const GcnParams& params, const CheckpointMeta& meta, const std::filesystem::path& path);
GcnParams load_checkpoint(const std::filesystem::path& path, CheckpointMeta* meta = nullptr);

}  // namespace acgcl
