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
#include <span>
#include <vector>

#include "acgcl/autodiff.hpp"
#include "acgcl/matrix.hpp"
#include "acgcl/sinkhorn.hpp"

namespace acgcl {

struct LossWeights {
  double alpha = 1.0;    // balance term
  double beta = 1.0;     // inter-graph term
  double xi = 1.0;       // inter-graph margin
  double epsilon = 0.1;  // intra-graph margin

  void validate() const;
};

struct SampleLossBreakdown {
  double intra = 0.0;          // L_S^i
  double inter = 0.0;          // L_CL^i
  double balance_share = 0.0;  // alpha * L_Bal / N
  double total = 0.0;
};

// (1/K) sum_j [ |h_j - h+_j|^2 - |h_j - h-_j|^2 + xi ]_+
double inter_graph_loss(const Matrix& h, const Matrix& h_pos, const Matrix& h_neg, double xi);

// [ sig(h . s_neg) - sig(h . s) + epsilon ]_+
double intra_graph_loss(std::span<const double> h_center, std::span<const double> s, std::span<const double> s_neg,
                        double epsilon);

// W(H, H+) + W(H, H-) under Sinkhorn.
double balance_loss(const Matrix& h, const Matrix& h_pos, const Matrix& h_neg, const SinkhornConfig& config = {});

double per_sample_loss(double intra, double inter, double balance, const LossWeights& weights, std::size_t n);
SampleLossBreakdown breakdown(double intra, double inter, double balance, const LossWeights& weights,
                              std::size_t n);

// sum_i w_i L^i. With `normalize`, divided by the number of nonzero weights
// (0 when there are none).
double weighted_total_loss(std::span<const double> losses, std::span<const double> weights, bool normalize = false);

// Batched, differentiable forms over stacked embeddings: rows [iK, (i+1)K)
// belong to subgraph i and row iK is its center.

// B x 1 column of L_CL^i.
ad::Var inter_graph_loss(ad::Var h, ad::Var h_pos, ad::Var h_neg, std::size_t k, double xi);

// B x 1 column of L_S^i; the negative summary for subgraph i is the summary
// of subgraph negatives[i].
ad::Var intra_graph_loss(ad::Var h, std::size_t k, const std::vector<std::size_t>& negatives, double epsilon);

// 1 x 1 batch balance loss over all stacked rows.
ad::Var balance_loss(ad::Var h, ad::Var h_pos, ad::Var h_neg, const SinkhornConfig& config = {});

// B x 1 column of L^i = L_S^i + alpha/N L_Bal + beta L_CL^i with N = B.
ad::Var per_sample_loss(ad::Var intra, ad::Var inter, ad::Var balance, const LossWeights& weights);

ad::Var weighted_total_loss(ad::Var losses, std::span<const double> weights, bool normalize = false);

}  // namespace acgcl
