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

#include "acgcl/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acgcl/error.hpp"
#include "acgcl/kernels.hpp"

namespace acgcl {

void LossWeights::validate() const {
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
  if (!(xi >= 0.0)) throw ConfigError("xi must be >= 0");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
}

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_triple(const Matrix& h, const Matrix& p, const Matrix& n, const char* op) {
  if (!h.same_shape(p) || !h.same_shape(n)) throw ShapeError(std::string(op) + ": embedding shapes differ");
}

}  // namespace

double inter_graph_loss(const Matrix& h, const Matrix& h_pos, const Matrix& h_neg, double xi) {
  check_triple(h, h_pos, h_neg, "inter_graph_loss");
  if (h.rows() == 0) throw SizeError("inter_graph_loss: no rows");
  double total = 0.0;
  for (std::size_t j = 0; j < h.rows(); ++j) {
    const double term =
        kernels::squared_distance(h.row(j), h_pos.row(j)) - kernels::squared_distance(h.row(j), h_neg.row(j)) + xi;
    total += std::max(term, 0.0);
  }
  return total / static_cast<double>(h.rows());
}

double intra_graph_loss(std::span<const double> h_center, std::span<const double> s, std::span<const double> s_neg,
                        double epsilon) {
  if (h_center.size() != s.size() || s.size() != s_neg.size()) {
    throw ShapeError("intra_graph_loss: vector dimensions differ");
  }
  return std::max(sigmoid(kernels::dot(h_center, s_neg)) - sigmoid(kernels::dot(h_center, s)) + epsilon, 0.0);
}

double balance_loss(const Matrix& h, const Matrix& h_pos, const Matrix& h_neg, const SinkhornConfig& config) {
  return sinkhorn_w1(h, h_pos, config) + sinkhorn_w1(h, h_neg, config);
}

SampleLossBreakdown breakdown(double intra, double inter, double balance, const LossWeights& weights,
                              std::size_t n) {
  if (n == 0) throw SizeError("per_sample_loss: N must be positive");
  SampleLossBreakdown b;
  b.intra = intra;
  b.inter = inter;
  b.balance_share = weights.alpha * balance / static_cast<double>(n);
  b.total = b.intra + b.balance_share + weights.beta * b.inter;
  return b;
}

double per_sample_loss(double intra, double inter, double balance, const LossWeights& weights, std::size_t n) {
  return breakdown(intra, inter, balance, weights, n).total;
}

double weighted_total_loss(std::span<const double> losses, std::span<const double> weights, bool normalize) {
  if (losses.size() != weights.size()) {
    throw ShapeError("weighted_total_loss: " + std::to_string(losses.size()) + " losses but " +
                     std::to_string(weights.size()) + " weights");
  }
  double total = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    total += weights[i] * losses[i];
    if (weights[i] != 0.0) ++active;
  }
  if (normalize) return active == 0 ? 0.0 : total / static_cast<double>(active);
  return total;
}

ad::Var inter_graph_loss(ad::Var h, ad::Var h_pos, ad::Var h_neg, std::size_t k, double xi) {
  const ad::Var margin = ad::add_scalar(ad::sub(ad::row_squared_distance(h, h_pos), ad::row_squared_distance(h, h_neg)), xi);
  return ad::segment_mean(ad::relu(margin), k);
}

ad::Var intra_graph_loss(ad::Var h, std::size_t k, const std::vector<std::size_t>& negatives, double epsilon) {
  if (k == 0 || h.rows() % k != 0) throw ShapeError("intra_graph_loss: rows not divisible by K");
  const std::size_t b = h.rows() / k;
  if (negatives.size() != b) {
    throw ShapeError("intra_graph_loss: " + std::to_string(negatives.size()) + " negatives for " +
                     std::to_string(b) + " subgraphs");
  }
  std::vector<std::size_t> centers(b);
  for (std::size_t i = 0; i < b; ++i) centers[i] = i * k;
  const ad::Var center = ad::gather_rows(h, std::move(centers));
  const ad::Var summary = ad::segment_mean(h, k);
  const ad::Var shuffled = ad::gather_rows(summary, negatives);
  const ad::Var diff = ad::sub(ad::sigmoid(ad::row_dot(center, shuffled)), ad::sigmoid(ad::row_dot(center, summary)));
  return ad::relu(ad::add_scalar(diff, epsilon));
}

ad::Var balance_loss(ad::Var h, ad::Var h_pos, ad::Var h_neg, const SinkhornConfig& config) {
  return ad::add(sinkhorn_w1(h, h_pos, config), sinkhorn_w1(h, h_neg, config));
}

ad::Var per_sample_loss(ad::Var intra, ad::Var inter, ad::Var balance, const LossWeights& weights) {
  if (intra.rows() == 0) throw SizeError("per_sample_loss: empty batch");
  const double n = static_cast<double>(intra.rows());
  const ad::Var base = ad::add(intra, ad::scale(inter, weights.beta));
  return ad::broadcast_add(base, ad::scale(balance, weights.alpha / n));
}

ad::Var weighted_total_loss(ad::Var losses, std::span<const double> weights, bool normalize) {
  if (losses.rows() != weights.size() || losses.cols() != 1) {
    throw ShapeError("weighted_total_loss: " + std::to_string(losses.rows()) + " losses but " +
                     std::to_string(weights.size()) + " weights");
  }
  const ad::Var total = ad::weighted_sum(losses, weights);
  if (!normalize) return total;
  std::size_t active = 0;
  for (double w : weights)
    if (w != 0.0) ++active;
  return ad::scale(total, active == 0 ? 0.0 : 1.0 / static_cast<double>(active));
}

}  // namespace acgcl
