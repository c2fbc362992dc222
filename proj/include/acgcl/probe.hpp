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

#include "acgcl/graph.hpp"
#include "acgcl/matrix.hpp"

namespace acgcl {

struct ProbeConfig {
  std::size_t iters = 500;
  double l2 = 1e-4;
  double lr = 0.5;
};

// Multinomial logistic regression on standardized features, fit by
// full-batch gradient descent from zero weights.
struct ProbeModel {
  Matrix weights;  // d x C
  std::vector<double> bias;
  std::vector<double> mean;
  std::vector<double> inv_std;

  std::vector<int> predict(const Matrix& x, std::span<const NodeId> rows) const;
};

ProbeModel fit_probe(const Matrix& x, std::span<const int> labels, std::span<const NodeId> train_rows,
                     std::size_t n_classes, const ProbeConfig& config = {});

// Fits on train_rows, returns accuracy on eval_rows.
double probe_accuracy(const Matrix& x, std::span<const int> labels, std::span<const NodeId> train_rows,
                      std::span<const NodeId> eval_rows, const ProbeConfig& config = {});

// Test-split accuracy. Throws ContractError when labels or splits are missing.
double evaluate_probe(const Matrix& embeddings, const Graph& graph, const ProbeConfig& config = {});

}  // namespace acgcl
