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
#include <optional>

#include "acgcl/autodiff.hpp"
#include "acgcl/matrix.hpp"

namespace acgcl {

struct SinkhornConfig {
  // Entropic strength relative to the median cross cost between the two sets.
  double reg_scale = 0.05;
  // When set, used as the absolute strength instead.
  std::optional<double> absolute_reg;
  std::size_t max_iters = 200;
  // l1 violation of the row marginals at which scaling stops.
  double tolerance = 1e-6;

  void validate() const;
};

// Euclidean cost matrix between the rows of p and q.
Matrix euclidean_cost(const Matrix& p, const Matrix& q);

struct TransportPlan {
  Matrix plan;  // m x n, rows sum to 1/m and columns to 1/n at convergence
  double value = 0.0;  // dual objective <a, f> + <b, g>
  std::size_t iterations = 0;
  bool converged = false;
  bool log_domain = false;
};

// Entropic transport with uniform marginals: minimizes <P, C> + eps KL(P | a b^T).
// Scaling runs in the kernel domain and restarts in the log domain when the
// kernel underflows.
TransportPlan entropic_transport(const Matrix& cost, double eps, std::size_t max_iters, double tolerance);

// Strength actually used for a pair of sets under `config`.
double sinkhorn_regularization(const Matrix& p, const Matrix& q, const SinkhornConfig& config);

// Debiased Sinkhorn divergence OT(P,Q) - OT(P,P)/2 - OT(Q,Q)/2 with one shared
// strength, clamped at 0. Exactly symmetric in its arguments; zero for equal
// sets.
double sinkhorn_w1(const Matrix& p, const Matrix& q, const SinkhornConfig& config = {});

// Differentiable version. Gradients flow through the converged plans; the
// relative strength is held constant.
ad::Var sinkhorn_w1(ad::Var p, ad::Var q, const SinkhornConfig& config = {});

}  // namespace acgcl
