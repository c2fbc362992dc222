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
#include <deque>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include "acgcl/matrix.hpp"

// Minimal reverse-mode differentiation over dense matrices. A Tape records
// every operation in evaluation order; backward() walks it in reverse and
// accumulates gradients into the nodes that require them.
namespace acgcl::ad {

class Tape;

class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  // Gradient of the last backward() root with respect to this node.
  const Matrix& grad() const;
  bool requires_grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

  std::size_t id() const noexcept { return id_; }
  Tape* tape() const noexcept { return tape_; }
  bool valid() const noexcept { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  // Called with the tape and the id of the node whose gradient is ready.
  using Backward = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var variable(Matrix value);
  Var constant(Matrix value);
  // Appends a node computed from `inputs`. The node requires a gradient if any
  // input does; `backward` is dropped otherwise.
  Var record(Matrix value, std::initializer_list<Var> inputs, Backward backward);

  // Seeds d(root)/d(root) = 1 and propagates. Root must be 1x1.
  void backward(Var root);

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Zero-initialized on first access.
  Matrix& grad(std::size_t id);
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Backward backward;
  };
  std::deque<Node> nodes_;
};

// Elementwise and linear-algebra operations. Shapes are checked eagerly and
// mismatches raise ShapeError.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
Var mul(Var a, Var b);  // elementwise
// x where x > 0, slope * x otherwise; slope is a 1x1 variable.
Var prelu(Var x, Var slope);
Var relu(Var x);
Var sigmoid(Var x);
Var sum(Var x);                                         // -> 1x1
Var weighted_sum(Var column, std::span<const double> w);  // column n x 1 -> 1x1, w constant
Var broadcast_add(Var column, Var scalar);              // n x 1 + 1x1 -> n x 1

// Row-block propagation: block i of the output is blocks[i] * (rows of z
// belonging to block i). Blocks are square and constant.
Var block_propagate(std::shared_ptr<const std::vector<Matrix>> blocks, Var z);
Var gather_rows(Var x, std::vector<std::size_t> rows);
// Mean over consecutive groups of `group` rows -> (rows / group) x cols.
Var segment_mean(Var x, std::size_t group);
// Per-row ||a_r - b_r||^2 and <a_r, b_r> -> n x 1.
Var row_squared_distance(Var a, Var b);
Var row_dot(Var a, Var b);

}  // namespace acgcl::ad
