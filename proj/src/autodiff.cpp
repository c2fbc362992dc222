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

#include "acgcl/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acgcl/error.hpp"
#include "acgcl/kernels.hpp"

namespace acgcl::ad {
namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void same_shape(Var a, Var b, const char* op) {
  if (a.tape() != b.tape()) throw ContractError(std::string(op) + ": operands live on different tapes");
  if (!a.value().same_shape(b.value())) {
    throw ShapeError(std::string(op) + ": " + shape(a.value()) + " vs " + shape(b.value()));
  }
}

void accumulate(Tape& t, Var in, const Matrix& delta) {
  if (t.requires_grad(in.id())) t.grad(in.id()) += delta;
}

double sigmoid_scalar(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

const Matrix& Var::value() const { return tape_->value(id_); }
const Matrix& Var::grad() const { return tape_->grad(id_); }
bool Var::requires_grad() const { return tape_->requires_grad(id_); }

Var Tape::variable(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, true, {}});
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, false, {}});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, Backward backward) {
  bool needs = false;
  for (const Var& in : inputs) {
    if (in.tape() != this) throw ContractError("record: input belongs to another tape");
    needs = needs || requires_grad(in.id());
  }
  nodes_.push_back(Node{std::move(value), {}, needs, needs ? std::move(backward) : Backward{}});
  return Var(this, nodes_.size() - 1);
}

Matrix& Tape::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (!n.grad.same_shape(n.value)) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::backward(Var root) {
  if (root.tape() != this) throw ContractError("backward: root belongs to another tape");
  const Matrix& v = value(root.id());
  if (v.rows() != 1 || v.cols() != 1) throw ContractError("backward: root must be a scalar, got " + shape(v));
  for (auto& n : nodes_) n.grad = Matrix();
  grad(root.id())(0, 0) = 1.0;
  for (std::size_t id = root.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.requires_grad || !n.backward || !n.grad.same_shape(n.value)) continue;
    n.backward(*this, id);
  }
}

Var matmul(Var a, Var b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: " + shape(a.value()) + " * " + shape(b.value()));
  return a.tape()->record(acgcl::matmul(a.value(), b.value()), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id())) t.grad(a.id()) += matmul_nt(g, b.value());
    if (t.requires_grad(b.id())) t.grad(b.id()) += matmul_tn(a.value(), g);
  });
}

Var add(Var a, Var b) {
  same_shape(a, b, "add");
  return a.tape()->record(a.value() + b.value(), {a, b}, [a, b](Tape& t, std::size_t self) {
    accumulate(t, a, t.grad(self));
    accumulate(t, b, t.grad(self));
  });
}

Var sub(Var a, Var b) {
  same_shape(a, b, "sub");
  return a.tape()->record(a.value() - b.value(), {a, b}, [a, b](Tape& t, std::size_t self) {
    accumulate(t, a, t.grad(self));
    if (t.requires_grad(b.id())) t.grad(b.id()) -= t.grad(self);
  });
}

Var scale(Var a, double s) {
  return a.tape()->record(a.value() * s, {a}, [a, s](Tape& t, std::size_t self) {
    accumulate(t, a, t.grad(self) * s);
  });
}

Var add_scalar(Var a, double s) {
  Matrix out = a.value();
  for (double& v : out.values()) v += s;
  return a.tape()->record(std::move(out), {a}, [a](Tape& t, std::size_t self) { accumulate(t, a, t.grad(self)); });
}

Var mul(Var a, Var b) {
  same_shape(a, b, "mul");
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= b.value().data()[i];
  return a.tape()->record(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id())) {
      Matrix& ga = t.grad(a.id());
      for (std::size_t i = 0; i < g.size(); ++i) ga.data()[i] += g.data()[i] * b.value().data()[i];
    }
    if (t.requires_grad(b.id())) {
      Matrix& gb = t.grad(b.id());
      for (std::size_t i = 0; i < g.size(); ++i) gb.data()[i] += g.data()[i] * a.value().data()[i];
    }
  });
}

Var prelu(Var x, Var slope) {
  const double s = slope.value().item();
  Matrix out = x.value();
  for (double& v : out.values())
    if (v <= 0.0) v *= s;
  return x.tape()->record(std::move(out), {x, slope}, [x, slope](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& xv = x.value();
    const double s = slope.value().item();
    if (t.requires_grad(x.id())) {
      Matrix& gx = t.grad(x.id());
      for (std::size_t i = 0; i < g.size(); ++i) gx.data()[i] += xv.data()[i] > 0.0 ? g.data()[i] : s * g.data()[i];
    }
    if (t.requires_grad(slope.id())) {
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (xv.data()[i] <= 0.0) acc += g.data()[i] * xv.data()[i];
      t.grad(slope.id())(0, 0) += acc;
    }
  });
}

Var relu(Var x) {
  Matrix out = x.value();
  for (double& v : out.values()) v = std::max(v, 0.0);
  return x.tape()->record(std::move(out), {x}, [x](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& gx = t.grad(x.id());
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x.value().data()[i] > 0.0) gx.data()[i] += g.data()[i];
  });
}

Var sigmoid(Var x) {
  Matrix out = x.value();
  for (double& v : out.values()) v = sigmoid_scalar(v);
  return x.tape()->record(std::move(out), {x}, [x](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& y = t.value(self);
    Matrix& gx = t.grad(x.id());
    for (std::size_t i = 0; i < g.size(); ++i) gx.data()[i] += g.data()[i] * y.data()[i] * (1.0 - y.data()[i]);
  });
}

Var sum(Var x) {
  double acc = 0.0;
  for (double v : x.value().values()) acc += v;
  return x.tape()->record(Matrix::scalar(acc), {x}, [x](Tape& t, std::size_t self) {
    const double g = t.grad(self).item();
    for (double& v : t.grad(x.id()).values()) v += g;
  });
}

Var weighted_sum(Var column, std::span<const double> w) {
  if (column.cols() != 1 || column.rows() != w.size()) {
    throw ShapeError("weighted_sum: " + shape(column.value()) + " with " + std::to_string(w.size()) + " weights");
  }
  std::vector<double> weights(w.begin(), w.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * column.value()(i, 0);
  return column.tape()->record(Matrix::scalar(acc), {column}, [column, weights](Tape& t, std::size_t self) {
    const double g = t.grad(self).item();
    Matrix& gc = t.grad(column.id());
    for (std::size_t i = 0; i < weights.size(); ++i) gc(i, 0) += g * weights[i];
  });
}

Var broadcast_add(Var column, Var scalar) {
  if (column.cols() != 1 || scalar.rows() != 1 || scalar.cols() != 1) {
    throw ShapeError("broadcast_add: " + shape(column.value()) + " + " + shape(scalar.value()));
  }
  Matrix out = column.value();
  const double s = scalar.value().item();
  for (double& v : out.values()) v += s;
  return column.tape()->record(std::move(out), {column, scalar}, [column, scalar](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    accumulate(t, column, g);
    if (t.requires_grad(scalar.id())) {
      double acc = 0.0;
      for (double v : g.values()) acc += v;
      t.grad(scalar.id())(0, 0) += acc;
    }
  });
}

Var block_propagate(std::shared_ptr<const std::vector<Matrix>> blocks, Var z) {
  std::size_t total = 0;
  for (const Matrix& b : *blocks) {
    if (b.rows() != b.cols()) throw ShapeError("block_propagate: block " + shape(b) + " is not square");
    total += b.rows();
  }
  if (total != z.rows()) {
    throw ShapeError("block_propagate: blocks cover " + std::to_string(total) + " rows, input has " +
                     std::to_string(z.rows()));
  }
  const auto& k = kernels::active();
  const std::size_t d = z.cols();
  Matrix out(z.rows(), d);
  std::size_t offset = 0;
  for (const Matrix& b : *blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (const double w = b(i, j); w != 0.0) k.axpy(w, z.value().data() + (offset + j) * d, out.data() + (offset + i) * d, d);
    offset += b.rows();
  }
  return z.tape()->record(std::move(out), {z}, [blocks, z](Tape& t, std::size_t self) {
    const auto& k = kernels::active();
    const Matrix& g = t.grad(self);
    Matrix& gz = t.grad(z.id());
    const std::size_t d = g.cols();
    std::size_t offset = 0;
    for (const Matrix& b : *blocks) {
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
          if (const double w = b(i, j); w != 0.0) k.axpy(w, g.data() + (offset + i) * d, gz.data() + (offset + j) * d, d);
      offset += b.rows();
    }
  });
}

Var gather_rows(Var x, std::vector<std::size_t> rows) {
  const std::size_t d = x.cols();
  Matrix out(rows.size(), d);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= x.rows()) throw IndexError("gather_rows: row " + std::to_string(rows[r]) + " out of range");
    const auto src = x.value().row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return x.tape()->record(std::move(out), {x}, [x, rows = std::move(rows)](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& gx = t.grad(x.id());
    for (std::size_t r = 0; r < rows.size(); ++r) kernels::axpy(1.0, g.row(r), gx.row(rows[r]));
  });
}

Var segment_mean(Var x, std::size_t group) {
  if (group == 0 || x.rows() % group != 0) {
    throw ShapeError("segment_mean: " + std::to_string(x.rows()) + " rows not divisible into groups of " +
                     std::to_string(group));
  }
  const std::size_t n = x.rows() / group;
  const double inv = 1.0 / static_cast<double>(group);
  Matrix out(n, x.cols());
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t r = 0; r < group; ++r) kernels::axpy(inv, x.value().row(s * group + r), out.row(s));
  return x.tape()->record(std::move(out), {x}, [x, group, inv](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& gx = t.grad(x.id());
    for (std::size_t s = 0; s < g.rows(); ++s)
      for (std::size_t r = 0; r < group; ++r) kernels::axpy(inv, g.row(s), gx.row(s * group + r));
  });
}

Var row_squared_distance(Var a, Var b) {
  same_shape(a, b, "row_squared_distance");
  Matrix out(a.rows(), 1);
  for (std::size_t r = 0; r < a.rows(); ++r) out(r, 0) = kernels::squared_distance(a.value().row(r), b.value().row(r));
  return a.tape()->record(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const std::size_t d = a.cols();
    std::vector<double> diff(d);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      const auto ar = a.value().row(r);
      const auto br = b.value().row(r);
      for (std::size_t c = 0; c < d; ++c) diff[c] = ar[c] - br[c];
      const double w = 2.0 * g(r, 0);
      if (t.requires_grad(a.id())) kernels::axpy(w, diff, t.grad(a.id()).row(r));
      if (t.requires_grad(b.id())) kernels::axpy(-w, diff, t.grad(b.id()).row(r));
    }
  });
}

Var row_dot(Var a, Var b) {
  same_shape(a, b, "row_dot");
  Matrix out(a.rows(), 1);
  for (std::size_t r = 0; r < a.rows(); ++r) out(r, 0) = kernels::dot(a.value().row(r), b.value().row(r));
  return a.tape()->record(std::move(out), {a, b}, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      if (t.requires_grad(a.id())) kernels::axpy(g(r, 0), b.value().row(r), t.grad(a.id()).row(r));
      if (t.requires_grad(b.id())) kernels::axpy(g(r, 0), a.value().row(r), t.grad(b.id()).row(r));
    }
  });
}

}  // namespace acgcl::ad
