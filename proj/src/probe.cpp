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

#include "acgcl/probe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acgcl/error.hpp"

namespace acgcl {

namespace {

void standardized_row(const ProbeModel& m, std::span<const double> in, std::vector<double>& out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = (in[k] - m.mean[k]) * m.inv_std[k];
}

}  // namespace

std::vector<int> ProbeModel::predict(const Matrix& x, std::span<const NodeId> rows) const {
  const std::size_t d = weights.rows(), c = weights.cols();
  if (x.cols() != d) throw ShapeError("probe: feature width does not match the model");
  std::vector<int> out;
  out.reserve(rows.size());
  std::vector<double> z(d), logits(c);
  for (NodeId r : rows) {
    standardized_row(*this, x.row(r), z);
    for (std::size_t j = 0; j < c; ++j) {
      double s = bias[j];
      for (std::size_t k = 0; k < d; ++k) s += z[k] * weights(k, j);
      logits[j] = s;
    }
    out.push_back(static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin()));
  }
  return out;
}

ProbeModel fit_probe(const Matrix& x, std::span<const int> labels, std::span<const NodeId> train_rows,
                     std::size_t n_classes, const ProbeConfig& config) {
  if (train_rows.empty()) throw SizeError("probe: empty training split");
  if (n_classes < 1) throw ContractError("probe: no classes");
  const std::size_t d = x.cols(), c = n_classes, n = train_rows.size();
  ProbeModel m;
  m.weights = Matrix(d, c);
  m.bias.assign(c, 0.0);
  m.mean.assign(d, 0.0);
  m.inv_std.assign(d, 1.0);
  for (NodeId r : train_rows) {
    if (r >= x.rows() || r >= labels.size()) throw IndexError("probe: row " + std::to_string(r) + " out of range");
    for (std::size_t k = 0; k < d; ++k) m.mean[k] += x(r, k);
  }
  for (double& v : m.mean) v /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (NodeId r : train_rows)
    for (std::size_t k = 0; k < d; ++k) var[k] += (x(r, k) - m.mean[k]) * (x(r, k) - m.mean[k]);
  for (std::size_t k = 0; k < d; ++k) {
    const double sd = std::sqrt(var[k] / static_cast<double>(n));
    m.inv_std[k] = sd > 1e-12 ? 1.0 / sd : 1.0;
  }
  Matrix z(n, d);
  std::vector<double> buf(d);
  for (std::size_t i = 0; i < n; ++i) {
    standardized_row(m, x.row(train_rows[i]), buf);
    std::copy(buf.begin(), buf.end(), z.row(i).begin());
  }
  Matrix grad_w(d, c);
  std::vector<double> grad_b(c), p(c);
  for (std::size_t it = 0; it < config.iters; ++it) {
    grad_w.fill(0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto zi = z.row(i);
      double mx = -INFINITY;
      for (std::size_t j = 0; j < c; ++j) {
        double s = m.bias[j];
        for (std::size_t k = 0; k < d; ++k) s += zi[k] * m.weights(k, j);
        p[j] = s;
        mx = std::max(mx, s);
      }
      double total = 0.0;
      for (double& v : p) total += (v = std::exp(v - mx));
      const int y = labels[train_rows[i]];
      for (std::size_t j = 0; j < c; ++j) {
        const double delta = p[j] / total - (static_cast<int>(j) == y ? 1.0 : 0.0);
        grad_b[j] += delta;
        for (std::size_t k = 0; k < d; ++k) grad_w(k, j) += delta * zi[k];
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < c; ++j)
        m.weights(k, j) -= config.lr * (grad_w(k, j) * inv_n + config.l2 * m.weights(k, j));
    for (std::size_t j = 0; j < c; ++j) m.bias[j] -= config.lr * grad_b[j] * inv_n;
  }
  return m;
}

double probe_accuracy(const Matrix& x, std::span<const int> labels, std::span<const NodeId> train_rows,
                      std::span<const NodeId> eval_rows, const ProbeConfig& config) {
  if (eval_rows.empty()) throw SizeError("probe: empty evaluation split");
  int max_label = 0;
  for (int l : labels) {
    if (l < 0) throw ContractError("probe: negative label");
    max_label = std::max(max_label, l);
  }
  const ProbeModel m = fit_probe(x, labels, train_rows, static_cast<std::size_t>(max_label) + 1, config);
  const auto pred = m.predict(x, eval_rows);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < eval_rows.size(); ++i) {
    if (eval_rows[i] >= labels.size()) throw IndexError("probe: evaluation row out of range");
    if (pred[i] == labels[eval_rows[i]]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(eval_rows.size());
}

double evaluate_probe(const Matrix& embeddings, const Graph& graph, const ProbeConfig& config) {
  if (!graph.labels()) throw ContractError("probe needs node labels");
  if (!graph.splits()) throw ContractError("probe needs train/val/test splits");
  if (embeddings.rows() != graph.n_nodes()) throw ShapeError("probe: one embedding row per node expected");
  return probe_accuracy(embeddings, *graph.labels(), graph.splits()->train, graph.splits()->test, config);
}

}  // namespace acgcl
