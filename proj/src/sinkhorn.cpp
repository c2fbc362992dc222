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

#include "acgcl/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "acgcl/error.hpp"
#include "acgcl/kernels.hpp"

namespace acgcl {

void SinkhornConfig::validate() const {
  if (!(reg_scale > 0.0)) throw ConfigError("sinkhorn_reg must be > 0");
  if (absolute_reg && !(*absolute_reg > 0.0)) throw ConfigError("absolute Sinkhorn strength must be > 0");
  if (max_iters < 1) throw ConfigError("sinkhorn_iters must be >= 1");
  if (!(tolerance > 0.0)) throw ConfigError("sinkhorn_tol must be > 0");
}

Matrix euclidean_cost(const Matrix& p, const Matrix& q) {
  if (p.cols() != q.cols()) {
    throw ShapeError("euclidean_cost: dimensions " + std::to_string(p.cols()) + " and " + std::to_string(q.cols()));
  }
  Matrix c(p.rows(), q.rows());
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < q.rows(); ++j) c(i, j) = std::sqrt(kernels::squared_distance(p.row(i), q.row(j)));
  return c;
}

namespace {

double log_sum_exp(const std::vector<double>& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

TransportPlan solve_log_domain(const Matrix& cost, double eps, std::size_t max_iters, double tolerance) {
  const std::size_t m = cost.rows(), n = cost.cols();
  const double log_a = -std::log(static_cast<double>(m));
  const double log_b = -std::log(static_cast<double>(n));
  std::vector<double> f(m, 0.0), g(n, 0.0), buf_m(m), buf_n(n);
  TransportPlan out;
  out.log_domain = true;
  auto update_f = [&] {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) buf_n[j] = log_b + (g[j] - cost(i, j)) / eps;
      f[i] = -eps * log_sum_exp(buf_n);
    }
  };
  auto update_g = [&] {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) buf_m[i] = log_a + (f[i] - cost(i, j)) / eps;
      g[j] = -eps * log_sum_exp(buf_m);
    }
  };
  for (std::size_t it = 1; it <= max_iters; ++it) {
    update_f();
    update_g();
    out.iterations = it;
    double violation = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) buf_n[j] = log_b + (g[j] - cost(i, j)) / eps;
      violation += std::abs(std::exp(log_a + f[i] / eps + log_sum_exp(buf_n)) - std::exp(log_a));
    }
    if (violation < tolerance) {
      out.converged = true;
      break;
    }
  }
  out.plan = Matrix(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out.plan(i, j) = std::exp(log_a + log_b + (f[i] + g[j] - cost(i, j)) / eps);
  double value = 0.0;
  for (double v : f) value += v;
  value /= static_cast<double>(m);
  double gv = 0.0;
  for (double v : g) gv += v;
  out.value = value + gv / static_cast<double>(n);
  return out;
}

// Returns false when the kernel under- or overflows.
bool solve_kernel_domain(const Matrix& cost, double eps, std::size_t max_iters, double tolerance,
                         TransportPlan& out) {
  const std::size_t m = cost.rows(), n = cost.cols();
  const double a = 1.0 / static_cast<double>(m);
  const double b = 1.0 / static_cast<double>(n);
  Matrix k(m, n);
  for (std::size_t i = 0; i < k.size(); ++i) k.data()[i] = std::exp(-cost.data()[i] / eps);
  std::vector<double> u(m, 1.0), v(n, 1.0), kv(m), ktu(n);
  auto compute_kv = [&] {
    for (std::size_t i = 0; i < m; ++i) kv[i] = kernels::dot(k.row(i), v);
  };
  compute_kv();
  for (std::size_t it = 1; it <= max_iters; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      if (!(kv[i] > 0.0) || !std::isfinite(kv[i])) return false;
      u[i] = a / kv[i];
    }
    std::fill(ktu.begin(), ktu.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) kernels::axpy(u[i], k.row(i), ktu);
    for (std::size_t j = 0; j < n; ++j) {
      if (!(ktu[j] > 0.0) || !std::isfinite(ktu[j])) return false;
      v[j] = b / ktu[j];
    }
    out.iterations = it;
    compute_kv();
    double violation = 0.0;
    for (std::size_t i = 0; i < m; ++i) violation += std::abs(u[i] * kv[i] - a);
    if (!std::isfinite(violation)) return false;
    if (violation < tolerance) {
      out.converged = true;
      break;
    }
  }
  out.plan = Matrix(m, n);
  double value = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(u[i] > 0.0) || !std::isfinite(u[i])) return false;
    value += a * eps * std::log(u[i] / a);
    for (std::size_t j = 0; j < n; ++j) out.plan(i, j) = u[i] * k(i, j) * v[j];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(v[j] > 0.0) || !std::isfinite(v[j])) return false;
    value += b * eps * std::log(v[j] / b);
  }
  out.value = value;
  out.log_domain = false;
  return std::isfinite(value);
}

// Symmetric problem (square symmetric cost, equal marginals): the potentials
// coincide, so iterate the averaged update u <- sqrt(u * a / Ku), which
// converges in a handful of steps.
bool solve_symmetric_kernel(const Matrix& cost, double eps, std::size_t max_iters, double tolerance,
                            TransportPlan& out) {
  const std::size_t n = cost.rows();
  const double a = 1.0 / static_cast<double>(n);
  Matrix k(n, n);
  for (std::size_t i = 0; i < k.size(); ++i) k.data()[i] = std::exp(-cost.data()[i] / eps);
  std::vector<double> u(n, 1.0), ku(n);
  auto compute_ku = [&] {
    for (std::size_t i = 0; i < n; ++i) ku[i] = kernels::dot(k.row(i), u);
  };
  compute_ku();
  for (std::size_t it = 1; it <= max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(ku[i] > 0.0) || !std::isfinite(ku[i])) return false;
      u[i] = std::sqrt(u[i] * a / ku[i]);
    }
    out.iterations = it;
    compute_ku();
    double violation = 0.0;
    for (std::size_t i = 0; i < n; ++i) violation += std::abs(u[i] * ku[i] - a);
    if (!std::isfinite(violation)) return false;
    if (violation < tolerance) {
      out.converged = true;
      break;
    }
  }
  out.plan = Matrix(n, n);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(u[i] > 0.0) || !std::isfinite(u[i])) return false;
    value += 2.0 * a * eps * std::log(u[i] / a);
    for (std::size_t j = 0; j < n; ++j) out.plan(i, j) = u[i] * k(i, j) * u[j];
  }
  out.value = value;
  out.log_domain = false;
  return std::isfinite(value);
}

TransportPlan self_transport(const Matrix& cost, double eps, std::size_t max_iters, double tolerance) {
  double max_ratio = 0.0;
  for (double c : cost.values()) max_ratio = std::max(max_ratio, c / eps);
  TransportPlan out;
  if (max_ratio < 500.0 && solve_symmetric_kernel(cost, eps, max_iters, tolerance, out)) return out;
  return solve_log_domain(cost, eps, max_iters, tolerance);
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

// Median cross cost, falling back to the mean and then to 1 when degenerate.
double strength(const Matrix& cross_cost, const SinkhornConfig& config) {
  if (config.absolute_reg) return *config.absolute_reg;
  std::vector<double> all(cross_cost.values().begin(), cross_cost.values().end());
  double scale = median_of(all);
  if (!(scale > 0.0)) {
    double mean = 0.0;
    for (double v : all) mean += v;
    scale = mean / static_cast<double>(all.size());
  }
  if (!(scale > 0.0)) scale = 1.0;
  return config.reg_scale * scale;
}

// Orders the pair so that (p, q) and (q, p) run the identical computation.
bool should_swap(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows()) return p.rows() > q.rows();
  const auto pv = p.values(), qv = q.values();
  return std::lexicographical_compare(qv.begin(), qv.end(), pv.begin(), pv.end());
}

struct Divergence {
  double value = 0.0;
  bool clamped = false;
  TransportPlan cross, self_p, self_q;
  Matrix cost_pq, cost_pp, cost_qq;
};

Divergence divergence(const Matrix& p, const Matrix& q, const SinkhornConfig& config) {
  config.validate();
  if (p.rows() == 0 || q.rows() == 0) throw SizeError("sinkhorn_w1: point sets must be non-empty");
  Divergence d;
  if (p == q) {
    d.clamped = true;
    return d;
  }
  d.cost_pq = euclidean_cost(p, q);
  d.cost_pp = euclidean_cost(p, p);
  d.cost_qq = euclidean_cost(q, q);
  const double eps = strength(d.cost_pq, config);
  d.cross = entropic_transport(d.cost_pq, eps, config.max_iters, config.tolerance);
  d.self_p = self_transport(d.cost_pp, eps, config.max_iters, config.tolerance);
  d.self_q = self_transport(d.cost_qq, eps, config.max_iters, config.tolerance);
  d.value = d.cross.value - 0.5 * d.self_p.value - 0.5 * d.self_q.value;
  if (!(d.value > 0.0)) {
    d.value = 0.0;
    d.clamped = true;
  }
  return d;
}

// Adds scale * sum_j plan_ij * dC(x_i, y_j)/dx_i to grad rows.
void add_plan_gradient(const Matrix& plan, const Matrix& cost, const Matrix& x, const Matrix& y, double scale,
                       Matrix& grad) {
  const std::size_t d = x.cols();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto gi = grad.row(i);
    for (std::size_t j = 0; j < y.rows(); ++j) {
      const double c = cost(i, j);
      if (c <= 0.0) continue;
      const double w = scale * plan(i, j) / c;
      for (std::size_t k = 0; k < d; ++k) gi[k] += w * (x(i, k) - y(j, k));
    }
  }
}

}  // namespace

TransportPlan entropic_transport(const Matrix& cost, double eps, std::size_t max_iters, double tolerance) {
  if (cost.rows() == 0 || cost.cols() == 0) throw SizeError("entropic_transport: empty cost matrix");
  if (!(eps > 0.0)) throw RangeError("entropic_transport: strength must be > 0");
  double max_ratio = 0.0;
  for (double c : cost.values()) max_ratio = std::max(max_ratio, c / eps);
  TransportPlan out;
  if (max_ratio < 500.0 && solve_kernel_domain(cost, eps, max_iters, tolerance, out)) return out;
  return solve_log_domain(cost, eps, max_iters, tolerance);
}

double sinkhorn_regularization(const Matrix& p, const Matrix& q, const SinkhornConfig& config) {
  return strength(euclidean_cost(p, q), config);
}

double sinkhorn_w1(const Matrix& p, const Matrix& q, const SinkhornConfig& config) {
  if (should_swap(p, q)) return divergence(q, p, config).value;
  return divergence(p, q, config).value;
}

ad::Var sinkhorn_w1(ad::Var p, ad::Var q, const SinkhornConfig& config) {
  if (p.tape() != q.tape()) throw ContractError("sinkhorn_w1: operands live on different tapes");
  const bool swapped = should_swap(p.value(), q.value());
  const ad::Var first = swapped ? q : p;
  const ad::Var second = swapped ? p : q;
  auto div = std::make_shared<Divergence>(divergence(first.value(), second.value(), config));
  const double value = div->value;
  return p.tape()->record(Matrix::scalar(value), {p, q}, [first, second, div](ad::Tape& t, std::size_t self) {
    if (div->clamped) return;
    const double g = t.grad(self).item();
    const Matrix& x = first.value();
    const Matrix& y = second.value();
    if (t.requires_grad(first.id())) {
      Matrix gx(x.rows(), x.cols());
      add_plan_gradient(div->cross.plan, div->cost_pq, x, y, g, gx);
      // Self terms: x appears in both arguments of the symmetric problem, so
      // the two halves combine into one pass with weight -1.
      add_plan_gradient(div->self_p.plan, div->cost_pp, x, x, -g, gx);
      t.grad(first.id()) += gx;
    }
    if (t.requires_grad(second.id())) {
      Matrix gy(y.rows(), y.cols());
      add_plan_gradient(div->cross.plan.transpose(), div->cost_pq.transpose(), y, x, g, gy);
      add_plan_gradient(div->self_q.plan, div->cost_qq, y, y, -g, gy);
      t.grad(second.id()) += gy;
    }
  });
}

}  // namespace acgcl
