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

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "acgcl/autodiff.hpp"
#include "acgcl/matrix.hpp"

namespace acgcl::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = n(rng);
  return m;
}

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(k, j);
      c(i, j) = static_cast<double>(s);
    }
  return c;
}

using ScalarFn = std::function<ad::Var(ad::Tape&, const std::vector<ad::Var>&)>;

// Largest norm-wise relative error between reverse-mode gradients and
// central differences over all inputs.
inline double gradient_check(const ScalarFn& fn, const std::vector<Matrix>& inputs, double h = 1e-5) {
  ad::Tape tape;
  std::vector<ad::Var> vars;
  for (const auto& m : inputs) vars.push_back(tape.variable(m));
  const ad::Var out = fn(tape, vars);
  tape.backward(out);
  double worst = 0.0;
  for (std::size_t v = 0; v < inputs.size(); ++v) {
    const Matrix analytic = vars[v].grad();
    double max_diff = 0.0, max_mag = 1e-8;
    for (std::size_t e = 0; e < inputs[v].size(); ++e) {
      auto eval = [&](double delta) {
        std::vector<Matrix> shifted = inputs;
        shifted[v].data()[e] += delta;
        ad::Tape t;
        std::vector<ad::Var> vs;
        for (const auto& m : shifted) vs.push_back(t.constant(m));
        return fn(t, vs).value().item();
      };
      const double numeric = (eval(h) - eval(-h)) / (2.0 * h);
      max_diff = std::max(max_diff, std::abs(numeric - analytic.data()[e]));
      max_mag = std::max({max_mag, std::abs(numeric), std::abs(analytic.data()[e])});
    }
    worst = std::max(worst, max_diff / max_mag);
  }
  return worst;
}

// Exact 1-D Wasserstein-1 between uniform empirical measures: the integral of
// |F^-1(t) - G^-1(t)| over t in [0, 1], evaluated between merged breakpoints.
inline double exact_w1_1d(std::vector<double> p, std::vector<double> q) {
  std::sort(p.begin(), p.end());
  std::sort(q.begin(), q.end());
  const double m = static_cast<double>(p.size()), n = static_cast<double>(q.size());
  std::size_t i = 0, j = 0;
  double t = 0.0, total = 0.0;
  while (i < p.size() && j < q.size()) {
    const double next = std::min(static_cast<double>(i + 1) / m, static_cast<double>(j + 1) / n);
    total += (next - t) * std::abs(p[i] - q[j]);
    t = next;
    if (static_cast<double>(i + 1) / m <= next) ++i;
    if (static_cast<double>(j + 1) / n <= next) ++j;
  }
  return total;
}

// Ranks with ties averaged; Spearman correlation.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace acgcl::testing
