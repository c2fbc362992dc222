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

#include <random>

#include "doctest.h"
#include "support.hpp"

#include "acgcl/error.hpp"
#include "acgcl/sinkhorn.hpp"

using namespace acgcl;
using acgcl::testing::exact_w1_1d;
using acgcl::testing::gradient_check;
using acgcl::testing::random_matrix;

namespace {

Matrix points(const std::vector<double>& xs) {
  Matrix m(xs.size(), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) m(i, 0) = xs[i];
  return m;
}

}  // namespace

TEST_CASE("exact 1-D oracle on hand examples") {
  CHECK(exact_w1_1d({0, 1}, {2, 3}) == doctest::Approx(2.0));
  CHECK(exact_w1_1d({0}, {0, 1}) == doctest::Approx(0.5));
  CHECK(exact_w1_1d({1, 5, 3}, {3, 1, 5}) == doctest::Approx(0.0));
}

TEST_CASE("sinkhorn on trivial and small sets") {
  CHECK(sinkhorn_w1(Matrix{{0.0, 0.0}}, Matrix{{3.0, 4.0}}) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(sinkhorn_w1(points({0, 1}), points({2, 3})) == doctest::Approx(2.0).epsilon(0.05));
  const Matrix p = points({0.3, -1.0, 2.0});
  CHECK(sinkhorn_w1(p, p) == 0.0);
  CHECK(sinkhorn_w1(p, points({2.0, 0.3, -1.0})) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("sinkhorn symmetry and accuracy against the exact 1-D distance") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 32);
  std::normal_distribution<double> g(0.0, 1.0);
  SinkhornConfig cfg;
  cfg.reg_scale = 0.01;
  cfg.max_iters = 20000;
  cfg.tolerance = 1e-10;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(size(rng)), b(size(rng));
    for (double& v : a) v = g(rng);
    for (double& v : b) v = g(rng) + 0.5;
    const double s = sinkhorn_w1(points(a), points(b), cfg);
    CHECK(std::abs(s - sinkhorn_w1(points(b), points(a), cfg)) <= 1e-8);
    CHECK(s == doctest::Approx(exact_w1_1d(a, b)).epsilon(0.05));
  }
}

TEST_CASE("transport plan marginals") {
  std::mt19937_64 rng(2);
  const Matrix p = random_matrix(5, 2, rng), q = random_matrix(7, 2, rng);
  const TransportPlan t = entropic_transport(euclidean_cost(p, q), 0.3, 1000, 1e-12);
  CHECK(t.converged);
  for (std::size_t i = 0; i < 5; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < 7; ++j) row += t.plan(i, j);
    CHECK(row == doctest::Approx(1.0 / 5).epsilon(1e-9));
  }
  for (std::size_t j = 0; j < 7; ++j) {
    double col = 0;
    for (std::size_t i = 0; i < 5; ++i) col += t.plan(i, j);
    CHECK(col == doctest::Approx(1.0 / 7).epsilon(1e-9));
  }
}

TEST_CASE("log domain takes over when the kernel underflows") {
  const Matrix p = points({0.0, 1.0, 2.0}), q = points({50.0, 51.0});
  const TransportPlan t = entropic_transport(euclidean_cost(p, q), 0.01, 500, 1e-10);
  CHECK(t.log_domain);
  CHECK(t.converged);
  SinkhornConfig cfg;
  cfg.absolute_reg = 0.01;
  CHECK(sinkhorn_w1(p, q, cfg) == doctest::Approx(exact_w1_1d({0, 1, 2}, {50, 51})).epsilon(0.01));
}

TEST_CASE("sinkhorn gradients match finite differences") {
  std::mt19937_64 rng(5);
  SinkhornConfig cfg;
  cfg.absolute_reg = 0.5;
  cfg.max_iters = 20000;
  cfg.tolerance = 1e-13;
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix p = random_matrix(4, 2, rng), q = random_matrix(5, 2, rng);
    auto fn = [&](ad::Tape&, const std::vector<ad::Var>& v) { return sinkhorn_w1(v[0], v[1], cfg); };
    CHECK(gradient_check(fn, {p, q}) < 1e-4);
  }
}

TEST_CASE("sinkhorn configuration errors") {
  SinkhornConfig cfg;
  cfg.reg_scale = 0.0;
  CHECK_THROWS_AS(sinkhorn_w1(points({0}), points({1}), cfg), ConfigError);
  CHECK_THROWS_AS(sinkhorn_w1(Matrix(0, 1), points({1})), SizeError);
  CHECK_THROWS_AS(sinkhorn_w1(Matrix(1, 2), points({1})), ShapeError);
}

TEST_CASE("divergence equals the three general transport values") {
  std::mt19937_64 rng(12);
  for (const double eps : {0.05, 0.4, 3.0}) {
    const Matrix p = random_matrix(9, 3, rng), q = random_matrix(6, 3, rng);
    SinkhornConfig cfg;
    cfg.absolute_reg = eps;
    cfg.max_iters = 100000;
    cfg.tolerance = 1e-12;
    auto ot = [&](const Matrix& x, const Matrix& y) {
      return entropic_transport(euclidean_cost(x, y), eps, cfg.max_iters, cfg.tolerance).value;
    };
    const double want = ot(p, q) - 0.5 * ot(p, p) - 0.5 * ot(q, q);
    CHECK(sinkhorn_w1(p, q, cfg) == doctest::Approx(std::max(want, 0.0)).epsilon(1e-8));
  }
}
