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
#include "acgcl/matrix.hpp"

using namespace acgcl;
using acgcl::testing::naive_matmul;
using acgcl::testing::random_matrix;

TEST_CASE("matrix products match a naive triple loop") {
  std::mt19937_64 rng(3);
  const Matrix a = random_matrix(5, 7, rng);
  const Matrix b = random_matrix(7, 4, rng);
  CHECK(max_abs_diff(matmul(a, b), naive_matmul(a, b)) < 1e-12);
  CHECK(max_abs_diff(matmul_tn(a.transpose(), b), naive_matmul(a, b)) < 1e-12);
  CHECK(max_abs_diff(matmul_nt(a, b.transpose()), naive_matmul(a, b)) < 1e-12);
  Matrix c(5, 4, 1.0);
  matmul_accumulate(a, b, c);
  CHECK(max_abs_diff(c, naive_matmul(a, b) + Matrix(5, 4, 1.0)) < 1e-12);
  CHECK_THROWS_AS(matmul(a, a), ShapeError);
}

TEST_CASE("elementwise operators and shape checks") {
  Matrix a{{1, 2}, {3, 4}};
  Matrix b{{0.5, 0.5}, {1, 1}};
  CHECK((a + b)(1, 1) == 5.0);
  CHECK((a - b)(0, 0) == 0.5);
  CHECK((a * 2.0)(1, 0) == 6.0);
  CHECK(a.transpose()(0, 1) == 3.0);
  CHECK_THROWS_AS(a += Matrix(3, 2), ShapeError);
  CHECK(Matrix::scalar(4.0).item() == 4.0);
  CHECK_THROWS_AS(a.item(), ShapeError);
  CHECK(Matrix::identity(3)(2, 2) == 1.0);
}

TEST_CASE("LU solve") {
  std::mt19937_64 rng(9);
  Matrix a = random_matrix(6, 6, rng);
  for (std::size_t i = 0; i < 6; ++i) a(i, i) += 4.0;
  const Matrix x = random_matrix(6, 2, rng);
  const Matrix b = naive_matmul(a, x);
  CHECK(max_abs_diff(solve(a, b), x) < 1e-10);
  Matrix singular{{1, 2}, {2, 4}};
  CHECK_THROWS_AS(solve(singular, Matrix(2, 1, 1.0)), NumericError);
}
