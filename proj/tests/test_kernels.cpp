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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "acgcl/error.hpp"
#include "acgcl/kernels.hpp"

using namespace acgcl;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

void check_against_scalar(const kernels::KernelTable& simd) {
  const auto& ref = kernels::scalar::table();
  std::mt19937_64 rng(11);
  // Lengths cover empty input, partial vectors and every tail size.
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 100u, 1023u}) {
    const auto a = random_vector(n, rng);
    const auto b = random_vector(n, rng);
    const double tol = 1e-12 * static_cast<double>(n + 1);
    CHECK(simd.dot(a.data(), b.data(), n) == doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(tol));
    CHECK(simd.squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(ref.squared_distance(a.data(), b.data(), n)).epsilon(tol));
    CHECK(simd.manhattan_distance(a.data(), b.data(), n) ==
          doctest::Approx(ref.manhattan_distance(a.data(), b.data(), n)).epsilon(tol));
    auto y1 = b, y2 = b;
    ref.axpy(0.37, a.data(), y1.data(), n);
    simd.axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == doctest::Approx(y1[i]).epsilon(1e-15));
    std::vector<double> s1(n), s2(n);
    ref.scale(a.data(), -1.5, s1.data(), n);
    simd.scale(a.data(), -1.5, s2.data(), n);
    CHECK(s1 == s2);
  }
}

}  // namespace

TEST_CASE("scalar kernels on hand-computed inputs") {
  const auto& t = kernels::scalar::table();
  const double a[] = {1, 2, 3};
  const double b[] = {4, -5, 6};
  CHECK(t.dot(a, b, 3) == 12.0);
  CHECK(t.squared_distance(a, b, 3) == 9.0 + 49.0 + 9.0);
  CHECK(t.manhattan_distance(a, b, 3) == 3.0 + 7.0 + 3.0);
  double y[] = {1, 1, 1};
  t.axpy(2.0, a, y, 3);
  CHECK(y[2] == 7.0);
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
  for (auto backend : {kernels::Backend::avx2, kernels::Backend::neon}) {
    if (!kernels::available(backend)) continue;
    CAPTURE(kernels::table(backend).name);
    check_against_scalar(kernels::table(backend));
  }
}

TEST_CASE("backend selection") {
  CHECK(kernels::parse_backend("scalar") == kernels::Backend::scalar);
  CHECK_THROWS_AS(kernels::parse_backend("sse9"), ConfigError);
  const auto before = kernels::active().backend;
  kernels::select(kernels::Backend::scalar);
  CHECK(kernels::active().backend == kernels::Backend::scalar);
  kernels::select(before);
  if (!kernels::available(kernels::Backend::neon)) {
    CHECK_THROWS_AS(kernels::select(kernels::Backend::neon), ConfigError);
  }
}
