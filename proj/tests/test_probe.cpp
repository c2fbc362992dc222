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

#include "acgcl/error.hpp"
#include "acgcl/probe.hpp"

using namespace acgcl;

TEST_CASE("separable clusters are classified perfectly") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.3);
  Matrix x(200, 2);
  std::vector<int> y(200);
  std::vector<NodeId> train, test;
  for (NodeId i = 0; i < 200; ++i) {
    y[i] = i % 2;
    x(i, 0) = (y[i] ? 3.0 : -3.0) + g(rng);
    x(i, 1) = g(rng);
    (i < 100 ? train : test).push_back(i);
  }
  CHECK(probe_accuracy(x, y, train, test) == 1.0);
}

TEST_CASE("random labels give chance accuracy") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  Matrix x(2000, 4);
  std::vector<int> y(2000);
  std::vector<NodeId> train, test;
  for (NodeId i = 0; i < 2000; ++i) {
    for (int k = 0; k < 4; ++k) x(i, k) = g(rng);
    y[i] = coin(rng);
    (i < 1000 ? train : test).push_back(i);
  }
  CHECK(std::abs(probe_accuracy(x, y, train, test) - 0.5) < 0.1);
}

TEST_CASE("constant embeddings predict the majority class") {
  Matrix x(10, 3, 1.0);
  const std::vector<int> y{0, 1, 1, 1, 0, 1, 1, 0, 1, 1};
  const std::vector<NodeId> train{0, 1, 2, 3, 4}, test{5, 6, 7, 8, 9};
  CHECK(probe_accuracy(x, y, train, test) == doctest::Approx(0.8));
}

TEST_CASE("probe needs labels and splits") {
  Graph g(Matrix(4, 2), {});
  CHECK_THROWS_AS(evaluate_probe(Matrix(4, 2), g), ContractError);
  g.set_labels({0, 1, 0, 1});
  CHECK_THROWS_AS(evaluate_probe(Matrix(4, 2), g), ContractError);
}
