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

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"

#include "acgcl/encoder.hpp"
#include "acgcl/error.hpp"

using namespace acgcl;
using acgcl::testing::gradient_check;
using acgcl::testing::naive_matmul;
using acgcl::testing::random_matrix;

namespace {

GcnParams single_layer(Matrix w, double slope) {
  GcnParams p;
  p.layers.push_back({std::move(w), slope});
  return p;
}

Subgraph make_subgraph(const Matrix& x, const Matrix& a) {
  Subgraph s;
  s.features = x;
  s.adjacency = a;
  for (std::size_t i = 0; i < x.rows(); ++i) s.parent_indices.push_back(static_cast<NodeId>(i));
  return s;
}

}  // namespace

TEST_CASE("gcn_forward trivial configurations") {
  const Matrix x{{0.3, -1.2}};
  CHECK(gcn_forward(single_layer(Matrix::identity(2), 1.0), Matrix(1, 1), x) == x);
  std::mt19937_64 rng(1);
  const Matrix xs = random_matrix(4, 3, rng);
  Matrix a(4, 4);
  a(0, 1) = a(1, 0) = a(2, 3) = a(3, 2) = 1.0;
  CHECK(gcn_forward(single_layer(Matrix(3, 2), 0.25), a, xs) == Matrix(4, 2));
}

TEST_CASE("gcn_forward matches a direct matrix product") {
  std::mt19937_64 rng(2);
  const Matrix a{{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
  const Matrix x = random_matrix(3, 4, rng);
  const Matrix w = random_matrix(4, 2, rng);
  // Degrees with self-loops are 2, 3, 2.
  Matrix a_hat(3, 3);
  const double d[] = {2, 3, 2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a_hat(i, j) = (a(i, j) + (i == j)) / std::sqrt(d[i] * d[j]);
  CHECK(max_abs_diff(normalize_adjacency(a), a_hat) < 1e-15);
  Matrix expect = naive_matmul(naive_matmul(a_hat, x), w);
  for (double& v : expect.values())
    if (v <= 0) v *= 0.25;
  CHECK(max_abs_diff(gcn_forward(single_layer(w, 0.25), a, x), expect) < 1e-10);
  CHECK_THROWS_AS(gcn_forward(single_layer(w, 0.25), a, random_matrix(3, 5, rng)), ShapeError);
  CHECK_THROWS_AS(gcn_forward(single_layer(w, 0.25), Matrix(2, 2), x), ShapeError);
}

TEST_CASE("gcn_forward is permutation equivariant") {
  std::mt19937_64 rng(3);
  const GcnParams p = init_gcn(3, 5, 2, 7);
  const Matrix x = random_matrix(5, 3, rng);
  Matrix a(5, 5);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {3, 4}, {0, 4}}) a(i, j) = a(j, i) = 1;
  const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
  Matrix px(5, 3), pa(5, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t k = 0; k < 3; ++k) px(i, k) = x(perm[i], k);
    for (std::size_t j = 0; j < 5; ++j) pa(i, j) = a(perm[i], perm[j]);
  }
  const Matrix h = gcn_forward(p, a, x), ph = gcn_forward(p, pa, px);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 5; ++k) CHECK(ph(i, k) == doctest::Approx(h(perm[i], k)).epsilon(1e-12));
}

TEST_CASE("init_gcn shapes, bounds and determinism") {
  const GcnParams p = init_gcn(10, 6, 2, 3);
  REQUIRE(p.layers.size() == 2);
  CHECK(p.input_dim() == 10);
  CHECK(p.output_dim() == 6);
  CHECK(p.layers[1].weight.rows() == 6);
  const double limit = std::sqrt(6.0 / 16.0);
  for (double w : p.layers[0].weight.values()) CHECK(std::abs(w) <= limit);
  CHECK(p.layers[0].slope == 0.25);
  CHECK(init_gcn(10, 6, 2, 3).layers[0].weight == p.layers[0].weight);
  CHECK_THROWS_AS(init_gcn(10, 6, 3, 3), ConfigError);
}

TEST_CASE("encode_triple purity and shapes") {
  std::mt19937_64 rng(5);
  const GcnParams p = init_gcn(3, 4, 1, 1);
  Matrix a(4, 4);
  a(0, 1) = a(1, 0) = a(2, 3) = a(3, 2) = 1;
  const Subgraph s = make_subgraph(random_matrix(4, 3, rng), a);
  MirrorGraphs same{a, a, {}, {}};
  const EmbeddingTriple e = encode_triple(p, s, same);
  CHECK(e.original == e.positive);
  CHECK(e.original == e.negative);
  CHECK(e.original.rows() == 4);
  CHECK(e.original.cols() == 4);
  MirrorGraphs perturbed = same;
  perturbed.negative(0, 1) = perturbed.negative(1, 0) = 0.0;
  const EmbeddingTriple f = encode_triple(p, s, perturbed);
  CHECK(f.original == e.original);
  CHECK(f.positive == e.positive);
  CHECK_FALSE(f.negative == e.negative);
}

TEST_CASE("readout_mean") {
  CHECK(readout_mean(Matrix{{1, 2}, {3, 4}}) == std::vector<double>{2, 3});
  CHECK(readout_mean(Matrix{{7, -1}}) == std::vector<double>{7, -1});
  CHECK(readout_mean(Matrix{{0.5, 2}, {0.5, 2}, {0.5, 2}}) == std::vector<double>{0.5, 2});
}

TEST_CASE("shuffle_negatives is a seeded derangement") {
  const std::vector<std::vector<double>> two{{1.0}, {2.0}};
  CHECK(shuffle_negatives(two, 4) == std::vector<std::vector<double>>{{2.0}, {1.0}});
  for (std::size_t n : {2u, 3u, 4u, 7u, 50u}) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto p = shuffle_negatives(n, seed);
      CHECK(std::set<std::size_t>(p.begin(), p.end()).size() == n);
      for (std::size_t i = 0; i < n; ++i) CHECK(p[i] != i);
      CHECK(p == shuffle_negatives(n, seed));
    }
  }
  CHECK_THROWS_AS(shuffle_negatives(1, 0), SizeError);
}

TEST_CASE("GCN forward gradients match finite differences") {
  std::mt19937_64 rng(8);
  Matrix a(4, 4);
  a(0, 1) = a(1, 0) = a(1, 2) = a(2, 1) = a(0, 3) = a(3, 0) = 1;
  auto blocks = std::make_shared<const std::vector<Matrix>>(std::vector<Matrix>{normalize_adjacency(a)});
  const Matrix x = random_matrix(4, 3, rng);
  const Matrix target = random_matrix(4, 2, rng);
  auto fn = [&](ad::Tape& t, const std::vector<ad::Var>& v) {
    GcnVars p{{v[0], v[2]}, {v[1], v[3]}};
    const ad::Var h = gcn_forward(p, blocks, t.constant(x));
    return ad::sum(ad::mul(h, t.constant(target)));
  };
  CHECK(gradient_check(fn, {random_matrix(3, 2, rng), Matrix::scalar(0.25), random_matrix(2, 2, rng),
                            Matrix::scalar(0.1)}) < 1e-4);
}

TEST_CASE("checkpoint round trip is exact") {
  const GcnParams p = init_gcn(5, 3, 2, 11);
  const auto path = std::filesystem::path(ACGCL_TEST_TMP) / "ckpt.txt";
  std::filesystem::create_directories(path.parent_path());
  save_checkpoint(p, {{"seed", "11"}, {"note", "a=b"}}, path);
  CheckpointMeta meta;
  const GcnParams q = load_checkpoint(path, &meta);
  REQUIRE(q.layers.size() == 2);
  CHECK(q.layers[0].weight == p.layers[0].weight);
  CHECK(q.layers[1].weight == p.layers[1].weight);
  CHECK(q.layers[1].slope == p.layers[1].slope);
  REQUIRE(meta.size() == 2);
  CHECK(meta[1].second == "a=b");
  std::ofstream(path) << "not a checkpoint\n";
  CHECK_THROWS_AS(load_checkpoint(path), ParseError);
}
