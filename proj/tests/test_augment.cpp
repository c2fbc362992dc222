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
#include <limits>
#include <optional>
#include <random>

#include "doctest.h"

#include "acgcl/augment.hpp"
#include "acgcl/error.hpp"

using namespace acgcl;

namespace {

// Subgraph over distinct parents 0..K-1 with the given 1-D features and edges.
Subgraph line_subgraph(const std::vector<double>& xs, const std::vector<std::pair<int, int>>& edges) {
  Subgraph s;
  const std::size_t k = xs.size();
  s.features = Matrix(k, 1);
  s.adjacency = Matrix(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    s.parent_indices.push_back(static_cast<NodeId>(i));
    s.features(i, 0) = xs[i];
  }
  for (auto [a, b] : edges) s.adjacency(a, b) = s.adjacency(b, a) = 1.0;
  return s;
}

SemanticAssignment labels_of(std::vector<int> y) { return {SemanticKind::label, std::move(y), 0}; }

// Independent exhaustive oracle over position pairs.
std::optional<MirrorPair> brute_force(const Subgraph& s, const std::vector<int>& y, std::size_t a, std::size_t b,
                                      double gamma, Polarity pol) {
  std::optional<MirrorPair> best;
  const auto& p = s.parent_indices;
  for (std::size_t c = 0; c < s.size(); ++c)
    for (std::size_t d = 0; d < s.size(); ++d) {
      if (p[c] == p[d] || p[c] == p[a] || p[c] == p[b] || p[d] == p[a] || p[d] == p[b]) continue;
      const bool same = y[p[c]] == y[p[a]] && y[p[d]] == y[p[b]];
      if ((pol == Polarity::positive) != same) continue;
      const double sum = std::abs(s.features(c, 0) - s.features(a, 0)) + std::abs(s.features(d, 0) - s.features(b, 0));
      if (!(sum < 2 * gamma)) continue;
      if (!best || sum < best->distance_sum) best = MirrorPair{c, d, sum};
    }
  return best;
}

}  // namespace

TEST_CASE("pair distances") {
  const std::vector<double> o{0, 0}, p{3, 4}, a{1, 1}, b{2, 3};
  CHECK(pair_distance(o, p, DistanceMetric::euclidean) == 5.0);
  CHECK(pair_distance(a, b, DistanceMetric::manhattan) == 3.0);
  const std::vector<double> v{1, -2, 0.5}, w{2, -4, 1};
  CHECK(pair_distance(v, w, DistanceMetric::cosine) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pair_distance(o, p, DistanceMetric::cosine) == 1.0);
  const std::vector<double> short_vec{1};
  CHECK_THROWS_AS(pair_distance(o, short_vec, DistanceMetric::euclidean), ShapeError);
  CHECK(parse_metric("manhattan") == DistanceMetric::manhattan);
  CHECK_THROWS_AS(parse_metric("chebyshev"), ConfigError);
}

TEST_CASE("degree semantics uses equal-frequency buckets") {
  // Path 0-1-2-3 plus star center 4 linked to 5..8: degrees 1,2,2,1,4,1,1,1,1.
  const Graph g(Matrix(9, 1), {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {4, 6}, {4, 7}, {4, 8}});
  const auto s = degree_semantics(g, 2);
  CHECK(s.n_buckets == 2);
  CHECK(s.values[0] == 0);
  CHECK(s.values[4] == 1);
  CHECK(s.values[1] == s.values[2]);
  CHECK(make_semantics(g, SemanticKind::label).kind == SemanticKind::degree_bucket);
}

TEST_CASE("distance distribution and quantiles") {
  Subgraph two = line_subgraph({0.0, 2.5}, {});
  const auto d = estimate_distance_distribution({two}, DistanceMetric::euclidean, 100, 1);
  CHECK(d.sorted == std::vector<double>{2.5});

  Subgraph four = line_subgraph({0.0, 1.0, 3.0, 6.0}, {});
  const auto all = estimate_distance_distribution({four, two}, DistanceMetric::euclidean, 1000, 1);
  CHECK(all.sorted == std::vector<double>{1, 2, 2.5, 3, 3, 5, 6});
  const auto sampled = estimate_distance_distribution({four, two}, DistanceMetric::euclidean, 3, 9);
  CHECK(sampled.sorted.size() == 3);
  CHECK(sampled.sorted == estimate_distance_distribution({four, two}, DistanceMetric::euclidean, 3, 9).sorted);

  Subgraph dup = line_subgraph({0.0, 0.0}, {});
  dup.parent_indices = {4, 4};
  CHECK_THROWS_AS(estimate_distance_distribution({dup}, DistanceMetric::euclidean, 10, 1), EmptyDistributionError);

  DistanceDistribution ten;
  for (int i = 1; i <= 10; ++i) ten.sorted.push_back(i);
  CHECK(quantile(ten, 0) == 1.0);
  CHECK(quantile(ten, 100) == 10.0);
  CHECK(quantile(ten, 50) == doctest::Approx(5.5));
  CHECK_THROWS_AS(quantile(ten, 101), RangeError);
  CHECK_THROWS_AS(quantile(ten, -1), RangeError);
}

TEST_CASE("mirror pair search on the four-node example") {
  const Subgraph s = line_subgraph({0.0, 0.1, 0.9, 1.0}, {});
  const auto y = labels_of({0, 0, 1, 1});
  const auto pos = find_mirror_pair(s, 0, 2, 0.2, y, DistanceMetric::euclidean, Polarity::positive);
  REQUIRE(pos);
  CHECK(pos->c == 1);
  CHECK(pos->d == 3);
  CHECK(pos->distance_sum == doctest::Approx(0.2));
  CHECK_FALSE(find_mirror_pair(s, 0, 2, 0.05, y, DistanceMetric::euclidean, Polarity::positive));

  const auto neg = find_mirror_pair(s, 0, 1, 10.0, y, DistanceMetric::euclidean, Polarity::negative);
  const auto want = brute_force(s, y.values, 0, 1, 10.0, Polarity::negative);
  REQUIRE(neg);
  REQUIRE(want);
  CHECK(neg->c == want->c);
  CHECK(neg->d == want->d);
  CHECK((y.values[neg->c] != 0 || y.values[neg->d] != 0));
}

TEST_CASE("mirror search matches the exhaustive oracle on random subgraphs") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> lab(0, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> xs(7);
    std::vector<int> ys(7);
    for (int i = 0; i < 7; ++i) {
      xs[i] = std::round(u(rng) * 20) / 20;  // coarse grid produces ties
      ys[i] = lab(rng);
    }
    const Subgraph s = line_subgraph(xs, {});
    const auto y = labels_of(ys);
    const double gamma = 0.3 * u(rng);
    for (std::size_t a = 0; a < 7; ++a)
      for (std::size_t b = a + 1; b < 7; ++b)
        for (auto pol : {Polarity::positive, Polarity::negative}) {
          const auto got = find_mirror_pair(s, a, b, gamma, y, DistanceMetric::manhattan, pol);
          const auto want = brute_force(s, ys, a, b, gamma, pol);
          REQUIRE(got.has_value() == want.has_value());
          if (got) {
            CHECK(got->c == want->c);
            CHECK(got->d == want->d);
          }
        }
  }
}

TEST_CASE("cg_augment identity at zero threshold") {
  const Subgraph s = line_subgraph({0.0, 0.1, 0.9, 1.0, 0.5}, {{0, 1}, {2, 3}, {1, 4}});
  const auto y = labels_of({0, 0, 1, 1, 0});
  const MirrorGraphs m = cg_augment(s, 0.0, y, DistanceMetric::euclidean);
  CHECK(m.positive == s.adjacency);
  CHECK(m.negative == s.adjacency);
  CHECK(m.stats.positive_replaced == 0);
}

TEST_CASE("cg_augment follows the edge state of each mirror pair") {
  // (0,2) is an edge; its positive mirror (1,3) is connected, its negative
  // mirror (1,4) is not, so the edge survives in the positive graph only.
  const Subgraph s = line_subgraph({0.0, 0.1, 0.9, 1.0, 0.8}, {{0, 2}, {1, 3}});
  const auto y = labels_of({0, 0, 1, 1, 2});
  const MirrorGraphs m = cg_augment(s, 0.25, y, DistanceMetric::euclidean, true);
  CHECK(m.positive(0, 2) == 1.0);
  CHECK(m.negative(0, 2) == 0.0);
  for (const auto& r : m.log) {
    const Polarity pol = r.polarity;
    const auto want = brute_force(s, y.values, r.a, r.b, 0.25, pol);
    REQUIRE(want);
    CHECK(r.c == want->c);
    CHECK(r.d == want->d);
    CHECK(r.mirrored_edge == s.adjacency(r.c, r.d));
    const Matrix& out = pol == Polarity::positive ? m.positive : m.negative;
    CHECK(out(r.a, r.b) == r.mirrored_edge);
  }
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(m.positive(i, i) == 0.0);
    CHECK(m.negative(i, i) == 0.0);
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(m.positive(i, j) == m.positive(j, i));
      CHECK(m.negative(i, j) == m.negative(j, i));
    }
  }
}

TEST_CASE("mirror reach grows with the threshold") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(8);
  for (double& x : xs) x = u(rng);
  const Subgraph s = line_subgraph(xs, {{0, 1}, {2, 5}, {3, 7}});
  const auto y = labels_of({0, 1, 0, 1, 0, 1, 0, 1});
  std::size_t prev_pos = 0, prev_neg = 0;
  for (double g : {0.0, 0.05, 0.1, 0.2, 0.4, 1.0}) {
    const auto m = cg_augment(s, g, y, DistanceMetric::euclidean);
    CHECK(m.stats.positive_replaced >= prev_pos);
    CHECK(m.stats.negative_replaced >= prev_neg);
    prev_pos = m.stats.positive_replaced;
    prev_neg = m.stats.negative_replaced;
  }
}
