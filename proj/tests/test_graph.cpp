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
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "acgcl/error.hpp"
#include "acgcl/graph.hpp"

using namespace acgcl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(ACGCL_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("graph construction symmetrizes and deduplicates") {
  Graph g(Matrix(3, 1), {{0, 1}, {1, 0}, {0, 1}, {2, 1}});
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.n_edges() == 2);
  CHECK(g.degree(1) == 2);
  CHECK_NOTHROW(g.validate());
  CHECK_THROWS_AS(Graph(Matrix(2, 1), {{0, 2}}), IndexError);
}

TEST_CASE("self-loops only when given") {
  Graph g(Matrix(2, 1), {{0, 0}, {0, 1}});
  CHECK(g.has_edge(0, 0));
  CHECK_FALSE(g.has_edge(1, 1));
  CHECK(g.n_edges() == 2);
}

TEST_CASE("labels and splits are validated") {
  Graph g(Matrix(4, 1), {});
  CHECK_THROWS_AS(g.set_labels({0, 1}), ShapeError);
  g.set_labels({0, 1, 2, 1});
  CHECK(g.n_classes() == 3);
  CHECK_THROWS_AS(g.set_splits(Splits{{0, 1}, {1}, {}}), ContractError);
  CHECK_THROWS_AS(g.set_splits(Splits{{0, 9}, {}, {}}), ContractError);
  g.set_splits(Splits{{0, 1}, {2}, {3}});
  CHECK(g.splits()->test.front() == 3);
}

TEST_CASE("load_graph minimal and degenerate inputs") {
  const auto dir = scratch("load_min");
  write(dir / "e.txt", "# comment\n0 1\n0 1\n");
  write(dir / "f.csv", "1.0\n2.0\n");
  Graph g = load_graph(dir / "e.txt", dir / "f.csv");
  CHECK(g.n_nodes() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(g.n_edges() == 1);
  CHECK(g.features()(1, 0) == 2.0);

  write(dir / "empty.txt", "");
  write(dir / "f3.csv", "1,2\n3,4\n5,6\n");
  Graph e = load_graph(dir / "empty.txt", dir / "f3.csv");
  CHECK(e.n_nodes() == 3);
  CHECK(e.n_edges() == 0);
  CHECK(e.feature_dim() == 2);
}

TEST_CASE("load_graph errors name the line") {
  const auto dir = scratch("load_err");
  write(dir / "f.csv", "1.0\n2.0\n");
  write(dir / "bad.txt", "0 1\nzero one\n");
  try {
    load_graph(dir / "bad.txt", dir / "f.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  write(dir / "range.txt", "0 5\n");
  CHECK_THROWS_AS(load_graph(dir / "range.txt", dir / "f.csv"), IndexError);
  write(dir / "ragged.csv", "1,2\n3\n");
  write(dir / "ok.txt", "");
  CHECK_THROWS_AS(load_graph(dir / "ok.txt", dir / "ragged.csv"), ShapeError);
  CHECK_THROWS_AS(load_graph(dir / "missing.txt", dir / "f.csv"), IoError);
  write(dir / "labels.csv", "node_id,label\n0,1\n");
  CHECK_THROWS_AS(load_graph(dir / "ok.txt", dir / "f.csv", dir / "labels.csv"), ParseError);
}

TEST_CASE("SBM extreme probabilities") {
  SbmConfig c;
  c.block_sizes = {2, 2};
  c.p_intra = 1.0;
  c.p_inter = 0.0;
  c.feature_dim = 3;
  const Graph g = generate_sbm(c, 1);
  const auto edges = g.edge_list();
  REQUIRE(edges.size() == 2);
  CHECK(edges[0] == std::pair<NodeId, NodeId>{0, 1});
  CHECK(edges[1] == std::pair<NodeId, NodeId>{2, 3});
  CHECK((*g.labels())[2] == 1);
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("SBM intra-block edge count matches the binomial mean") {
  SbmConfig c;
  c.block_sizes = {50, 50};
  c.p_intra = 0.2;
  c.p_inter = 0.0;
  const Graph g = generate_sbm(c, 17);
  const double trials = 2.0 * 50.0 * 49.0 / 2.0;
  const double mean = trials * 0.2;
  const double sd = std::sqrt(trials * 0.2 * 0.8);
  CHECK(mean == doctest::Approx(490.0));
  CHECK(std::abs(static_cast<double>(g.n_edges()) - mean) < 3.0 * sd);
}

TEST_CASE("SBM is deterministic and respects config invariants") {
  SbmConfig c;
  c.block_sizes = {20, 30};
  const Graph a = generate_sbm(c, 5);
  const Graph b = generate_sbm(c, 5);
  CHECK(a.edge_list() == b.edge_list());
  CHECK(a.features() == b.features());
  CHECK(a.edge_list() != generate_sbm(c, 6).edge_list());
  SbmConfig bad = c;
  bad.p_inter = 0.5;
  bad.p_intra = 0.1;
  CHECK_THROWS_AS(generate_sbm(bad, 0), ConfigError);
  bad = c;
  bad.block_sizes = {3, 0};
  CHECK_THROWS_AS(generate_sbm(bad, 0), ConfigError);
}

TEST_CASE("directory round trip is bit exact") {
  SbmConfig c;
  c.block_sizes = {15, 15, 10};
  c.feature_noise = 0.7;
  const Graph g = generate_sbm(c, 21);
  const auto dir = scratch("roundtrip");
  save_graph_dir(g, dir);
  const Graph h = load_graph_dir(dir);
  CHECK(h.features() == g.features());
  CHECK(h.edge_list() == g.edge_list());
  CHECK(*h.labels() == *g.labels());
  CHECK(h.splits()->train == g.splits()->train);
  CHECK(h.splits()->test == g.splits()->test);
}

TEST_CASE("random splits partition the nodes") {
  const Splits s = random_splits(100, 0.4, 0.2, 3);
  CHECK(s.train.size() == 40);
  CHECK(s.val.size() == 20);
  CHECK(s.test.size() == 40);
  std::vector<int> seen(100, 0);
  for (const auto* part : {&s.train, &s.val, &s.test})
    for (NodeId i : *part) ++seen[i];
  for (int v : seen) CHECK(v == 1);
}
