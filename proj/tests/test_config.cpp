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

#include "doctest.h"

#include "acgcl/config.hpp"
#include "acgcl/error.hpp"

using namespace acgcl;

TEST_CASE("empty config yields the defaults") {
  const TrainConfig c = parse_config_text("");
  CHECK(c.subgraph_size == 20);
  CHECK(c.learning_rate == 0.001);
  CHECK(c.theta0 == 15.0);
  CHECK(c.max_difficulty == 50.0);
  CHECK(c.batch_size == 500);
  CHECK(c.embed_dim == 64);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("file values, comments and overrides") {
  const auto path = std::filesystem::path(ACGCL_TEST_TMP) / "c.cfg";
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path) << "# comment\nembed_dim = 32   # trailing\n\nacl_mode=hard\nnormalize_total = true\n";
  const TrainConfig c = parse_config(path, {"subgraph_size=5", "seed=123456789012"});
  CHECK(c.embed_dim == 32);
  CHECK(c.acl_mode == "hard");
  CHECK(c.normalize_total);
  CHECK(c.subgraph_size == 5);
  CHECK(c.seed == 123456789012ULL);
}

TEST_CASE("config errors name the key") {
  auto message = [](auto fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message([] { apply_overrides({}, {"theta0=60"}); }).find("theta0") != std::string::npos);
  CHECK(message([] { parse_config_text("bogus = 1"); }).find("bogus") != std::string::npos);
  CHECK(message([] { parse_config_text("epochs = many"); }).find("epochs") != std::string::npos);
  CHECK(message([] { parse_config_text("embed_dim"); }).find(":1") != std::string::npos);
  CHECK(message([] { apply_overrides({}, {"acl_mode=mixed"}); }).find("acl_mode") != std::string::npos);
  CHECK(message([] { apply_overrides({}, {"normalize_total=maybe"}); }).find("normalize_total") !=
        std::string::npos);
  CHECK_THROWS_AS(parse_config("/nonexistent/config"), IoError);
}

TEST_CASE("key-value round trip") {
  TrainConfig c;
  c.seed = 9;
  c.learning_rate = 0.0123456789;
  c.acl_mode = "spl";
  const TrainConfig back = from_key_values(c.to_key_values());
  CHECK(back.to_key_values() == c.to_key_values());
  CHECK(back.learning_rate == c.learning_rate);
}
