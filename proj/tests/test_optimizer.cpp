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

#include "doctest.h"

#include "acgcl/error.hpp"
#include "acgcl/optimizer.hpp"

using namespace acgcl;

TEST_CASE("first Adam step moves by the learning rate") {
  std::vector<Matrix> p{Matrix::scalar(0.0)};
  const std::vector<Matrix> g{Matrix::scalar(1.0)};
  AdamState s;
  adam_step(p, g, s, 0.001);
  CHECK(p[0].item() == doctest::Approx(-0.001).epsilon(1e-6));
  CHECK(s.step == 1);
}

TEST_CASE("zero gradient leaves parameters and decays moments") {
  std::vector<Matrix> p{Matrix{{1.0, 2.0}}};
  AdamState s;
  adam_step(p, std::vector<Matrix>{Matrix{{1.0, -1.0}}}, s, 0.01);
  const Matrix after_first = p[0];
  const double m0 = s.m[0](0, 0), v0 = s.v[0](0, 0);
  // A zero gradient still moves through the remaining momentum, so compare
  // the moments rather than the parameters here.
  adam_step(p, std::vector<Matrix>{Matrix(1, 2)}, s, 0.01);
  CHECK(s.m[0](0, 0) == doctest::Approx(0.9 * m0));
  CHECK(s.v[0](0, 0) == doctest::Approx(0.999 * v0));

  std::vector<Matrix> fresh{Matrix{{1.0, 2.0}}};
  AdamState f;
  adam_step(fresh, std::vector<Matrix>{Matrix(1, 2)}, f, 0.01);
  CHECK(fresh[0] == Matrix{{1.0, 2.0}});
  (void)after_first;
}

TEST_CASE("Adam is deterministic and checks shapes") {
  auto run = [] {
    std::vector<Matrix> p{Matrix{{0.5, -0.5}, {1.0, 2.0}}};
    AdamState s;
    for (int i = 0; i < 20; ++i) {
      Matrix g = p[0];
      g *= 2.0;  // gradient of ||p||^2
      adam_step(p, std::vector<Matrix>{g}, s, 0.05);
    }
    return p[0];
  };
  CHECK(run() == run());
  std::vector<Matrix> p{Matrix(2, 2)};
  AdamState s;
  CHECK_THROWS_AS(adam_step(p, std::vector<Matrix>{Matrix(2, 3)}, s, 0.1), ShapeError);
}
