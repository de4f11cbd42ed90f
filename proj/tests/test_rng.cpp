// Copyright 2026 The avparse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "avparse/rng.hpp"

using namespace avparse;

TEST_CASE("identical seeds replay the identical sequence") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 200; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds and different streams diverge") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);

  Rng base(7);
  Rng s0 = base.split(0), s1 = base.split(1);
  same = 0;
  for (int i = 0; i < 64; ++i) same += s0.next_u64() == s1.next_u64();
  CHECK(same == 0);

  // splitting is independent of the parent's draw position
  Rng base2(7);
  base2.next_u64();
  Rng s0_again = base2.split(0);
  Rng s0_ref = Rng(7).split(0);
  CHECK(s0_again.next_u64() == s0_ref.next_u64());
}

TEST_CASE("uniform stays in [0,1) and looks flat") {
  Rng rng(9);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("uniform_int covers the full range") {
  Rng rng(11);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.uniform_int(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(c > 700);  // expectation 1000
}

TEST_CASE("normal has roughly standard moments") {
  Rng rng(13);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(0.0).epsilon(1.0).scale(0.03));
  CHECK(sq / n - mean * mean == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("shuffle permutes without loss") {
  Rng rng(17);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  auto shuffled = v;
  rng.shuffle(shuffled);
  CHECK(shuffled != v);  // astronomically unlikely to be identity
  std::sort(shuffled.begin(), shuffled.end());
  CHECK(shuffled == v);
}

TEST_CASE("algorithm id is stable") {
  CHECK(std::string(Rng::kAlgorithmId) == "splitmix64");
}
