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

#include <cmath>

#include "avparse/matrix.hpp"
#include "avparse/ops.hpp"
#include "avparse/rng.hpp"

using namespace avparse;

TEST_CASE("softmax rows sum to one and respect the divisor") {
  Rng rng(3);
  Matrix m(4, 7);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = 3.0 * rng.normal();

  const Matrix s = softmax_rows(m, 2.0);
  for (std::size_t r = 0; r < s.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < s.cols(); ++c) {
      CHECK(s(r, c) > 0.0);
      sum += s(r, c);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  // dividing the inputs by d first must give the same result
  Matrix halved = m;
  for (std::size_t i = 0; i < halved.size(); ++i) halved.data()[i] /= 2.0;
  const Matrix s2 = softmax_rows(halved, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.data()[i] == doctest::Approx(s2.data()[i]).epsilon(1e-12));
  }
}

TEST_CASE("softmax is stable for extreme logits") {
  const Matrix m{{1000.0, 0.0}};
  const Matrix s = softmax_rows(m, 1.0);
  CHECK(std::isfinite(s(0, 0)));
  CHECK(s(0, 0) == doctest::Approx(1.0));
  CHECK(s(0, 1) == doctest::Approx(0.0));

  const Matrix neg{{-1000.0, -1000.0}};
  const Matrix sn = softmax_rows(neg, 1.0);
  CHECK(sn(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sigmoid maps into (0,1) and matches the closed form") {
  const Matrix m{{-30.0, -1.0, 0.0, 1.0, 30.0}};
  const Matrix s = sigmoid(m);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.data()[i] > 0.0);
    CHECK(s.data()[i] < 1.0);
    CHECK(s.data()[i] ==
          doctest::Approx(1.0 / (1.0 + std::exp(-m.data()[i]))));
  }
  CHECK(s(0, 2) == doctest::Approx(0.5));
}

TEST_CASE("binary cross-entropy hand values") {
  CHECK(bce_scalar(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce_scalar(0.5, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce_scalar(1.0, 1.0) == doctest::Approx(-std::log(1.0 - kProbEps)));
  // clamp keeps the worst case finite
  CHECK(bce_scalar(0.0, 1.0) == doctest::Approx(-std::log(kProbEps)));
  CHECK(std::isfinite(bce_scalar(0.0, 1.0)));

  const Matrix p{{0.5, 0.9}};
  const Matrix y{{1.0, 0.0}};
  const Matrix l = bce_elementwise(p, y);
  CHECK(l(0, 0) == doctest::Approx(bce_scalar(0.5, 1.0)));
  CHECK(l(0, 1) == doctest::Approx(bce_scalar(0.9, 0.0)));
}

TEST_CASE("bce gradient matches central differences") {
  for (double p : {0.1, 0.35, 0.5, 0.8, 0.99}) {
    for (double y : {0.0, 1.0}) {
      const double h = 1e-6;
      const double fd = (bce_scalar(p + h, y) - bce_scalar(p - h, y)) / (2.0 * h);
      CHECK(bce_grad_scalar(p, y) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("clamp_prob bounds") {
  CHECK(clamp_prob(-1.0) == kProbEps);
  CHECK(clamp_prob(2.0) == 1.0 - kProbEps);
  CHECK(clamp_prob(0.25) == 0.25);
}

TEST_CASE("matmul rejects mismatched shapes") {
  Matrix a(2, 3), b(4, 2);
  CHECK_THROWS_AS(matmul(a, b), ShapeError);
}

TEST_CASE("finite_diff_check control experiment") {
  auto quad = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  std::vector<double> x = {0.3, -1.2, 2.0};
  std::vector<double> good = {0.6, -2.4, 4.0};
  CHECK(finite_diff_check(quad, x, good) < 1e-6);

  std::vector<double> bad = {0.6, -2.4, 5.0};
  CHECK(finite_diff_check(quad, x, bad) > 1e-2);
}
