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
#include <vector>

#include "avparse/common.hpp"
#include "avparse/kernels.hpp"
#include "avparse/rng.hpp"

using namespace avparse;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

// Independent reference: plain triple loop, no blocking, no FMA.
void naive_matmul(const std::vector<double>& a, const std::vector<double>& b,
                  std::vector<double>& c, std::size_t m, std::size_t k,
                  std::size_t n) {
  c.assign(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a[i * k + p] * b[p * n + j];
      c[i * n + j] = acc;
    }
  }
}

void check_variant(const kern::Kernels& k) {
  Rng rng(99);
  for (int iter = 0; iter < 50; ++iter) {
    const std::size_t n = 1 + rng.uniform_int(40);

    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    CHECK(k.dot(a.data(), b.data(), n) == doctest::Approx(dot).epsilon(1e-12));

    auto y = random_vec(rng, n);
    auto y_ref = y;
    const double alpha = rng.normal();
    for (std::size_t i = 0; i < n; ++i) y_ref[i] += alpha * a[i];
    k.axpy(alpha, a.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y[i] == doctest::Approx(y_ref[i]).epsilon(1e-12));
    }

    std::vector<double> sum(n);
    k.add(a.data(), b.data(), sum.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(sum[i] == a[i] + b[i]);

    auto scaled = a;
    k.scale(alpha, scaled.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(scaled[i] == doctest::Approx(alpha * a[i]).epsilon(1e-12));
    }
  }

  for (int iter = 0; iter < 30; ++iter) {
    const std::size_t m = 1 + rng.uniform_int(8);
    const std::size_t kk = 1 + rng.uniform_int(17);
    const std::size_t n = 1 + rng.uniform_int(9);
    const auto a = random_vec(rng, m * kk);
    const auto b = random_vec(rng, kk * n);
    std::vector<double> ref;
    naive_matmul(a, b, ref, m, kk, n);
    std::vector<double> got(m * n, -1.0);
    k.matmul(a.data(), b.data(), got.data(), m, kk, n);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels match a naive reference") {
  check_variant(kern::scalar_kernels());
}

#ifdef AVPARSE_HAVE_AVX2_SOURCES
TEST_CASE("avx2 kernels match the scalar reference") {
  if (!kern::avx2_supported()) return;
  check_variant(kern::avx2_kernels());
}
#endif

TEST_CASE("active kernels are one of the available variants") {
  const auto names = kern::available_kernels();
  REQUIRE(!names.empty());
  bool found = false;
  for (const auto& n : names) {
    if (n == kern::active_kernels().name) found = true;
  }
  CHECK(found);
  CHECK(std::find(names.begin(), names.end(), "scalar") != names.end());
}

TEST_CASE("force_kernels selects by name and rejects unknown names") {
  kern::force_kernels("scalar");
  CHECK(std::string(kern::active_kernels().name) == "scalar");
  CHECK_THROWS_AS(kern::force_kernels("sse9000"), ConfigError);
  // restore the best variant for other binaries run in-process
  for (const auto& n : kern::available_kernels()) kern::force_kernels(n);
}
