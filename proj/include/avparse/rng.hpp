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

#pragma once

#include <cstdint>
#include <vector>

namespace avparse {

// Counter-based seeded generator. Algorithm: splitmix64 applied to
// seed + counter * golden-ratio increment. Identical seed gives an
// identical draw sequence on every platform; the algorithm id recorded
// in run manifests is "splitmix64".
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  static constexpr const char* kAlgorithmId = "splitmix64";

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  // Uniform integer in [0, n); n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);
  // Standard normal via Box-Muller (two draws per call, no caching).
  double normal();

  // Fisher-Yates shuffle with this generator.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent stream for parallel work; deterministic in (seed, stream).
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace avparse
