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

#include <cstddef>
#include <string>
#include <vector>

namespace avparse::kern {

// Arithmetic inner loops used by the matrix layer. A scalar reference
// implementation always exists; SIMD variants (AVX2 on x86-64, NEON on
// aarch64) are selected at runtime when the CPU supports them. All
// variants are equivalence-tested against the scalar kernels.
struct Kernels {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // c = a (m x k, row-major) * b (k x n, row-major); c is overwritten.
  void (*matmul)(const double* a, const double* b, double* c, std::size_t m,
                 std::size_t k, std::size_t n);
  // out[i] = a[i] + b[i]
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  // x[i] *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
};

const Kernels& scalar_kernels();

#ifdef AVPARSE_HAVE_AVX2_SOURCES
const Kernels& avx2_kernels();
bool avx2_supported();
#endif
#ifdef AVPARSE_HAVE_NEON_SOURCES
const Kernels& neon_kernels();
#endif

// The variant chosen for this process (best supported, unless forced).
const Kernels& active_kernels();

// Force a variant by name ("scalar", "avx2", "neon") for tests and the
// --kernels CLI flag. Throws ConfigError for unknown/unsupported names.
void force_kernels(const std::string& name);

// Names of all variants usable on this machine.
std::vector<std::string> available_kernels();

}  // namespace avparse::kern
