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

#include "avparse/kernels.hpp"

#include <atomic>

#include "avparse/common.hpp"

namespace avparse::kern {
namespace {

const Kernels* pick_default() {
#ifdef AVPARSE_HAVE_AVX2_SOURCES
  if (avx2_supported()) return &avx2_kernels();
#endif
#ifdef AVPARSE_HAVE_NEON_SOURCES
  return &neon_kernels();
#endif
  return &scalar_kernels();
}

std::atomic<const Kernels*>& active_slot() {
  static std::atomic<const Kernels*> slot{pick_default()};
  return slot;
}

}  // namespace

const Kernels& active_kernels() { return *active_slot().load(std::memory_order_relaxed); }

void force_kernels(const std::string& name) {
  if (name == "scalar") {
    active_slot().store(&scalar_kernels());
    return;
  }
#ifdef AVPARSE_HAVE_AVX2_SOURCES
  if (name == "avx2") {
    if (!avx2_supported()) throw ConfigError("kernels: avx2 not supported on this CPU");
    active_slot().store(&avx2_kernels());
    return;
  }
#endif
#ifdef AVPARSE_HAVE_NEON_SOURCES
  if (name == "neon") {
    active_slot().store(&neon_kernels());
    return;
  }
#endif
  throw ConfigError("kernels: unknown or unavailable variant '" + name + "'");
}

std::vector<std::string> available_kernels() {
  std::vector<std::string> names{"scalar"};
#ifdef AVPARSE_HAVE_AVX2_SOURCES
  if (avx2_supported()) names.emplace_back("avx2");
#endif
#ifdef AVPARSE_HAVE_NEON_SOURCES
  names.emplace_back("neon");
#endif
  return names;
}

}  // namespace avparse::kern
