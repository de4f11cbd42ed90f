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

#include <string>

#include "avparse/model.hpp"

namespace avparse {

// Checkpoint file layout (all integers little-endian):
//   magic "JMCK1"
//   u32 D, u32 T, u32 C, u8 skip_cross_modal
//   u32 block_count (6), then per block: u64 element count
//   blocks as little-endian f64 in order: classifier.weight,
//   classifier.bias, temporal_head.weight, temporal_head.bias,
//   modality_head.weight, modality_head.bias
void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                     const ModelParams& params);

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
};

// Throws DataFormatError on bad magic, truncated data, or inconsistent
// block sizes.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace avparse
