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

#include "avparse/synthgen.hpp"

namespace avparse {

// Dataset file layout:
//   magic "AVPD1"
//   u64 header length, then that many bytes of key=value text
//   (n, t, d, c, seed, plus a config echo)
//   little-endian f32 arrays: audio features (N*T*D), visual features
//   byte arrays: Y (N*C), Y_audio*, Y_visual*, segment labels (N*T*C each)
//   noise pairs: u64 count + (u32 video, u32 category) for audio, then visual
void save_dataset(const std::string& path, const Dataset& dataset,
                  const std::string& config_echo = "");

// Validates magic and header consistency; throws DataFormatError otherwise.
Dataset load_dataset(const std::string& path);

}  // namespace avparse
