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

#include "avparse/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "avparse/common.hpp"

// The on-disk format is little-endian; this code assumes a little-endian
// host, which covers every platform the project targets.
static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization requires a little-endian host");

namespace avparse {
namespace {

constexpr char kMagic[5] = {'J', 'M', 'C', 'K', '1'};

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw DataFormatError(std::string("checkpoint: truncated while reading ") + what);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelConfig& cfg,
                     const ModelParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataFormatError("checkpoint: cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.feature_dim));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.num_segments));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.num_categories));
  write_pod<std::uint8_t>(out, cfg.skip_cross_modal ? 1 : 0);

  const LinearHead* heads[] = {&params.classifier, &params.temporal_head,
                               &params.modality_head};
  write_pod<std::uint32_t>(out, 6);
  for (const LinearHead* h : heads) {
    write_pod<std::uint64_t>(out, h->weight.size());
    write_pod<std::uint64_t>(out, h->bias.size());
  }
  for (const LinearHead* h : heads) {
    out.write(reinterpret_cast<const char*>(h->weight.data()),
              static_cast<std::streamsize>(h->weight.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(h->bias.data()),
              static_cast<std::streamsize>(h->bias.size() * sizeof(double)));
  }
  if (!out) throw DataFormatError("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("checkpoint: cannot open: " + path);
  char magic[5];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataFormatError("checkpoint: bad magic in " + path);
  }
  Checkpoint ck;
  ck.config.feature_dim = read_pod<std::uint32_t>(in, "feature_dim");
  ck.config.num_segments = read_pod<std::uint32_t>(in, "num_segments");
  ck.config.num_categories = read_pod<std::uint32_t>(in, "num_categories");
  ck.config.skip_cross_modal = read_pod<std::uint8_t>(in, "skip_cross_modal") != 0;
  ck.config.validate();

  const std::uint32_t blocks = read_pod<std::uint32_t>(in, "block_count");
  if (blocks != 6) {
    throw DataFormatError("checkpoint: expected 6 parameter blocks, found " +
                          std::to_string(blocks));
  }
  const std::size_t wsize = ck.config.feature_dim * ck.config.num_categories;
  const std::size_t bsize = ck.config.num_categories;
  std::uint64_t sizes[6];
  for (auto& s : sizes) s = read_pod<std::uint64_t>(in, "block size");
  for (int h = 0; h < 3; ++h) {
    if (sizes[2 * h] != wsize || sizes[2 * h + 1] != bsize) {
      throw DataFormatError("checkpoint: block sizes inconsistent with header dims");
    }
  }

  Rng dummy(0);
  ck.params = ModelParams::init(ck.config, dummy);
  LinearHead* heads[] = {&ck.params.classifier, &ck.params.temporal_head,
                         &ck.params.modality_head};
  for (LinearHead* h : heads) {
    in.read(reinterpret_cast<char*>(h->weight.data()),
            static_cast<std::streamsize>(h->weight.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(h->bias.data()),
            static_cast<std::streamsize>(h->bias.size() * sizeof(double)));
    if (!in) throw DataFormatError("checkpoint: truncated parameter data in " + path);
  }
  return ck;
}

}  // namespace avparse
