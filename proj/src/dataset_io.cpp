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

#include "avparse/dataset_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "avparse/common.hpp"

static_assert(std::endian::native == std::endian::little,
              "dataset serialization requires a little-endian host");

namespace avparse {
namespace {

constexpr char kMagic[5] = {'A', 'V', 'P', 'D', '1'};

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::istream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw DataFormatError(std::string("dataset: truncated while reading ") + what);
  return v;
}

void write_f32_matrix(std::ostream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    write_pod<float>(out, static_cast<float>(m.data()[i]));
  }
}

void read_f32_matrix(std::istream& in, Matrix& m, std::size_t rows,
                     std::size_t cols) {
  m.resize(rows, cols);
  std::vector<float> buf(rows * cols);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw DataFormatError("dataset: truncated feature array");
  for (std::size_t i = 0; i < buf.size(); ++i) m.data()[i] = buf[i];
}

void write_byte_matrix(std::ostream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    write_pod<std::uint8_t>(out, m.data()[i] != 0.0 ? 1 : 0);
  }
}

void read_byte_matrix(std::istream& in, Matrix& m, std::size_t rows,
                      std::size_t cols) {
  m.resize(rows, cols);
  std::vector<std::uint8_t> buf(rows * cols);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size()));
  if (!in) throw DataFormatError("dataset: truncated label array");
  for (std::size_t i = 0; i < buf.size(); ++i) {
    if (buf[i] > 1) throw DataFormatError("dataset: label byte outside {0,1}");
    m.data()[i] = buf[i];
  }
}

void write_noise_set(std::ostream& out,
                     const std::set<std::pair<std::size_t, std::size_t>>& s) {
  write_pod<std::uint64_t>(out, s.size());
  for (const auto& [video, category] : s) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(video));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(category));
  }
}

void read_noise_set(std::istream& in, std::size_t n, std::size_t c,
                    std::set<std::pair<std::size_t, std::size_t>>& s) {
  const std::uint64_t count = read_pod<std::uint64_t>(in, "noise pair count");
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t video = read_pod<std::uint32_t>(in, "noise pair video");
    const std::uint32_t category = read_pod<std::uint32_t>(in, "noise pair category");
    if (video >= n || category >= c) {
      throw DataFormatError("dataset: noise pair out of range");
    }
    s.insert({video, category});
  }
}

}  // namespace

void save_dataset(const std::string& path, const Dataset& dataset,
                  const std::string& config_echo) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataFormatError("dataset: cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));

  std::ostringstream header;
  header << "n = " << dataset.size() << "\n"
         << "t = " << dataset.num_segments << "\n"
         << "d = " << dataset.feature_dim << "\n"
         << "c = " << dataset.num_categories << "\n"
         << "seed = " << dataset.seed << "\n";
  if (!config_echo.empty()) {
    header << "# config echo\n" << config_echo;
    if (config_echo.back() != '\n') header << "\n";
  }
  const std::string htext = header.str();
  write_pod<std::uint64_t>(out, htext.size());
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));

  const std::size_t C = dataset.num_categories;
  for (const SyntheticVideo& v : dataset.videos) write_f32_matrix(out, v.audio_features);
  for (const SyntheticVideo& v : dataset.videos) write_f32_matrix(out, v.visual_features);
  auto write_labels = [&](auto member) {
    for (const SyntheticVideo& v : dataset.videos) {
      for (std::size_t c = 0; c < C; ++c) write_pod<std::uint8_t>(out, (v.*member)[c]);
    }
  };
  write_labels(&SyntheticVideo::video_label);
  write_labels(&SyntheticVideo::gt_audio_label);
  write_labels(&SyntheticVideo::gt_visual_label);
  for (const SyntheticVideo& v : dataset.videos) write_byte_matrix(out, v.gt_audio_segments);
  for (const SyntheticVideo& v : dataset.videos) write_byte_matrix(out, v.gt_visual_segments);
  write_noise_set(out, dataset.noise.audio_noise);
  write_noise_set(out, dataset.noise.visual_noise);
  if (!out) throw DataFormatError("dataset: write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("dataset: cannot open: " + path);
  char magic[5];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataFormatError("dataset: bad magic in " + path);
  }

  const std::uint64_t hlen = read_pod<std::uint64_t>(in, "header length");
  if (hlen > (1u << 20)) throw DataFormatError("dataset: implausible header length");
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw DataFormatError("dataset: truncated header");

  std::map<std::string, std::string> kv;
  std::istringstream hs(htext);
  std::string line;
  while (std::getline(hs, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* key : {"n", "t", "d", "c", "seed"}) {
    if (!kv.count(key)) {
      throw DataFormatError(std::string("dataset: header missing key '") + key + "'");
    }
  }

  Dataset ds;
  const std::size_t n = std::stoull(kv["n"]);
  ds.num_segments = std::stoull(kv["t"]);
  ds.feature_dim = std::stoull(kv["d"]);
  ds.num_categories = std::stoull(kv["c"]);
  ds.seed = std::stoull(kv["seed"]);
  if (n == 0 || ds.num_segments == 0 || ds.feature_dim == 0 || ds.num_categories == 0) {
    throw DataFormatError("dataset: header has zero-sized dimension");
  }

  const std::size_t T = ds.num_segments;
  const std::size_t D = ds.feature_dim;
  const std::size_t C = ds.num_categories;
  ds.videos.resize(n);
  for (SyntheticVideo& v : ds.videos) read_f32_matrix(in, v.audio_features, T, D);
  for (SyntheticVideo& v : ds.videos) read_f32_matrix(in, v.visual_features, T, D);
  auto read_labels = [&](auto member) {
    for (SyntheticVideo& v : ds.videos) {
      (v.*member).resize(C);
      in.read(reinterpret_cast<char*>((v.*member).data()),
              static_cast<std::streamsize>(C));
      if (!in) throw DataFormatError("dataset: truncated video labels");
    }
  };
  read_labels(&SyntheticVideo::video_label);
  read_labels(&SyntheticVideo::gt_audio_label);
  read_labels(&SyntheticVideo::gt_visual_label);
  for (SyntheticVideo& v : ds.videos) read_byte_matrix(in, v.gt_audio_segments, T, C);
  for (SyntheticVideo& v : ds.videos) read_byte_matrix(in, v.gt_visual_segments, T, C);
  read_noise_set(in, n, C, ds.noise.audio_noise);
  read_noise_set(in, n, C, ds.noise.visual_noise);

  // header consistency against the payload
  for (std::size_t i = 0; i < n; ++i) {
    const SyntheticVideo& v = ds.videos[i];
    for (std::size_t c = 0; c < C; ++c) {
      if (v.video_label[c] != (v.gt_audio_label[c] | v.gt_visual_label[c])) {
        throw DataFormatError("dataset: video label is not the OR of modality labels (video " +
                              std::to_string(i) + ")");
      }
    }
  }
  return ds;
}

}  // namespace avparse
