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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "avparse/checkpoint.hpp"
#include "avparse/common.hpp"
#include "avparse/dataset_io.hpp"
#include "avparse/report.hpp"
#include "avparse/rng.hpp"
#include "avparse/synthgen.hpp"

using namespace avparse;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path(name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

Dataset tiny_dataset() {
  GeneratorConfig cfg;
  cfg.num_videos = 12;
  cfg.num_segments = 6;
  cfg.feature_dim = 5;
  cfg.num_categories = 4;
  cfg.seed = 17;
  return generate_dataset(cfg);
}

// Flip one byte in the middle of a file, or truncate it.
void corrupt(const std::string& path, bool truncate) {
  const auto size = std::filesystem::file_size(path);
  if (truncate) {
    std::filesystem::resize_file(path, size / 2);
    return;
  }
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(0);
  f.put('X');  // clobbers the magic
}

}  // namespace

TEST_CASE("dataset round-trip") {
  const Dataset ds = tiny_dataset();
  TempFile tmp("io_test_ds.avpd");
  save_dataset(tmp.path, ds, "num_videos = 12");
  const Dataset back = load_dataset(tmp.path);

  REQUIRE(back.size() == ds.size());
  CHECK(back.num_segments == ds.num_segments);
  CHECK(back.feature_dim == ds.feature_dim);
  CHECK(back.num_categories == ds.num_categories);
  CHECK(back.seed == ds.seed);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const SyntheticVideo& a = ds.videos[i];
    const SyntheticVideo& b = back.videos[i];
    // features are stored as f32, so compare against the rounded value
    for (std::size_t j = 0; j < a.audio_features.size(); ++j) {
      CHECK(b.audio_features.data()[j] ==
            static_cast<double>(static_cast<float>(a.audio_features.data()[j])));
      CHECK(b.visual_features.data()[j] ==
            static_cast<double>(static_cast<float>(a.visual_features.data()[j])));
    }
    CHECK(b.video_label == a.video_label);
    CHECK(b.gt_audio_label == a.gt_audio_label);
    CHECK(b.gt_visual_label == a.gt_visual_label);
    CHECK(b.gt_audio_segments == a.gt_audio_segments);
    CHECK(b.gt_visual_segments == a.gt_visual_segments);
  }
  CHECK(back.noise.audio_noise == ds.noise.audio_noise);
  CHECK(back.noise.visual_noise == ds.noise.visual_noise);
}

TEST_CASE("dataset loader rejects damaged files") {
  const Dataset ds = tiny_dataset();
  {
    TempFile tmp("io_test_badmagic.avpd");
    save_dataset(tmp.path, ds);
    corrupt(tmp.path, /*truncate=*/false);
    CHECK_THROWS_AS(load_dataset(tmp.path), DataFormatError);
  }
  {
    TempFile tmp("io_test_trunc.avpd");
    save_dataset(tmp.path, ds);
    corrupt(tmp.path, /*truncate=*/true);
    CHECK_THROWS_AS(load_dataset(tmp.path), DataFormatError);
  }
  CHECK_THROWS_AS(load_dataset("io_test_missing.avpd"), DataFormatError);
}

TEST_CASE("checkpoint round-trip preserves every parameter bit") {
  ModelConfig cfg;
  cfg.feature_dim = 7;
  cfg.num_segments = 4;
  cfg.num_categories = 3;
  cfg.skip_cross_modal = true;
  Rng rng(23);
  const ModelParams params = ModelParams::init(cfg, rng);

  TempFile tmp("io_test_ck.jmck");
  save_checkpoint(tmp.path, cfg, params);
  const Checkpoint back = load_checkpoint(tmp.path);
  CHECK(back.config.feature_dim == cfg.feature_dim);
  CHECK(back.config.num_segments == cfg.num_segments);
  CHECK(back.config.num_categories == cfg.num_categories);
  CHECK(back.config.skip_cross_modal == cfg.skip_cross_modal);
  CHECK(back.params.flatten() == params.flatten());  // exact
}

TEST_CASE("checkpoint loader rejects damaged files") {
  ModelConfig cfg;
  Rng rng(29);
  const ModelParams params = ModelParams::init(cfg, rng);
  {
    TempFile tmp("io_test_ck_badmagic.jmck");
    save_checkpoint(tmp.path, cfg, params);
    corrupt(tmp.path, false);
    CHECK_THROWS_AS(load_checkpoint(tmp.path), DataFormatError);
  }
  {
    TempFile tmp("io_test_ck_trunc.jmck");
    save_checkpoint(tmp.path, cfg, params);
    corrupt(tmp.path, true);
    CHECK_THROWS_AS(load_checkpoint(tmp.path), DataFormatError);
  }
  CHECK_THROWS_AS(load_checkpoint("io_test_ck_missing.jmck"), DataFormatError);
}

TEST_CASE("report CSV and table") {
  ParsingReport rep;
  rep.seg_audio = 0.5;
  rep.seg_type_at_av = 0.123456789;
  const std::string csv = report_csv(rep);
  CHECK(csv.find("metric,value") == 0);
  CHECK(csv.find("segment_audio,0.500000") != std::string::npos);
  CHECK(csv.find("segment_type_at_av,0.123457") != std::string::npos);
  CHECK(csv.find("denoise_f1_audio") == std::string::npos);

  rep.has_denoise = true;
  CHECK(report_csv(rep).find("denoise_f1_audio") != std::string::npos);

  const std::string table = report_table(rep);
  CHECK(table.find("segment_audio") != std::string::npos);

  TempFile tmp("io_test_report.csv");
  save_report_csv(tmp.path, rep);
  std::ifstream in(tmp.path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "metric,value");
}

TEST_CASE("manifest carries the run provenance, wall clock last") {
  RunManifest m;
  m.config_echo = "num_videos = 12\n";
  m.kernel_name = "scalar";
  m.seed = 5;
  m.mode = "jomold";
  m.epoch_losses = {1.25, 0.75};
  m.wall_seconds = 3.5;
  const std::string text = manifest_text(m);
  CHECK(text.find("scalar") != std::string::npos);
  CHECK(text.find("jomold") != std::string::npos);
  CHECK(text.find("num_videos = 12") != std::string::npos);
  // identical runs must produce manifests differing only in the last line
  RunManifest m2 = m;
  m2.wall_seconds = 99.0;
  const std::string t2 = manifest_text(m2);
  const auto cut = text.rfind('\n', text.size() - 2);
  CHECK(text.substr(0, cut) == t2.substr(0, cut));
}

TEST_CASE("SVG writers emit well-formed standalone files") {
  TempFile bars("io_test_bars.svg");
  save_bar_chart_svg(bars.path, "modes", {{"jomold", 0.55}, {"none", 0.40}});
  std::ifstream in(bars.path);
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("</svg>") != std::string::npos);
  CHECK(body.find("jomold") != std::string::npos);

  TempFile curves("io_test_curves.svg");
  save_loss_curves_svg(curves.path, "loss", {{"run", {2.0, 1.0, 0.5}}});
  std::ifstream in2(curves.path);
  std::string body2((std::istreambuf_iterator<char>(in2)),
                    std::istreambuf_iterator<char>());
  CHECK(body2.find("<svg") != std::string::npos);
  CHECK(body2.find("</svg>") != std::string::npos);
}
