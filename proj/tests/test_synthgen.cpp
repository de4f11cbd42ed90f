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
#include <cstddef>

#include "avparse/common.hpp"
#include "avparse/synthgen.hpp"

using namespace avparse;

namespace {

GeneratorConfig small_config() {
  GeneratorConfig cfg;
  cfg.num_videos = 200;
  cfg.num_segments = 8;
  cfg.feature_dim = 12;
  cfg.num_categories = 6;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  GeneratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  auto expect_throw = [](auto&& mutate) {
    GeneratorConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };
  expect_throw([](GeneratorConfig& c) { c.num_videos = 0; });
  expect_throw([](GeneratorConfig& c) { c.num_segments = 0; });
  expect_throw([](GeneratorConfig& c) { c.p_both = -0.1; });
  expect_throw([](GeneratorConfig& c) { c.p_both = 0.9; });  // mass > 1
  expect_throw([](GeneratorConfig& c) {
    c.p_both = c.p_audio_only = c.p_visual_only = 0.0;
  });
  expect_throw([](GeneratorConfig& c) {
    c.min_events_per_video = 3;
    c.max_events_per_video = 2;
  });
  expect_throw([](GeneratorConfig& c) { c.max_events_per_video = 99; });
  expect_throw([](GeneratorConfig& c) { c.feature_noise_sigma = -1.0; });
  expect_throw([](GeneratorConfig& c) { c.noise_spread = 1.5; });
  expect_throw([](GeneratorConfig& c) { c.noise_spread = -0.1; });
  // spread pushes one category's noise mass past the occurrence mass
  expect_throw([](GeneratorConfig& c) {
    c.p_both = 0.1;
    c.p_audio_only = 0.6;
    c.p_visual_only = 0.3;
    c.noise_spread = 1.0;
  });
}

TEST_CASE("generation is deterministic in the seed") {
  const GeneratorConfig cfg = small_config();
  const Dataset a = generate_dataset(cfg);
  const Dataset b = generate_dataset(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.videos[i].audio_features == b.videos[i].audio_features);
    CHECK(a.videos[i].visual_features == b.videos[i].visual_features);
    CHECK(a.videos[i].video_label == b.videos[i].video_label);
  }
  CHECK(a.noise.audio_noise == b.noise.audio_noise);
  CHECK(a.noise.visual_noise == b.noise.visual_noise);

  GeneratorConfig other = cfg;
  other.seed = 4;
  const Dataset c = generate_dataset(other);
  CHECK(a.videos[0].audio_features != c.videos[0].audio_features);
}

TEST_CASE("label structure invariants") {
  GeneratorConfig cfg = small_config();
  cfg.num_videos = 400;
  const Dataset ds = generate_dataset(cfg);
  const std::size_t min_len = std::min<std::size_t>(4, cfg.num_segments);

  for (std::size_t i = 0; i < ds.size(); ++i) {
    const SyntheticVideo& v = ds.videos[i];
    std::size_t n_events = 0;
    for (std::size_t c = 0; c < cfg.num_categories; ++c) {
      // the weak label is the OR of the two modality labels
      CHECK(v.video_label[c] == (v.gt_audio_label[c] | v.gt_visual_label[c]));
      n_events += v.video_label[c];

      for (int mod = 0; mod < 2; ++mod) {
        const Matrix& seg = mod == 0 ? v.gt_audio_segments : v.gt_visual_segments;
        const std::uint8_t label = mod == 0 ? v.gt_audio_label[c] : v.gt_visual_label[c];
        std::size_t first = cfg.num_segments, last = 0, count = 0;
        for (std::size_t t = 0; t < cfg.num_segments; ++t) {
          if (seg(t, c) != 0.0) {
            first = std::min(first, t);
            last = t;
            ++count;
          }
        }
        // label present iff some segment is active; active segments form
        // one contiguous interval of at least the minimum length
        CHECK((count > 0) == (label != 0));
        if (count > 0) {
          CHECK(count == last - first + 1);
          CHECK(count >= min_len);
        }
      }

      // noise pairs are exactly the label discrepancies
      const bool an = v.video_label[c] && !v.gt_audio_label[c];
      const bool vn = v.video_label[c] && !v.gt_visual_label[c];
      CHECK(ds.noise.audio_noise.count({i, c}) == (an ? 1u : 0u));
      CHECK(ds.noise.visual_noise.count({i, c}) == (vn ? 1u : 0u));
    }
    CHECK(n_events >= cfg.min_events_per_video);
    CHECK(n_events <= cfg.max_events_per_video);
  }
}

TEST_CASE("noiseless features are sums of unit prototypes") {
  GeneratorConfig cfg = small_config();
  cfg.feature_noise_sigma = 0.0;
  cfg.min_events_per_video = 1;
  cfg.max_events_per_video = 1;
  cfg.p_both = 1.0;
  cfg.p_audio_only = 0.0;
  cfg.p_visual_only = 0.0;
  cfg.noise_spread = 0.0;
  const Dataset ds = generate_dataset(cfg);

  // per category, the in-event feature row is the unit-norm prototype,
  // identical across videos; background rows are exactly zero
  std::vector<std::vector<double>> seen_audio(cfg.num_categories);
  for (const SyntheticVideo& v : ds.videos) {
    for (std::size_t c = 0; c < cfg.num_categories; ++c) {
      for (std::size_t t = 0; t < cfg.num_segments; ++t) {
        if (v.gt_audio_segments(t, c) == 0.0) continue;
        double norm2 = 0.0;
        std::vector<double> row(cfg.feature_dim);
        for (std::size_t d = 0; d < cfg.feature_dim; ++d) {
          row[d] = v.audio_features(t, d);
          norm2 += row[d] * row[d];
        }
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
        if (seen_audio[c].empty()) {
          seen_audio[c] = row;
        } else {
          CHECK(row == seen_audio[c]);
        }
      }
    }
    for (std::size_t t = 0; t < cfg.num_segments; ++t) {
      bool active = false;
      for (std::size_t c = 0; c < cfg.num_categories; ++c) {
        active = active || v.gt_audio_segments(t, c) != 0.0;
      }
      if (!active) {
        for (std::size_t d = 0; d < cfg.feature_dim; ++d) {
          CHECK(v.audio_features(t, d) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("aggregate noise rates match the configured mix") {
  GeneratorConfig cfg;
  cfg.num_videos = 4000;
  cfg.num_segments = 10;
  cfg.feature_dim = 4;  // features irrelevant here, keep it cheap
  cfg.num_categories = 10;
  cfg.noise_spread = 0.0;
  cfg.seed = 7;
  const Dataset ds = generate_dataset(cfg);
  const NoiseRatios r = ds.true_noise_ratios();
  const double mass = cfg.p_both + cfg.p_audio_only + cfg.p_visual_only;
  for (std::size_t c = 0; c < cfg.num_categories; ++c) {
    CHECK(std::abs(r.audio[c] - cfg.p_visual_only / mass) < 0.05);
    CHECK(std::abs(r.visual[c] - cfg.p_audio_only / mass) < 0.05);
  }
}

TEST_CASE("noise_spread fans the per-category rates out, means preserved") {
  GeneratorConfig cfg;
  cfg.num_videos = 4000;
  cfg.feature_dim = 4;
  cfg.noise_spread = 1.0;
  cfg.seed = 9;
  const Dataset ds = generate_dataset(cfg);
  const NoiseRatios r = ds.true_noise_ratios();
  const std::size_t last = cfg.num_categories - 1;
  const double mass = cfg.p_both + cfg.p_audio_only + cfg.p_visual_only;

  // audio-noise mass ramps down across categories, visual-noise mass up
  CHECK(r.audio.front() > r.audio.back() + 0.05);
  CHECK(r.visual.back() > r.visual.front() + 0.05);
  CHECK(std::abs(r.audio.front() - 2.0 * cfg.p_visual_only / mass) < 0.05);
  CHECK(r.audio.back() < 0.03);
  CHECK(std::abs(r.visual[last] - 2.0 * cfg.p_audio_only / mass) < 0.06);
  CHECK(r.visual.front() < 0.03);

  double mean_a = 0.0, mean_v = 0.0;
  for (std::size_t c = 0; c <= last; ++c) {
    mean_a += r.audio[c];
    mean_v += r.visual[c];
  }
  mean_a /= cfg.num_categories;
  mean_v /= cfg.num_categories;
  CHECK(std::abs(mean_a - cfg.p_visual_only / mass) < 0.03);
  CHECK(std::abs(mean_v - cfg.p_audio_only / mass) < 0.03);
}

TEST_CASE("split partitions the corpus deterministically") {
  GeneratorConfig cfg = small_config();
  const Dataset ds = generate_dataset(cfg);
  const auto [train, eval] = split_dataset(ds, 0.8, 42);
  CHECK(train.size() == 160);
  CHECK(eval.size() == 40);

  const auto [train2, eval2] = split_dataset(ds, 0.8, 42);
  REQUIRE(train2.size() == train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    CHECK(train.videos[i].audio_features == train2.videos[i].audio_features);
  }

  // every original video lands in exactly one half
  std::size_t matched = 0;
  for (const SyntheticVideo& v : ds.videos) {
    for (const Dataset* part : {&train, &eval}) {
      for (const SyntheticVideo& w : part->videos) {
        if (v.audio_features == w.audio_features &&
            v.visual_features == w.visual_features) {
          ++matched;
        }
      }
    }
  }
  CHECK(matched == ds.size());

  // noise pairs are re-derived per split and nothing is lost
  CHECK(train.noise.audio_noise.size() + eval.noise.audio_noise.size() ==
        ds.noise.audio_noise.size());
  CHECK(train.noise.visual_noise.size() + eval.noise.visual_noise.size() ==
        ds.noise.visual_noise.size());
  for (const auto& [i, c] : train.noise.audio_noise) {
    CHECK(train.videos[i].video_label[c] == 1);
    CHECK(train.videos[i].gt_audio_label[c] == 0);
  }

  CHECK_THROWS_AS(split_dataset(ds, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(split_dataset(ds, 1.0, 1), ConfigError);
}
