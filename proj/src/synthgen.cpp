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

#include "avparse/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "avparse/common.hpp"

namespace avparse {
namespace {

enum class EventMode { Both, AudioOnly, VisualOnly };

// Unit-norm category prototypes, one per (modality, category), drawn once
// per dataset.
std::vector<std::vector<double>> draw_prototypes(Rng& rng, std::size_t count,
                                                 std::size_t dim) {
  std::vector<std::vector<double>> protos(count, std::vector<double>(dim));
  for (auto& p : protos) {
    double norm2 = 0.0;
    for (double& v : p) {
      v = rng.normal();
      norm2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : p) v *= inv;
  }
  return protos;
}

// Contiguous interval [start, start+len) within [0, T). Events span at
// least a few segments so a clean positive label is reliably detectable
// at the video level; down at length 1 the per-segment feature noise
// drowns video-level evidence and label quality stops mattering.
std::pair<std::size_t, std::size_t> sample_interval(Rng& rng, std::size_t t) {
  const std::size_t min_len = std::min<std::size_t>(4, t);
  const std::size_t len = min_len + rng.uniform_int(t - min_len + 1);
  const std::size_t start = rng.uniform_int(t - len + 1);
  return {start, start + len};
}

}  // namespace

void GeneratorConfig::validate() const {
  if (num_videos < 1 || num_segments < 1 || feature_dim < 1 || num_categories < 1) {
    throw ConfigError("generator: counts must be >= 1");
  }
  if (p_both < 0.0 || p_audio_only < 0.0 || p_visual_only < 0.0) {
    throw ConfigError("generator: presence probabilities must be nonnegative");
  }
  const double mass = p_both + p_audio_only + p_visual_only;
  if (mass > 1.0 + 1e-12) {
    throw ConfigError("generator: p_both + p_audio_only + p_visual_only exceeds 1 (" +
                      std::to_string(mass) + ")");
  }
  if (mass <= 0.0) {
    throw ConfigError("generator: presence probabilities sum to zero");
  }
  if (min_events_per_video < 1 || min_events_per_video > max_events_per_video) {
    throw ConfigError("generator: need 1 <= min_events <= max_events");
  }
  if (max_events_per_video > num_categories) {
    throw ConfigError("generator: max_events_per_video exceeds category count");
  }
  if (feature_noise_sigma < 0.0) {
    throw ConfigError("generator: feature_noise_sigma must be >= 0");
  }
  if (noise_spread < 0.0 || noise_spread > 1.0) {
    throw ConfigError("generator: noise_spread must lie in [0,1]");
  }
  if (num_categories > 1) {
    // the fanned-out noise masses must leave room for p_both >= 0
    const double worst = std::max(p_audio_only, p_visual_only) *
                         (1.0 + noise_spread);
    if (worst + std::min(p_audio_only, p_visual_only) * (1.0 - noise_spread) >
        p_both + p_audio_only + p_visual_only + 1e-12) {
      throw ConfigError(
          "generator: noise_spread pushes a category's noise mass past its "
          "occurrence mass");
    }
  }
}

NoiseRatios Dataset::true_noise_ratios() const {
  NoiseRatios out{std::vector<double>(num_categories, 0.0),
                  std::vector<double>(num_categories, 0.0)};
  std::vector<double> positives(num_categories, 0.0);
  std::vector<double> audio_noisy(num_categories, 0.0);
  std::vector<double> visual_noisy(num_categories, 0.0);
  for (const SyntheticVideo& v : videos) {
    for (std::size_t c = 0; c < num_categories; ++c) {
      if (!v.video_label[c]) continue;
      positives[c] += 1.0;
      if (!v.gt_audio_label[c]) audio_noisy[c] += 1.0;
      if (!v.gt_visual_label[c]) visual_noisy[c] += 1.0;
    }
  }
  for (std::size_t c = 0; c < num_categories; ++c) {
    if (positives[c] > 0.0) {
      out.audio[c] = audio_noisy[c] / positives[c];
      out.visual[c] = visual_noisy[c] / positives[c];
    }
  }
  return out;
}

Dataset generate_dataset(const GeneratorConfig& config) {
  config.validate();
  const std::size_t T = config.num_segments;
  const std::size_t D = config.feature_dim;
  const std::size_t C = config.num_categories;

  Dataset ds;
  ds.num_segments = T;
  ds.feature_dim = D;
  ds.num_categories = C;
  ds.seed = config.seed;

  const Rng base(config.seed);
  Rng proto_rng = base.split(0);
  const auto audio_protos = draw_prototypes(proto_rng, C, D);
  const auto visual_protos = draw_prototypes(proto_rng, C, D);

  const double mode_mass = config.p_both + config.p_audio_only + config.p_visual_only;

  // Per-category modality mix. The two noise masses ramp in opposite
  // directions across categories (means preserved); every video draws its
  // categories uniformly, so corpus-wide noise rates match the config.
  std::vector<double> p_audio_only_c(C), p_visual_only_c(C);
  for (std::size_t c = 0; c < C; ++c) {
    const double ramp =
        C > 1 ? 2.0 * static_cast<double>(c) / static_cast<double>(C - 1) - 1.0
              : 0.0;
    p_audio_only_c[c] = config.p_audio_only * (1.0 + config.noise_spread * ramp);
    p_visual_only_c[c] = config.p_visual_only * (1.0 - config.noise_spread * ramp);
  }

  ds.videos.resize(config.num_videos);
  for (std::size_t i = 0; i < config.num_videos; ++i) {
    Rng rng = base.split(1 + i);
    SyntheticVideo& v = ds.videos[i];
    v.audio_features.resize(T, D);
    v.visual_features.resize(T, D);
    v.video_label.assign(C, 0);
    v.gt_audio_label.assign(C, 0);
    v.gt_visual_label.assign(C, 0);
    v.gt_audio_segments.resize(T, C);
    v.gt_visual_segments.resize(T, C);

    const std::size_t span = config.max_events_per_video - config.min_events_per_video + 1;
    const std::size_t n_events = config.min_events_per_video + rng.uniform_int(span);

    // categories without replacement
    std::vector<std::size_t> cats(C);
    std::iota(cats.begin(), cats.end(), 0);
    rng.shuffle(cats);
    cats.resize(n_events);

    for (std::size_t c : cats) {
      const double u = rng.uniform() * mode_mass;
      const double p_both_c = mode_mass - p_audio_only_c[c] - p_visual_only_c[c];
      EventMode mode = EventMode::Both;
      if (u >= p_both_c) {
        mode = (u < p_both_c + p_audio_only_c[c]) ? EventMode::AudioOnly
                                                  : EventMode::VisualOnly;
      }
      v.video_label[c] = 1;
      if (mode != EventMode::VisualOnly) {
        // audio interval sampled independently of the visual one
        auto [s, e] = sample_interval(rng, T);
        v.gt_audio_label[c] = 1;
        for (std::size_t t = s; t < e; ++t) v.gt_audio_segments(t, c) = 1.0;
      }
      if (mode != EventMode::AudioOnly) {
        auto [s, e] = sample_interval(rng, T);
        v.gt_visual_label[c] = 1;
        for (std::size_t t = s; t < e; ++t) v.gt_visual_segments(t, c) = 1.0;
      }
      if (mode == EventMode::AudioOnly) ds.noise.visual_noise.insert({i, c});
      if (mode == EventMode::VisualOnly) ds.noise.audio_noise.insert({i, c});
    }

    // segment feature = sum of active prototypes + Gaussian noise;
    // background segments are pure noise
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t d = 0; d < D; ++d) {
        v.audio_features(t, d) = config.feature_noise_sigma * rng.normal();
      }
      for (std::size_t c = 0; c < C; ++c) {
        if (v.gt_audio_segments(t, c) != 0.0) {
          for (std::size_t d = 0; d < D; ++d) v.audio_features(t, d) += audio_protos[c][d];
        }
      }
      for (std::size_t d = 0; d < D; ++d) {
        v.visual_features(t, d) = config.feature_noise_sigma * rng.normal();
      }
      for (std::size_t c = 0; c < C; ++c) {
        if (v.gt_visual_segments(t, c) != 0.0) {
          for (std::size_t d = 0; d < D; ++d) v.visual_features(t, d) += visual_protos[c][d];
        }
      }
    }
  }
  return ds;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset,
                                          double train_fraction,
                                          std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw ConfigError("split: train_fraction must lie in (0,1)");
  }
  const std::size_t n = dataset.size();
  const std::size_t n_train =
      static_cast<std::size_t>(train_fraction * static_cast<double>(n));
  if (n_train == 0 || n_train == n) {
    throw ConfigError("split: a split would be empty (N=" + std::to_string(n) +
                      ", fraction=" + std::to_string(train_fraction) + ")");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  auto build = [&](std::size_t begin, std::size_t end) {
    Dataset out;
    out.num_segments = dataset.num_segments;
    out.feature_dim = dataset.feature_dim;
    out.num_categories = dataset.num_categories;
    out.seed = dataset.seed;
    out.videos.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
      out.videos.push_back(dataset.videos[order[k]]);
    }
    // noise pairs re-derived against the new indices
    for (std::size_t k = 0; k < out.videos.size(); ++k) {
      const SyntheticVideo& v = out.videos[k];
      for (std::size_t c = 0; c < out.num_categories; ++c) {
        if (!v.video_label[c]) continue;
        if (!v.gt_audio_label[c]) out.noise.audio_noise.insert({k, c});
        if (!v.gt_visual_label[c]) out.noise.visual_noise.insert({k, c});
      }
    }
    return out;
  };
  return {build(0, n_train), build(n_train, n)};
}

}  // namespace avparse
