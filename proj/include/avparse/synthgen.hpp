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
#include <set>
#include <utility>
#include <vector>

#include "avparse/denoiser.hpp"
#include "avparse/matrix.hpp"
#include "avparse/rng.hpp"

namespace avparse {

// Controls the synthetic weakly-labeled audio-visual corpus. Each event is
// present in both modalities or only one of them; a video-level label whose
// event is missing from one modality is, by construction, a
// modality-specific noisy label for that modality.
struct GeneratorConfig {
  std::size_t num_videos = 2000;
  std::size_t num_segments = 10;   // T
  std::size_t feature_dim = 32;    // D
  std::size_t num_categories = 10; // C
  // Modality presence mix per event. An audio-only event makes its label
  // visual noise, and vice versa. The three values are corpus-wide means;
  // noise_spread fans the two noise masses out across categories.
  double p_both = 0.65;
  double p_audio_only = 0.25;   // injected visual-noise mass
  double p_visual_only = 0.10;  // injected audio-noise mass
  // Per-category heterogeneity in [0,1]. Category c gets visual-noise mass
  // p_audio_only * (1 + noise_spread * ramp(c)) with ramp linear in [-1,1],
  // and audio-noise mass ramped the opposite way, so per-category noise
  // ratios differ while the corpus means stay at the configured values.
  // 0 makes every category identical.
  double noise_spread = 1.0;
  std::size_t min_events_per_video = 1;
  std::size_t max_events_per_video = 3;
  double feature_noise_sigma = 0.5;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticVideo {
  Matrix audio_features;   // T x D
  Matrix visual_features;  // T x D
  std::vector<std::uint8_t> video_label;     // C, OR of the two modality labels
  std::vector<std::uint8_t> gt_audio_label;  // C
  std::vector<std::uint8_t> gt_visual_label; // C
  Matrix gt_audio_segments;   // T x C binary
  Matrix gt_visual_segments;  // T x C binary
};

// (video_index, category) pairs whose label is noise for one modality.
struct NoiseGroundTruth {
  std::set<std::pair<std::size_t, std::size_t>> audio_noise;
  std::set<std::pair<std::size_t, std::size_t>> visual_noise;
};

struct Dataset {
  std::size_t num_segments = 0;
  std::size_t feature_dim = 0;
  std::size_t num_categories = 0;
  std::uint64_t seed = 0;
  std::vector<SyntheticVideo> videos;
  NoiseGroundTruth noise;

  std::size_t size() const { return videos.size(); }
  // |noise pairs| / |positive labels| per category and modality; also the
  // benchmark target for the estimator.
  NoiseRatios true_noise_ratios() const;
};

Dataset generate_dataset(const GeneratorConfig& config);

// Deterministic seeded shuffle then split; both halves keep full ground
// truth (the eval half needs segment labels for metrics).
std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset,
                                          double train_fraction,
                                          std::uint64_t seed);

}  // namespace avparse
