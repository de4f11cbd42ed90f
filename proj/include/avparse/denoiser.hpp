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
#include <cstdint>
#include <string>
#include <vector>

#include "avparse/matrix.hpp"

namespace avparse {

enum class Modality : std::uint8_t { Audio = 0, Visual = 1 };

// Per-category estimated fraction of positive labels that are noisy.
struct NoiseRatios {
  std::vector<double> audio;   // C entries in [0,1]
  std::vector<double> visual;  // C entries in [0,1]

  std::size_t categories() const { return audio.size(); }
  static NoiseRatios constant(std::size_t num_categories, double rho);
};

struct EstimatorThresholds {
  double audio = 0.6;
  double visual = 1.8;
};

struct RemovedLabel {
  std::size_t batch_index;
  std::size_t category;
  Modality modality;

  auto operator<=>(const RemovedLabel&) const = default;
};

struct DenoiseResult {
  Matrix y_audio;   // refined {0,1}^{B x C}
  Matrix y_visual;  // refined {0,1}^{B x C}
  std::vector<RemovedLabel> removed;
};

// Noise-ratio estimation from video-level predictions of an estimator
// trained without cross-modal attention. Per category, a positive label
// counts as noisy when the mean-normalized prediction falls below the
// modality threshold. Categories with no positive labels get ratio 0.
//
// `mean_over_positives` switches the per-category normalizer from the mean
// over all videos (default, matching the formula symbols) to the mean over
// positively labeled videos only.
NoiseRatios estimate_noise_ratios(const Matrix& pred_audio,
                                  const Matrix& pred_visual, const Matrix& y,
                                  const EstimatorThresholds& thresholds,
                                  bool mean_over_positives = false);

// Indices of the k smallest (ascending) or k largest (descending) values.
// Ties break toward the lower original index. k > n returns all indices.
std::vector<std::size_t> select_indices(const std::vector<double>& losses,
                                        std::size_t k, bool descending);

// Joint-modal step: per category, a positive label is removed from a
// modality when its loss ranks among the top-M highest there AND among the
// top-M lowest in the other modality, M = int(warm_factor * ratio * #positives).
DenoiseResult jomold_step(const Matrix& loss_audio, const Matrix& loss_visual,
                          const Matrix& y, const NoiseRatios& ratios,
                          double warm_factor);

// Intra-modal baseline: highest-loss positives only, no cross-modal check.
DenoiseResult inmold_step(const Matrix& loss_audio, const Matrix& loss_visual,
                          const Matrix& y, const NoiseRatios& ratios,
                          double warm_factor);

// Joint-modal rule applied to one modality; the other labels stay equal to y.
DenoiseResult single_modality_step(const Matrix& loss_audio,
                                   const Matrix& loss_visual, const Matrix& y,
                                   const NoiseRatios& ratios,
                                   double warm_factor, Modality modality);

// Linear ramp min(1, progress/warmup); warmup_epochs == 0 means always 1.
double warmup_factor(double progress_epochs, double warmup_epochs);

// CSV serialization: header `category,r_audio,r_visual`, 6 decimal places.
void save_noise_ratios_csv(const std::string& path, const NoiseRatios& ratios);
NoiseRatios load_noise_ratios_csv(const std::string& path);

}  // namespace avparse
