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

#include "avparse/config.hpp"
#include "avparse/metrics.hpp"
#include "avparse/model.hpp"
#include "avparse/synthgen.hpp"

namespace avparse {

struct TrainOutcome {
  ModelParams params;
  std::vector<double> epoch_losses;
  // (video index within the training set, category, modality) triples
  // removed during the final epoch.
  std::vector<RemovedLabel> removed_final_epoch;
};

// Three-phase pipeline pieces. Training is single-threaded and fully
// deterministic in (configs, seed): per-epoch shuffles and the parameter
// init derive from seed-split Rng streams.
//
// Per iteration with an active denoising mode: forward losses with
// cross-modal attention skipped, a denoise step scaled by the warm-up
// factor, then the optimized forward/backward against (Y^a, Y^v, Y).
TrainOutcome train_model(const Dataset& train, const ModelConfig& model_cfg,
                         const OptimizerConfig& opt_cfg,
                         const DenoiserConfig& den_cfg,
                         const NoiseRatios* ratios, std::uint64_t seed);

// Video-level pooled predictions over a dataset (rows = videos).
void predict_video_level(const ModelParams& params, const ModelConfig& cfg,
                         const Dataset& dataset, Matrix& pred_audio,
                         Matrix& pred_visual);

// Thresholded binary segment predictions for every video.
SegmentPredictions predict_segments(const ModelParams& params,
                                    const ModelConfig& cfg,
                                    const Dataset& dataset);

struct EstimatorOutcome {
  TrainOutcome training;
  NoiseRatios ratios;
  Matrix pred_audio, pred_visual;  // train-set video-level predictions
};

// Trains the noise estimator and derives per-category noise ratios from
// its train-set predictions. The estimator drops cross-modal attention by
// default; with_cross_modal keeps it, which exists only for ablations.
EstimatorOutcome run_estimator(const Dataset& train, ModelConfig model_cfg,
                               const OptimizerConfig& opt_cfg,
                               const EstimatorThresholds& thresholds,
                               bool mean_over_positives, std::uint64_t seed,
                               bool with_cross_modal = false);

// Full evaluation of a trained model on a dataset with ground truth.
ParsingReport evaluate_model(const ModelParams& params, const ModelConfig& cfg,
                             const Dataset& dataset);

// Label matrices of a whole dataset (rows = videos).
Matrix video_label_matrix(const Dataset& dataset);

}  // namespace avparse
