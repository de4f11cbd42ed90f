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

#include "avparse/trainer.hpp"

#include <algorithm>
#include <numeric>

#include "avparse/common.hpp"

namespace avparse {
namespace {

void fill_label_rows(const Dataset& ds, const std::vector<std::size_t>& order,
                     std::size_t begin, std::size_t count, Matrix& y) {
  const std::size_t c = ds.num_categories;
  y.resize(count, c);
  for (std::size_t b = 0; b < count; ++b) {
    const SyntheticVideo& v = ds.videos[order[begin + b]];
    for (std::size_t j = 0; j < c; ++j) {
      y(b, j) = static_cast<double>(v.video_label[j]);
    }
  }
}

DenoiseResult run_denoise_step(const DenoiserConfig& cfg,
                               const NoiseRatios& ratios,
                               const BatchLosses& losses, const Matrix& y,
                               double warm) {
  switch (cfg.mode) {
    case DenoiseMode::JoMoLD:
    case DenoiseMode::ConstantRatio:
      return jomold_step(losses.audio, losses.visual, y, ratios, warm);
    case DenoiseMode::InMoLD:
      return inmold_step(losses.audio, losses.visual, y, ratios, warm);
    case DenoiseMode::AudioOnly:
      return single_modality_step(losses.audio, losses.visual, y, ratios, warm,
                                  Modality::Audio);
    case DenoiseMode::VisualOnly:
      return single_modality_step(losses.audio, losses.visual, y, ratios, warm,
                                  Modality::Visual);
    case DenoiseMode::None:
      break;
  }
  throw ConfigError("run_denoise_step: mode has no denoise rule");
}

}  // namespace

Matrix video_label_matrix(const Dataset& dataset) {
  Matrix y(dataset.size(), dataset.num_categories);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t c = 0; c < dataset.num_categories; ++c) {
      y(i, c) = static_cast<double>(dataset.videos[i].video_label[c]);
    }
  }
  return y;
}

TrainOutcome train_model(const Dataset& train, const ModelConfig& model_cfg,
                         const OptimizerConfig& opt_cfg,
                         const DenoiserConfig& den_cfg,
                         const NoiseRatios* ratios, std::uint64_t seed) {
  model_cfg.validate();
  opt_cfg.validate();
  if (train.size() == 0) throw ConfigError("train_model: empty training set");
  if (train.feature_dim != model_cfg.feature_dim ||
      train.num_segments != model_cfg.num_segments ||
      train.num_categories != model_cfg.num_categories) {
    throw ConfigError("train_model: dataset and model dimensions differ");
  }
  if (den_cfg.warmup_epochs < 0.0) {
    throw ConfigError("train_model: warmup_epochs must be >= 0");
  }

  NoiseRatios effective_ratios;
  const bool denoising = den_cfg.mode != DenoiseMode::None;
  if (den_cfg.mode == DenoiseMode::ConstantRatio) {
    effective_ratios =
        NoiseRatios::constant(train.num_categories, den_cfg.constant_ratio);
  } else if (den_cfg.needs_estimated_ratios()) {
    if (ratios == nullptr) {
      throw ConfigError("train_model: mode needs estimated noise ratios");
    }
    if (ratios->categories() != train.num_categories ||
        ratios->visual.size() != train.num_categories) {
      throw ConfigError("train_model: noise ratio size mismatch");
    }
    effective_ratios = *ratios;
  }

  ModelConfig denoise_cfg = model_cfg;
  denoise_cfg.skip_cross_modal = true;

  Rng base(seed);
  Rng init_rng = base.split(0);
  TrainOutcome out;
  out.params = ModelParams::init(model_cfg, init_rng);
  AdamState adam(model_cfg);
  Gradients grads(model_cfg);

  const std::size_t n = train.size();
  const std::size_t batch_size = std::min(opt_cfg.batch_size, n);
  const std::size_t num_batches = (n + batch_size - 1) / batch_size;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Matrix y_video, y_audio, y_visual;
  BatchRef batch;

  for (int epoch = 0; epoch < opt_cfg.epochs; ++epoch) {
    Rng shuffle_rng = base.split(1 + static_cast<std::uint64_t>(epoch));
    shuffle_rng.shuffle(order);
    const double lr = scheduled_lr(opt_cfg.lr, opt_cfg.lr_decay,
                                   opt_cfg.decay_every_epochs, epoch);
    const bool final_epoch = epoch + 1 == opt_cfg.epochs;
    double epoch_loss = 0.0;

    for (std::size_t bi = 0; bi < num_batches; ++bi) {
      const std::size_t begin = bi * batch_size;
      const std::size_t count = std::min(batch_size, n - begin);
      batch.audio.clear();
      batch.visual.clear();
      for (std::size_t b = 0; b < count; ++b) {
        const SyntheticVideo& v = train.videos[order[begin + b]];
        batch.audio.push_back(&v.audio_features);
        batch.visual.push_back(&v.visual_features);
      }
      fill_label_rows(train, order, begin, count, y_video);

      if (denoising) {
        const double progress =
            static_cast<double>(epoch) +
            static_cast<double>(bi) / static_cast<double>(num_batches);
        const double warm = warmup_factor(progress, den_cfg.warmup_epochs);
        const BatchLosses probe =
            batch_losses(out.params, denoise_cfg, batch, y_video, y_video,
                         y_video);
        DenoiseResult refined = run_denoise_step(den_cfg, effective_ratios,
                                                 probe, y_video, warm);
        y_audio = std::move(refined.y_audio);
        y_visual = std::move(refined.y_visual);
        if (final_epoch) {
          for (RemovedLabel r : refined.removed) {
            r.batch_index = order[begin + r.batch_index];
            out.removed_final_epoch.push_back(r);
          }
        }
      } else {
        y_audio = y_video;
        y_visual = y_video;
      }

      epoch_loss += backward(out.params, model_cfg, batch, y_audio, y_visual,
                             y_video, grads);
      adam_step(out.params, grads, adam, lr);
    }
    out.epoch_losses.push_back(epoch_loss / static_cast<double>(num_batches));
  }
  std::sort(out.removed_final_epoch.begin(), out.removed_final_epoch.end());
  return out;
}

void predict_video_level(const ModelParams& params, const ModelConfig& cfg,
                         const Dataset& dataset, Matrix& pred_audio,
                         Matrix& pred_visual) {
  const std::size_t c = dataset.num_categories;
  pred_audio.resize(dataset.size(), c);
  pred_visual.resize(dataset.size(), c);
  VideoForward fwd;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const SyntheticVideo& v = dataset.videos[i];
    forward_video(params, cfg, v.audio_features, v.visual_features, fwd);
    for (std::size_t j = 0; j < c; ++j) {
      pred_audio(i, j) = fwd.pooled_audio[j];
      pred_visual(i, j) = fwd.pooled_visual[j];
    }
  }
}

SegmentPredictions predict_segments(const ModelParams& params,
                                    const ModelConfig& cfg,
                                    const Dataset& dataset) {
  SegmentPredictions pred;
  pred.audio.reserve(dataset.size());
  pred.visual.reserve(dataset.size());
  VideoForward fwd;
  for (const SyntheticVideo& v : dataset.videos) {
    forward_video(params, cfg, v.audio_features, v.visual_features, fwd);
    Matrix a(cfg.num_segments, cfg.num_categories);
    Matrix vi(cfg.num_segments, cfg.num_categories);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a.data()[i] =
          fwd.seg_probs_audio.data()[i] >= cfg.segment_threshold ? 1.0 : 0.0;
      vi.data()[i] =
          fwd.seg_probs_visual.data()[i] >= cfg.segment_threshold ? 1.0 : 0.0;
    }
    pred.audio.push_back(std::move(a));
    pred.visual.push_back(std::move(vi));
  }
  return pred;
}

EstimatorOutcome run_estimator(const Dataset& train, ModelConfig model_cfg,
                               const OptimizerConfig& opt_cfg,
                               const EstimatorThresholds& thresholds,
                               bool mean_over_positives, std::uint64_t seed,
                               bool with_cross_modal) {
  model_cfg.skip_cross_modal = !with_cross_modal;
  DenoiserConfig plain;
  plain.mode = DenoiseMode::None;
  EstimatorOutcome out;
  out.training = train_model(train, model_cfg, opt_cfg, plain, nullptr, seed);
  predict_video_level(out.training.params, model_cfg, train, out.pred_audio,
                      out.pred_visual);
  out.ratios =
      estimate_noise_ratios(out.pred_audio, out.pred_visual,
                            video_label_matrix(train), thresholds,
                            mean_over_positives);
  return out;
}

ParsingReport evaluate_model(const ModelParams& params, const ModelConfig& cfg,
                             const Dataset& dataset) {
  const SegmentPredictions pred = predict_segments(params, cfg, dataset);
  std::vector<Matrix> gt_audio, gt_visual;
  gt_audio.reserve(dataset.size());
  gt_visual.reserve(dataset.size());
  for (const SyntheticVideo& v : dataset.videos) {
    gt_audio.push_back(v.gt_audio_segments);
    gt_visual.push_back(v.gt_visual_segments);
  }
  return evaluate_predictions(pred, gt_audio, gt_visual);
}

}  // namespace avparse
