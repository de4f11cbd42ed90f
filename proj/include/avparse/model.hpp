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
#include <string>
#include <vector>

#include "avparse/matrix.hpp"
#include "avparse/rng.hpp"

namespace avparse {

struct ModelConfig {
  std::size_t feature_dim = 32;     // D
  std::size_t num_segments = 10;    // T
  std::size_t num_categories = 10;  // C
  bool skip_cross_modal = false;
  // Segment probabilities at or above this become positive predictions.
  double segment_threshold = 0.5;
  // Drop the (1-y)log(1-p) term of the objective. Off by default; kept as
  // a switch because a positive-only loss is degenerate (the all-ones
  // predictor minimizes it).
  bool positive_only_loss = false;

  void validate() const;
};

// A single linear map D -> C with bias, shared across modalities.
struct LinearHead {
  Matrix weight;             // D x C
  std::vector<double> bias;  // C

  LinearHead() = default;
  LinearHead(std::size_t d, std::size_t c) : weight(d, c), bias(c, 0.0) {}
  void zero();
};

struct ModelParams {
  LinearHead classifier;     // segment probabilities (shared FC)
  LinearHead temporal_head;  // temporal attention logits
  LinearHead modality_head;  // audio/visual attention logits

  static ModelParams init(const ModelConfig& cfg, Rng& rng);

  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& flat);
  bool all_finite() const;
};

// Per-video forward results plus the intermediates the backward pass needs.
// Reused across calls in training loops to avoid reallocation.
struct VideoForward {
  Matrix enhanced_audio, enhanced_visual;  // T x D
  Matrix seg_probs_audio, seg_probs_visual;  // T x C, in (0,1)
  Matrix temporal_audio, temporal_visual;    // T x C, columns sum to 1
  // Audio share of the modality softmax; visual share is 1 - this.
  Matrix modality_audio;  // T x C
  std::vector<double> pooled_audio, pooled_visual, pooled_video;  // C
  // Total pooled weight per category; video-level probability is
  // normalized by this so it stays a convex combination.
  std::vector<double> pool_weight;  // C

  // scratch
  Matrix attn_scores, attn_weights, attn_out;
  Matrix logits_a, logits_v, mod_logits_a, mod_logits_v;
};

// Attention-based feature enhancement: each segment gets its self-attention
// summary added, plus the cross-modal summary unless skipped. Attention is
// parameter-free with divisor d = feature_dim.
void enhance_features(const Matrix& f_audio, const Matrix& f_visual,
                      bool skip_cross_modal, Matrix& out_audio,
                      Matrix& out_visual);

void forward_video(const ModelParams& params, const ModelConfig& cfg,
                   const Matrix& f_audio, const Matrix& f_visual,
                   VideoForward& out);
VideoForward forward_video(const ModelParams& params, const ModelConfig& cfg,
                           const Matrix& f_audio, const Matrix& f_visual);

// A batch is a list of per-video feature pairs (borrowed).
struct BatchRef {
  std::vector<const Matrix*> audio;
  std::vector<const Matrix*> visual;
  std::size_t size() const { return audio.size(); }
};

struct BatchLosses {
  Matrix audio, visual, video;  // B x C elementwise BCE
  double total = 0.0;           // mean over batch of category-summed terms
};

BatchLosses batch_losses(const ModelParams& params, const ModelConfig& cfg,
                         const BatchRef& batch, const Matrix& y_audio,
                         const Matrix& y_visual, const Matrix& y_video);

struct Gradients {
  LinearHead classifier, temporal_head, modality_head;

  Gradients() = default;
  explicit Gradients(const ModelConfig& cfg);
  void zero();
  std::vector<double> flatten() const;
};

// Computes the total loss and its analytic gradient w.r.t. all parameter
// blocks. Returns the total loss.
double backward(const ModelParams& params, const ModelConfig& cfg,
                const BatchRef& batch, const Matrix& y_audio,
                const Matrix& y_visual, const Matrix& y_video,
                Gradients& grads);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  Gradients m, v;  // first/second moments, same shapes as the gradients

  explicit AdamState(const ModelConfig& cfg) : m(cfg), v(cfg) {}
};

// One Adam update. Throws NumericError naming the parameter block if a
// gradient is non-finite.
void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               double lr);

// Step schedule: lr * decay^floor(epoch / decay_every).
double scheduled_lr(double base_lr, double decay, int decay_every_epochs,
                    int epoch);

}  // namespace avparse
