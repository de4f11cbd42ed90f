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

#include "avparse/model.hpp"

#include <cmath>
#include <cstring>

#include "avparse/common.hpp"
#include "avparse/kernels.hpp"
#include "avparse/ops.hpp"

namespace avparse {
namespace {

// out[i][j] = <a.row(i), b.row(j)>
void gram_into(const Matrix& a, const Matrix& b, Matrix& out) {
  out.resize(a.rows(), b.rows());
  const auto& k = kern::active_kernels();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* o = out.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      o[j] = k.dot(a.row(i), b.row(j), a.cols());
    }
  }
}

// out = h * head.weight + head.bias (broadcast per row)
void linear_into(const Matrix& h, const LinearHead& head, Matrix& out) {
  matmul_into(h, head.weight, out);
  for (std::size_t t = 0; t < out.rows(); ++t) {
    kern::active_kernels().add(out.row(t), head.bias.data(), out.row(t),
                               out.cols());
  }
}

// out += alpha * a^T * b, a: T x D, b: T x C, out: D x C
void accum_at_b(double alpha, const Matrix& a, const Matrix& b, Matrix& out) {
  const auto& k = kern::active_kernels();
  for (std::size_t t = 0; t < a.rows(); ++t) {
    const double* arow = a.row(t);
    const double* brow = b.row(t);
    for (std::size_t d = 0; d < a.cols(); ++d) {
      k.axpy(alpha * arow[d], brow, out.row(d), b.cols());
    }
  }
}

void sigmoid_into(const Matrix& x, Matrix& out) {
  out.resize(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.data()[i] = 1.0 / (1.0 + std::exp(-x.data()[i]));
  }
}

// Softmax over the row axis (per column), with max-subtraction.
void softmax_cols_into(const Matrix& u, Matrix& out) {
  out.resize(u.rows(), u.cols());
  for (std::size_t c = 0; c < u.cols(); ++c) {
    double mx = u(0, c);
    for (std::size_t t = 1; t < u.rows(); ++t) mx = std::max(mx, u(t, c));
    double sum = 0.0;
    for (std::size_t t = 0; t < u.rows(); ++t) {
      out(t, c) = std::exp(u(t, c) - mx);
      sum += out(t, c);
    }
    for (std::size_t t = 0; t < u.rows(); ++t) out(t, c) /= sum;
  }
}

void enhance_into(const Matrix& fa, const Matrix& fv, bool skip_cross_modal,
                  Matrix& ha, Matrix& hv, Matrix& scores, Matrix& weights,
                  Matrix& attn_out) {
  require_same_shape(fa, fv, "enhance_features");
  const double d = static_cast<double>(fa.cols());

  auto add_attention = [&](const Matrix& q, const Matrix& kv, Matrix& dst) {
    gram_into(q, kv, scores);
    softmax_rows_into(scores, d, weights);
    matmul_into(weights, kv, attn_out);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst.data()[i] += attn_out.data()[i];
    }
  };

  ha = fa;
  add_attention(fa, fa, ha);
  hv = fv;
  add_attention(fv, fv, hv);
  if (!skip_cross_modal) {
    add_attention(fa, fv, ha);
    add_attention(fv, fa, hv);
  }
}

double loss_grad(double p, double y, bool positive_only) {
  if (positive_only) return -y / clamp_prob(p);
  return bce_grad_scalar(p, y);
}

double loss_value(double p, double y, bool positive_only) {
  if (positive_only) return -y * std::log(clamp_prob(p));
  return bce_scalar(p, y);
}

void check_features(const ModelConfig& cfg, const Matrix& fa, const Matrix& fv) {
  if (fa.rows() != cfg.num_segments || fa.cols() != cfg.feature_dim ||
      !fa.same_shape(fv)) {
    throw ShapeError("forward_video: features " + shape_string(fa) + "/" +
                     shape_string(fv) + " do not match model (T=" +
                     std::to_string(cfg.num_segments) +
                     ", D=" + std::to_string(cfg.feature_dim) + ")");
  }
}

}  // namespace

void ModelConfig::validate() const {
  if (feature_dim < 1 || num_segments < 1 || num_categories < 1) {
    throw ConfigError("model: feature_dim, num_segments and num_categories must be >= 1");
  }
  if (segment_threshold <= 0.0 || segment_threshold >= 1.0) {
    throw ConfigError("model: segment_threshold must lie in (0,1)");
  }
}

void LinearHead::zero() {
  weight.fill(0.0);
  std::fill(bias.begin(), bias.end(), 0.0);
}

ModelParams ModelParams::init(const ModelConfig& cfg, Rng& rng) {
  cfg.validate();
  ModelParams p;
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.feature_dim));
  for (LinearHead* head : {&p.classifier, &p.temporal_head, &p.modality_head}) {
    *head = LinearHead(cfg.feature_dim, cfg.num_categories);
    for (std::size_t i = 0; i < head->weight.size(); ++i) {
      head->weight.data()[i] = scale * rng.normal();
    }
  }
  return p;
}

std::size_t ModelParams::parameter_count() const {
  return 3 * (classifier.weight.size() + classifier.bias.size());
}

std::vector<double> ModelParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const LinearHead* head : {&classifier, &temporal_head, &modality_head}) {
    flat.insert(flat.end(), head->weight.values().begin(), head->weight.values().end());
    flat.insert(flat.end(), head->bias.begin(), head->bias.end());
  }
  return flat;
}

void ModelParams::unflatten(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) {
    throw ShapeError("unflatten: expected " + std::to_string(parameter_count()) +
                     " values, got " + std::to_string(flat.size()));
  }
  std::size_t pos = 0;
  for (LinearHead* head : {&classifier, &temporal_head, &modality_head}) {
    std::memcpy(head->weight.data(), flat.data() + pos,
                head->weight.size() * sizeof(double));
    pos += head->weight.size();
    std::memcpy(head->bias.data(), flat.data() + pos,
                head->bias.size() * sizeof(double));
    pos += head->bias.size();
  }
}

bool ModelParams::all_finite() const {
  for (const LinearHead* head : {&classifier, &temporal_head, &modality_head}) {
    if (!head->weight.all_finite()) return false;
    for (double b : head->bias) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

void enhance_features(const Matrix& f_audio, const Matrix& f_visual,
                      bool skip_cross_modal, Matrix& out_audio,
                      Matrix& out_visual) {
  Matrix scores, weights, attn;
  enhance_into(f_audio, f_visual, skip_cross_modal, out_audio, out_visual,
               scores, weights, attn);
}

void forward_video(const ModelParams& params, const ModelConfig& cfg,
                   const Matrix& f_audio, const Matrix& f_visual,
                   VideoForward& out) {
  check_features(cfg, f_audio, f_visual);
  const std::size_t T = cfg.num_segments;
  const std::size_t C = cfg.num_categories;

  enhance_into(f_audio, f_visual, cfg.skip_cross_modal, out.enhanced_audio,
               out.enhanced_visual, out.attn_scores, out.attn_weights,
               out.attn_out);

  linear_into(out.enhanced_audio, params.classifier, out.logits_a);
  linear_into(out.enhanced_visual, params.classifier, out.logits_v);
  sigmoid_into(out.logits_a, out.seg_probs_audio);
  sigmoid_into(out.logits_v, out.seg_probs_visual);

  linear_into(out.enhanced_audio, params.temporal_head, out.logits_a);
  linear_into(out.enhanced_visual, params.temporal_head, out.logits_v);
  softmax_cols_into(out.logits_a, out.temporal_audio);
  softmax_cols_into(out.logits_v, out.temporal_visual);

  linear_into(out.enhanced_audio, params.modality_head, out.mod_logits_a);
  linear_into(out.enhanced_visual, params.modality_head, out.mod_logits_v);
  out.modality_audio.resize(T, C);
  for (std::size_t i = 0; i < out.modality_audio.size(); ++i) {
    const double diff = out.mod_logits_a.data()[i] - out.mod_logits_v.data()[i];
    out.modality_audio.data()[i] = 1.0 / (1.0 + std::exp(-diff));
  }

  out.pooled_audio.assign(C, 0.0);
  out.pooled_visual.assign(C, 0.0);
  out.pooled_video.assign(C, 0.0);
  out.pool_weight.assign(C, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    double pa = 0.0, pv = 0.0, pav = 0.0, z = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double wa = out.temporal_audio(t, c);
      const double wv = out.temporal_visual(t, c);
      const double ma = out.modality_audio(t, c);
      pa += wa * out.seg_probs_audio(t, c);
      pv += wv * out.seg_probs_visual(t, c);
      const double aw = ma * wa;
      const double vw = (1.0 - ma) * wv;
      pav += aw * out.seg_probs_audio(t, c) + vw * out.seg_probs_visual(t, c);
      z += aw + vw;
    }
    out.pooled_audio[c] = pa;
    out.pooled_visual[c] = pv;
    out.pool_weight[c] = z;
    // The joint pool is normalized by the total weight so the video-level
    // probability stays inside the convex hull of the segment probabilities.
    out.pooled_video[c] = pav / z;
  }
}

VideoForward forward_video(const ModelParams& params, const ModelConfig& cfg,
                           const Matrix& f_audio, const Matrix& f_visual) {
  VideoForward out;
  forward_video(params, cfg, f_audio, f_visual, out);
  return out;
}

BatchLosses batch_losses(const ModelParams& params, const ModelConfig& cfg,
                         const BatchRef& batch, const Matrix& y_audio,
                         const Matrix& y_visual, const Matrix& y_video) {
  const std::size_t B = batch.size();
  const std::size_t C = cfg.num_categories;
  if (y_audio.rows() != B || y_audio.cols() != C || !y_audio.same_shape(y_visual) ||
      !y_audio.same_shape(y_video)) {
    throw ShapeError("batch_losses: label matrices must be " + std::to_string(B) +
                     "x" + std::to_string(C));
  }
  BatchLosses out;
  out.audio.resize(B, C);
  out.visual.resize(B, C);
  out.video.resize(B, C);
  VideoForward vf;
  for (std::size_t b = 0; b < B; ++b) {
    forward_video(params, cfg, *batch.audio[b], *batch.visual[b], vf);
    for (std::size_t c = 0; c < C; ++c) {
      out.audio(b, c) = loss_value(vf.pooled_audio[c], y_audio(b, c), cfg.positive_only_loss);
      out.visual(b, c) = loss_value(vf.pooled_visual[c], y_visual(b, c), cfg.positive_only_loss);
      out.video(b, c) = loss_value(vf.pooled_video[c], y_video(b, c), cfg.positive_only_loss);
      out.total += out.audio(b, c) + out.visual(b, c) + out.video(b, c);
    }
  }
  out.total /= static_cast<double>(B);
  return out;
}

Gradients::Gradients(const ModelConfig& cfg)
    : classifier(cfg.feature_dim, cfg.num_categories),
      temporal_head(cfg.feature_dim, cfg.num_categories),
      modality_head(cfg.feature_dim, cfg.num_categories) {}

void Gradients::zero() {
  classifier.zero();
  temporal_head.zero();
  modality_head.zero();
}

std::vector<double> Gradients::flatten() const {
  std::vector<double> flat;
  for (const LinearHead* head : {&classifier, &temporal_head, &modality_head}) {
    flat.insert(flat.end(), head->weight.values().begin(), head->weight.values().end());
    flat.insert(flat.end(), head->bias.begin(), head->bias.end());
  }
  return flat;
}

double backward(const ModelParams& params, const ModelConfig& cfg,
                const BatchRef& batch, const Matrix& y_audio,
                const Matrix& y_visual, const Matrix& y_video,
                Gradients& grads) {
  const std::size_t B = batch.size();
  const std::size_t T = cfg.num_segments;
  const std::size_t C = cfg.num_categories;
  grads.zero();
  const double inv_b = 1.0 / static_cast<double>(B);
  const bool pos_only = cfg.positive_only_loss;

  double total = 0.0;
  VideoForward vf;
  Matrix d_pa, d_pv, d_wa, d_wv, d_mod;
  for (std::size_t b = 0; b < B; ++b) {
    forward_video(params, cfg, *batch.audio[b], *batch.visual[b], vf);
    d_pa.resize(T, C);
    d_pv.resize(T, C);
    d_wa.resize(T, C);
    d_wv.resize(T, C);
    d_mod.resize(T, C);

    for (std::size_t c = 0; c < C; ++c) {
      const double ya = y_audio(b, c), yv = y_visual(b, c), ys = y_video(b, c);
      total += loss_value(vf.pooled_audio[c], ya, pos_only) +
               loss_value(vf.pooled_visual[c], yv, pos_only) +
               loss_value(vf.pooled_video[c], ys, pos_only);
      const double g_pa = inv_b * loss_grad(vf.pooled_audio[c], ya, pos_only);
      const double g_pv = inv_b * loss_grad(vf.pooled_visual[c], yv, pos_only);
      const double g_ps = inv_b * loss_grad(vf.pooled_video[c], ys, pos_only);

      const double z = vf.pool_weight[c];
      const double d_s = g_ps / z;                       // d/d(unnormalized sum)
      const double d_z = -g_ps * vf.pooled_video[c] / z; // d/d(total weight)

      for (std::size_t t = 0; t < T; ++t) {
        const double wa = vf.temporal_audio(t, c);
        const double wv = vf.temporal_visual(t, c);
        const double ma = vf.modality_audio(t, c);
        const double pa = vf.seg_probs_audio(t, c);
        const double pv = vf.seg_probs_visual(t, c);

        double dpa = g_pa * wa;
        double dwa = g_pa * pa;
        double dpv = g_pv * wv;
        double dwv = g_pv * pv;

        const double aw = ma * wa;
        const double vw = (1.0 - ma) * wv;
        dpa += d_s * aw;
        dpv += d_s * vw;
        const double d_aw = d_s * pa + d_z;
        const double d_vw = d_s * pv + d_z;
        d_mod(t, c) = d_aw * wa - d_vw * wv;
        dwa += d_aw * ma;
        dwv += d_vw * (1.0 - ma);

        d_pa(t, c) = dpa;
        d_pv(t, c) = dpv;
        d_wa(t, c) = dwa;
        d_wv(t, c) = dwv;
      }
    }

    // sigmoid backward on segment probabilities (classifier logits)
    for (std::size_t i = 0; i < d_pa.size(); ++i) {
      const double pa = vf.seg_probs_audio.data()[i];
      const double pv = vf.seg_probs_visual.data()[i];
      d_pa.data()[i] *= pa * (1.0 - pa);
      d_pv.data()[i] *= pv * (1.0 - pv);
    }
    accum_at_b(1.0, vf.enhanced_audio, d_pa, grads.classifier.weight);
    accum_at_b(1.0, vf.enhanced_visual, d_pv, grads.classifier.weight);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t t = 0; t < T; ++t) {
        grads.classifier.bias[c] += d_pa(t, c) + d_pv(t, c);
      }
    }

    // temporal softmax backward (per column, per modality)
    auto softmax_col_backward = [&](const Matrix& w, Matrix& g) {
      for (std::size_t c = 0; c < C; ++c) {
        double dot = 0.0;
        for (std::size_t t = 0; t < T; ++t) dot += g(t, c) * w(t, c);
        for (std::size_t t = 0; t < T; ++t) g(t, c) = w(t, c) * (g(t, c) - dot);
      }
    };
    softmax_col_backward(vf.temporal_audio, d_wa);
    softmax_col_backward(vf.temporal_visual, d_wv);
    accum_at_b(1.0, vf.enhanced_audio, d_wa, grads.temporal_head.weight);
    accum_at_b(1.0, vf.enhanced_visual, d_wv, grads.temporal_head.weight);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t t = 0; t < T; ++t) {
        grads.temporal_head.bias[c] += d_wa(t, c) + d_wv(t, c);
      }
    }

    // two-way modality softmax backward; the bias cancels exactly because
    // it shifts both logits equally
    for (std::size_t i = 0; i < d_mod.size(); ++i) {
      const double ma = vf.modality_audio.data()[i];
      d_mod.data()[i] *= ma * (1.0 - ma);
    }
    accum_at_b(1.0, vf.enhanced_audio, d_mod, grads.modality_head.weight);
    accum_at_b(-1.0, vf.enhanced_visual, d_mod, grads.modality_head.weight);
  }
  return total * inv_b;
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               double lr) {
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

  auto update = [&](const char* name, double* p, const double* g, double* m,
                    double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(g[i])) {
        throw NumericError(std::string("adam_step: non-finite gradient in block '") +
                           name + "'");
      }
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  };

  struct Block {
    const char* name;
    LinearHead* p;
    const LinearHead* g;
    LinearHead* m;
    LinearHead* v;
  };
  const Block blocks[] = {
      {"classifier", &params.classifier, &grads.classifier, &state.m.classifier,
       &state.v.classifier},
      {"temporal_head", &params.temporal_head, &grads.temporal_head,
       &state.m.temporal_head, &state.v.temporal_head},
      {"modality_head", &params.modality_head, &grads.modality_head,
       &state.m.modality_head, &state.v.modality_head},
  };
  for (const Block& blk : blocks) {
    update(blk.name, blk.p->weight.data(), blk.g->weight.data(),
           blk.m->weight.data(), blk.v->weight.data(), blk.p->weight.size());
    update(blk.name, blk.p->bias.data(), blk.g->bias.data(), blk.m->bias.data(),
           blk.v->bias.data(), blk.p->bias.size());
  }
}

double scheduled_lr(double base_lr, double decay, int decay_every_epochs,
                    int epoch) {
  const int steps = decay_every_epochs > 0 ? epoch / decay_every_epochs : 0;
  return base_lr * std::pow(decay, steps);
}

}  // namespace avparse
