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

#include "avparse/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "avparse/common.hpp"

namespace avparse {
namespace {

struct Counts {
  double tp = 0.0, fp = 0.0, fn = 0.0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  // 1.0 when nothing was predicted and nothing was annotated
  double f1() const {
    const double denom = 2.0 * tp + fp + fn;
    return denom == 0.0 ? 1.0 : 2.0 * tp / denom;
  }
};

Counts cell_counts(const Matrix& pred, const Matrix& gt) {
  require_same_shape(pred, gt, "segment_f1");
  Counts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred.data()[i] != 0.0;
    const bool g = gt.data()[i] != 0.0;
    if (p && g) c.tp += 1.0;
    else if (p) c.fp += 1.0;
    else if (g) c.fn += 1.0;
  }
  return c;
}

// Greedy descending-IoU one-to-one matching within each category.
Counts event_counts(const std::vector<Event>& pred, const std::vector<Event>& gt,
                    double miou_threshold) {
  struct Pair {
    double iou;
    std::size_t pi, gi;
  };
  std::vector<Pair> pairs;
  for (std::size_t pi = 0; pi < pred.size(); ++pi) {
    for (std::size_t gi = 0; gi < gt.size(); ++gi) {
      if (pred[pi].category != gt[gi].category) continue;
      const double iou = interval_iou(pred[pi], gt[gi]);
      if (iou >= miou_threshold) pairs.push_back({iou, pi, gi});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.pi != b.pi) return a.pi < b.pi;
    return a.gi < b.gi;
  });
  std::vector<bool> pred_used(pred.size(), false), gt_used(gt.size(), false);
  Counts c;
  for (const Pair& p : pairs) {
    if (pred_used[p.pi] || gt_used[p.gi]) continue;
    pred_used[p.pi] = true;
    gt_used[p.gi] = true;
    c.tp += 1.0;
  }
  c.fp = static_cast<double>(pred.size()) - c.tp;
  c.fn = static_cast<double>(gt.size()) - c.tp;
  return c;
}

Matrix matrix_and(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "audio_visual");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.data()[i] = (a.data()[i] != 0.0 && b.data()[i] != 0.0) ? 1.0 : 0.0;
  }
  return out;
}

PrecisionRecallF1 set_prf(const LabelSet& removed, const LabelSet& gt) {
  PrecisionRecallF1 out;
  if (removed.empty() && gt.empty()) return out;  // all 1.0 by convention
  double tp = 0.0;
  for (const auto& r : removed) tp += gt.count(r) ? 1.0 : 0.0;
  out.precision = removed.empty() ? 0.0 : tp / static_cast<double>(removed.size());
  out.recall = gt.empty() ? 0.0 : tp / static_cast<double>(gt.size());
  out.f1 = (out.precision + out.recall) == 0.0
               ? 0.0
               : 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

}  // namespace

std::vector<Event> extract_events(const Matrix& segments) {
  std::vector<Event> events;
  for (std::size_t c = 0; c < segments.cols(); ++c) {
    std::size_t t = 0;
    while (t < segments.rows()) {
      if (segments(t, c) != 0.0) {
        std::size_t end = t;
        while (end + 1 < segments.rows() && segments(end + 1, c) != 0.0) ++end;
        events.push_back({c, t, end});
        t = end + 1;
      } else {
        ++t;
      }
    }
  }
  return events;
}

Matrix rasterize_events(const std::vector<Event>& events, std::size_t t,
                        std::size_t c) {
  Matrix out(t, c);
  for (const Event& e : events) {
    for (std::size_t i = e.start; i <= e.end; ++i) out(i, e.category) = 1.0;
  }
  return out;
}

double interval_iou(const Event& a, const Event& b) {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end, b.end);
  const double inter = hi >= lo ? static_cast<double>(hi - lo + 1) : 0.0;
  const double uni = static_cast<double>((a.end - a.start + 1) + (b.end - b.start + 1)) - inter;
  return inter / uni;
}

Matrix SegmentPredictions::audio_visual(std::size_t video) const {
  return matrix_and(audio[video], visual[video]);
}

double segment_f1(const std::vector<Matrix>& pred, const std::vector<Matrix>& gt) {
  if (pred.size() != gt.size()) {
    throw ShapeError("segment_f1: video counts differ");
  }
  if (pred.empty()) throw ShapeError("segment_f1: no videos");
  double sum = 0.0;
  for (std::size_t v = 0; v < pred.size(); ++v) {
    sum += cell_counts(pred[v], gt[v]).f1();
  }
  return sum / static_cast<double>(pred.size());
}

double event_f1(const std::vector<std::vector<Event>>& pred,
                const std::vector<std::vector<Event>>& gt,
                double miou_threshold) {
  if (pred.size() != gt.size()) {
    throw ShapeError("event_f1: video counts differ");
  }
  if (pred.empty()) throw ShapeError("event_f1: no videos");
  double sum = 0.0;
  for (std::size_t v = 0; v < pred.size(); ++v) {
    sum += event_counts(pred[v], gt[v], miou_threshold).f1();
  }
  return sum / static_cast<double>(pred.size());
}

DenoiseQuality denoise_prf(const std::vector<RemovedLabel>& removed,
                           const NoiseGroundTruth& gt_noise) {
  LabelSet removed_audio, removed_visual;
  for (const RemovedLabel& r : removed) {
    (r.modality == Modality::Audio ? removed_audio : removed_visual)
        .insert({r.batch_index, r.category});
  }
  DenoiseQuality q;
  q.audio = set_prf(removed_audio, gt_noise.audio_noise);
  q.visual = set_prf(removed_visual, gt_noise.visual_noise);
  return q;
}

std::vector<std::pair<std::string, double>> ParsingReport::rows() const {
  std::vector<std::pair<std::string, double>> r = {
      {"segment_audio", seg_audio},
      {"segment_visual", seg_visual},
      {"segment_audio_visual", seg_av},
      {"segment_type_at_av", seg_type_at_av},
      {"segment_event_at_av", seg_event_at_av},
      {"event_audio", ev_audio},
      {"event_visual", ev_visual},
      {"event_audio_visual", ev_av},
      {"event_type_at_av", ev_type_at_av},
      {"event_event_at_av", ev_event_at_av},
  };
  if (has_denoise) {
    r.insert(r.end(), {
                          {"denoise_precision_audio", denoise.audio.precision},
                          {"denoise_recall_audio", denoise.audio.recall},
                          {"denoise_f1_audio", denoise.audio.f1},
                          {"denoise_precision_visual", denoise.visual.precision},
                          {"denoise_recall_visual", denoise.visual.recall},
                          {"denoise_f1_visual", denoise.visual.f1},
                      });
  }
  return r;
}

ParsingReport evaluate_predictions(const SegmentPredictions& pred,
                                   const std::vector<Matrix>& gt_audio,
                                   const std::vector<Matrix>& gt_visual,
                                   double miou_threshold) {
  const std::size_t n = pred.size();
  if (n == 0 || gt_audio.size() != n || gt_visual.size() != n) {
    throw ShapeError("evaluate_predictions: video counts differ or empty");
  }
  double seg_a = 0.0, seg_v = 0.0, seg_av = 0.0, seg_pool = 0.0;
  double ev_a = 0.0, ev_v = 0.0, ev_av = 0.0, ev_pool = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix pred_av = pred.audio_visual(i);
    const Matrix gt_av = matrix_and(gt_audio[i], gt_visual[i]);

    const Counts ca = cell_counts(pred.audio[i], gt_audio[i]);
    const Counts cv = cell_counts(pred.visual[i], gt_visual[i]);
    seg_a += ca.f1();
    seg_v += cv.f1();
    seg_av += cell_counts(pred_av, gt_av).f1();
    Counts pooled = ca;
    pooled += cv;
    seg_pool += pooled.f1();

    const auto pea = extract_events(pred.audio[i]);
    const auto pev = extract_events(pred.visual[i]);
    const auto gea = extract_events(gt_audio[i]);
    const auto gev = extract_events(gt_visual[i]);
    const Counts ea = event_counts(pea, gea, miou_threshold);
    const Counts ev = event_counts(pev, gev, miou_threshold);
    ev_a += ea.f1();
    ev_v += ev.f1();
    ev_av += event_counts(extract_events(pred_av), extract_events(gt_av),
                          miou_threshold)
                 .f1();
    Counts epool = ea;
    epool += ev;
    ev_pool += epool.f1();
  }
  const double dn = static_cast<double>(n);
  ParsingReport rep;
  rep.seg_audio = seg_a / dn;
  rep.seg_visual = seg_v / dn;
  rep.seg_av = seg_av / dn;
  rep.seg_type_at_av = (rep.seg_audio + rep.seg_visual + rep.seg_av) / 3.0;
  rep.seg_event_at_av = seg_pool / dn;
  rep.ev_audio = ev_a / dn;
  rep.ev_visual = ev_v / dn;
  rep.ev_av = ev_av / dn;
  rep.ev_type_at_av = (rep.ev_audio + rep.ev_visual + rep.ev_av) / 3.0;
  rep.ev_event_at_av = ev_pool / dn;
  return rep;
}

}  // namespace avparse
