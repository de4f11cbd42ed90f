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

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "avparse/denoiser.hpp"
#include "avparse/matrix.hpp"
#include "avparse/synthgen.hpp"

namespace avparse {

// Maximal run of consecutive positive segments for one category,
// inclusive 0-based segment indices.
struct Event {
  std::size_t category;
  std::size_t start;
  std::size_t end;

  auto operator<=>(const Event&) const = default;
};

std::vector<Event> extract_events(const Matrix& segments);

// Inverse of extract_events.
Matrix rasterize_events(const std::vector<Event>& events, std::size_t t,
                        std::size_t c);

// Per-video binary segment predictions; the audio-visual track is the
// elementwise AND of the two modality tracks.
struct SegmentPredictions {
  std::vector<Matrix> audio;   // T x C per video
  std::vector<Matrix> visual;  // T x C per video

  std::size_t size() const { return audio.size(); }
  Matrix audio_visual(std::size_t video) const;
};

// Macro-averaged segment F1: per video 2TP/(2TP+FP+FN) over all (t,c)
// cells (1.0 when both pred and gt are empty), then the mean over videos.
double segment_f1(const std::vector<Matrix>& pred, const std::vector<Matrix>& gt);

// Event-level F1 at an IoU threshold: per video and category, candidate
// pairs with IoU >= threshold are matched greedily in descending IoU,
// one-to-one; the per-video F1 uses the pooled TP/FP/FN.
double event_f1(const std::vector<std::vector<Event>>& pred,
                const std::vector<std::vector<Event>>& gt,
                double miou_threshold = 0.5);

double interval_iou(const Event& a, const Event& b);

struct PrecisionRecallF1 {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

// Set precision/recall/F1 of removed labels against the injected noise;
// empty-vs-empty scores 1.0 by convention.
struct DenoiseQuality {
  PrecisionRecallF1 audio;
  PrecisionRecallF1 visual;
};

using LabelSet = std::set<std::pair<std::size_t, std::size_t>>;

DenoiseQuality denoise_prf(const std::vector<RemovedLabel>& removed,
                           const NoiseGroundTruth& gt_noise);

struct ParsingReport {
  // segment level
  double seg_audio = 0.0, seg_visual = 0.0, seg_av = 0.0;
  double seg_type_at_av = 0.0, seg_event_at_av = 0.0;
  // event level
  double ev_audio = 0.0, ev_visual = 0.0, ev_av = 0.0;
  double ev_type_at_av = 0.0, ev_event_at_av = 0.0;
  // filled when a removed-label log and ground truth are available
  bool has_denoise = false;
  DenoiseQuality denoise;

  std::vector<std::pair<std::string, double>> rows() const;
};

// Full evaluation of thresholded predictions against ground-truth segment
// labels. Type@AV = (A+V+AV)/3; Event@AV pools per-video counts over the
// audio and visual tracks before forming the F1.
ParsingReport evaluate_predictions(const SegmentPredictions& pred,
                                   const std::vector<Matrix>& gt_audio,
                                   const std::vector<Matrix>& gt_visual,
                                   double miou_threshold = 0.5);

}  // namespace avparse
