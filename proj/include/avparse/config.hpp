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

#include "avparse/denoiser.hpp"
#include "avparse/model.hpp"
#include "avparse/synthgen.hpp"

namespace avparse {

struct OptimizerConfig {
  // Adam moves each weight by at most lr per step; 25 epochs over the
  // default corpus is ~625 steps, so the base rate has to be large enough
  // for total movement of O(1) per weight.
  double lr = 0.4;
  double lr_decay = 0.25;
  int decay_every_epochs = 6;
  int epochs = 25;
  std::size_t batch_size = 64;

  void validate() const;
};

enum class DenoiseMode {
  None,
  JoMoLD,
  InMoLD,
  AudioOnly,
  VisualOnly,
  ConstantRatio,
};

// "none", "jomold", "inmold", "audio_only", "visual_only",
// "constant_ratio(RHO)"
DenoiseMode parse_denoise_mode(const std::string& text, double* constant_ratio);
std::string denoise_mode_string(DenoiseMode mode, double constant_ratio);

struct DenoiserConfig {
  DenoiseMode mode = DenoiseMode::JoMoLD;
  double constant_ratio = 0.2;
  EstimatorThresholds thresholds;  // 0.6 / 1.8 defaults
  double warmup_epochs = 0.9;
  // Normalize estimator predictions by the positives-only mean instead of
  // the all-videos mean.
  bool mean_over_positives = false;

  bool needs_estimated_ratios() const {
    return mode == DenoiseMode::JoMoLD || mode == DenoiseMode::InMoLD ||
           mode == DenoiseMode::AudioOnly || mode == DenoiseMode::VisualOnly;
  }
};

struct ExperimentConfig {
  GeneratorConfig generator;
  ModelConfig model;
  OptimizerConfig optimizer;
  DenoiserConfig denoiser;
  double train_fraction = 0.8;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  // Benchmark grid; entries use the denoiser mode syntax.
  std::vector<std::string> benchmark_modes = {
      "none", "inmold", "audio_only", "visual_only", "jomold",
      "constant_ratio(0.2)"};

  void validate() const;
};

// key = value text with [section] tables; '#' starts a comment. Errors
// carry "<name>:<line>: ..." positions.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& name);
ExperimentConfig load_experiment_config(const std::string& path);

// Round-trippable echo of the effective configuration.
std::string config_echo(const ExperimentConfig& cfg);

}  // namespace avparse
