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

#include "avparse/config.hpp"

#include <fstream>
#include <sstream>

#include "avparse/common.hpp"

namespace avparse {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Parser {
  const std::string& name;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(name + ":" + std::to_string(line_no) + ": " + msg);
  }

  double as_double(const std::string& v) const {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) fail("trailing characters in number '" + v + "'");
      return d;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail("expected a number, got '" + v + "'");
    }
  }

  std::uint64_t as_uint(const std::string& v) const {
    try {
      std::size_t used = 0;
      const unsigned long long u = std::stoull(v, &used);
      if (used != v.size()) fail("trailing characters in integer '" + v + "'");
      return u;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail("expected a nonnegative integer, got '" + v + "'");
    }
  }

  bool as_bool(const std::string& v) const {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail("expected true/false, got '" + v + "'");
  }

  std::vector<std::string> as_list(const std::string& v) const {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) fail("expected a comma-separated list, got '" + v + "'");
    return out;
  }
};

}  // namespace

void OptimizerConfig::validate() const {
  if (lr <= 0.0 || lr_decay <= 0.0 || lr_decay > 1.0) {
    throw ConfigError("optimizer: need lr > 0 and lr_decay in (0,1]");
  }
  if (epochs < 1 || decay_every_epochs < 1 || batch_size < 1) {
    throw ConfigError("optimizer: epochs, decay_every_epochs and batch_size must be >= 1");
  }
}

void ExperimentConfig::validate() const {
  generator.validate();
  model.validate();
  optimizer.validate();
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw ConfigError("experiment: train_fraction must lie in (0,1)");
  }
  if (seeds.empty()) throw ConfigError("experiment: seeds must not be empty");
  if (denoiser.warmup_epochs < 0.0) {
    throw ConfigError("denoiser: warmup_epochs must be >= 0");
  }
  if (denoiser.thresholds.audio <= 0.0 || denoiser.thresholds.visual <= 0.0) {
    throw ConfigError("denoiser: thresholds must be > 0");
  }
  for (const std::string& m : benchmark_modes) {
    double rho = 0.0;
    parse_denoise_mode(m, &rho);  // throws on unknown modes
  }
}

DenoiseMode parse_denoise_mode(const std::string& text, double* constant_ratio) {
  if (text == "none") return DenoiseMode::None;
  if (text == "jomold") return DenoiseMode::JoMoLD;
  if (text == "inmold") return DenoiseMode::InMoLD;
  if (text == "audio_only") return DenoiseMode::AudioOnly;
  if (text == "visual_only") return DenoiseMode::VisualOnly;
  if (text.starts_with("constant_ratio(") && text.ends_with(")")) {
    const std::string inner = text.substr(15, text.size() - 16);
    try {
      std::size_t used = 0;
      const double rho = std::stod(inner, &used);
      if (used != inner.size()) throw std::invalid_argument(inner);
      if (rho < 0.0 || rho > 1.0) {
        throw ConfigError("denoiser: constant ratio must lie in [0,1], got " + inner);
      }
      if (constant_ratio) *constant_ratio = rho;
      return DenoiseMode::ConstantRatio;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("denoiser: malformed constant_ratio mode '" + text + "'");
    }
  }
  throw ConfigError(
      "denoiser: unknown mode '" + text +
      "' (expected none, jomold, inmold, audio_only, visual_only or constant_ratio(RHO))");
}

std::string denoise_mode_string(DenoiseMode mode, double constant_ratio) {
  switch (mode) {
    case DenoiseMode::None: return "none";
    case DenoiseMode::JoMoLD: return "jomold";
    case DenoiseMode::InMoLD: return "inmold";
    case DenoiseMode::AudioOnly: return "audio_only";
    case DenoiseMode::VisualOnly: return "visual_only";
    case DenoiseMode::ConstantRatio: {
      std::ostringstream ss;
      ss << "constant_ratio(" << constant_ratio << ")";
      return ss.str();
    }
  }
  throw ConfigError("denoiser: invalid mode enum");
}

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& name) {
  ExperimentConfig cfg;
  Parser p{name};
  std::istringstream in(text);
  std::string raw;
  std::string section = "experiment";

  while (std::getline(in, raw)) {
    ++p.line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "generator" && section != "model" && section != "optimizer" &&
          section != "denoiser" && section != "experiment") {
        p.fail("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) p.fail("empty key or value");

    if (section == "generator") {
      auto& g = cfg.generator;
      if (key == "num_videos") g.num_videos = p.as_uint(value);
      else if (key == "num_segments") g.num_segments = p.as_uint(value);
      else if (key == "feature_dim") g.feature_dim = p.as_uint(value);
      else if (key == "num_categories") g.num_categories = p.as_uint(value);
      else if (key == "p_both") g.p_both = p.as_double(value);
      else if (key == "p_audio_only") g.p_audio_only = p.as_double(value);
      else if (key == "p_visual_only") g.p_visual_only = p.as_double(value);
      else if (key == "noise_spread") g.noise_spread = p.as_double(value);
      else if (key == "min_events_per_video") g.min_events_per_video = p.as_uint(value);
      else if (key == "max_events_per_video") g.max_events_per_video = p.as_uint(value);
      else if (key == "feature_noise_sigma") g.feature_noise_sigma = p.as_double(value);
      else if (key == "seed") g.seed = p.as_uint(value);
      else p.fail("unknown generator key '" + key + "'");
    } else if (section == "model") {
      auto& m = cfg.model;
      if (key == "skip_cross_modal") m.skip_cross_modal = p.as_bool(value);
      else if (key == "segment_threshold") m.segment_threshold = p.as_double(value);
      else if (key == "positive_only_loss") m.positive_only_loss = p.as_bool(value);
      else p.fail("unknown model key '" + key + "'");
    } else if (section == "optimizer") {
      auto& o = cfg.optimizer;
      if (key == "lr") o.lr = p.as_double(value);
      else if (key == "lr_decay") o.lr_decay = p.as_double(value);
      else if (key == "decay_every_epochs") o.decay_every_epochs = static_cast<int>(p.as_uint(value));
      else if (key == "epochs") o.epochs = static_cast<int>(p.as_uint(value));
      else if (key == "batch_size") o.batch_size = p.as_uint(value);
      else p.fail("unknown optimizer key '" + key + "'");
    } else if (section == "denoiser") {
      auto& d = cfg.denoiser;
      if (key == "mode") {
        try {
          d.mode = parse_denoise_mode(value, &d.constant_ratio);
        } catch (const ConfigError& e) {
          p.fail(e.what());
        }
      } else if (key == "constant_ratio") d.constant_ratio = p.as_double(value);
      else if (key == "theta_audio") d.thresholds.audio = p.as_double(value);
      else if (key == "theta_visual") d.thresholds.visual = p.as_double(value);
      else if (key == "warmup_epochs") d.warmup_epochs = p.as_double(value);
      else if (key == "mean_over_positives") d.mean_over_positives = p.as_bool(value);
      else p.fail("unknown denoiser key '" + key + "'");
    } else {  // experiment
      if (key == "train_fraction") cfg.train_fraction = p.as_double(value);
      else if (key == "seeds") {
        cfg.seeds.clear();
        for (const std::string& s : p.as_list(value)) cfg.seeds.push_back(p.as_uint(s));
      } else if (key == "modes") {
        cfg.benchmark_modes = p.as_list(value);
      } else p.fail("unknown experiment key '" + key + "'");
    }
  }
  cfg.model.feature_dim = cfg.generator.feature_dim;
  cfg.model.num_segments = cfg.generator.num_segments;
  cfg.model.num_categories = cfg.generator.num_categories;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), path);
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "[generator]\n"
      << "num_videos = " << cfg.generator.num_videos << "\n"
      << "num_segments = " << cfg.generator.num_segments << "\n"
      << "feature_dim = " << cfg.generator.feature_dim << "\n"
      << "num_categories = " << cfg.generator.num_categories << "\n"
      << "p_both = " << cfg.generator.p_both << "\n"
      << "p_audio_only = " << cfg.generator.p_audio_only << "\n"
      << "p_visual_only = " << cfg.generator.p_visual_only << "\n"
      << "noise_spread = " << cfg.generator.noise_spread << "\n"
      << "min_events_per_video = " << cfg.generator.min_events_per_video << "\n"
      << "max_events_per_video = " << cfg.generator.max_events_per_video << "\n"
      << "feature_noise_sigma = " << cfg.generator.feature_noise_sigma << "\n"
      << "seed = " << cfg.generator.seed << "\n"
      << "[model]\n"
      << "skip_cross_modal = " << (cfg.model.skip_cross_modal ? "true" : "false") << "\n"
      << "segment_threshold = " << cfg.model.segment_threshold << "\n"
      << "positive_only_loss = " << (cfg.model.positive_only_loss ? "true" : "false") << "\n"
      << "[optimizer]\n"
      << "lr = " << cfg.optimizer.lr << "\n"
      << "lr_decay = " << cfg.optimizer.lr_decay << "\n"
      << "decay_every_epochs = " << cfg.optimizer.decay_every_epochs << "\n"
      << "epochs = " << cfg.optimizer.epochs << "\n"
      << "batch_size = " << cfg.optimizer.batch_size << "\n"
      << "[denoiser]\n"
      << "mode = " << denoise_mode_string(cfg.denoiser.mode, cfg.denoiser.constant_ratio) << "\n"
      << "constant_ratio = " << cfg.denoiser.constant_ratio << "\n"
      << "theta_audio = " << cfg.denoiser.thresholds.audio << "\n"
      << "theta_visual = " << cfg.denoiser.thresholds.visual << "\n"
      << "warmup_epochs = " << cfg.denoiser.warmup_epochs << "\n"
      << "mean_over_positives = " << (cfg.denoiser.mean_over_positives ? "true" : "false") << "\n"
      << "[experiment]\n"
      << "train_fraction = " << cfg.train_fraction << "\n";
  out << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    out << (i ? "," : "") << cfg.seeds[i];
  }
  out << "\nmodes = ";
  for (std::size_t i = 0; i < cfg.benchmark_modes.size(); ++i) {
    out << (i ? "," : "") << cfg.benchmark_modes[i];
  }
  out << "\n";
  return out.str();
}

}  // namespace avparse
