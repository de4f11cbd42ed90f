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

#include "avparse/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "avparse/common.hpp"

namespace avparse {
namespace {

void check_denoise_args(const Matrix& la, const Matrix& lv, const Matrix& y,
                        const NoiseRatios& ratios, double warm_factor) {
  require_same_shape(la, lv, "denoise");
  require_same_shape(la, y, "denoise");
  if (ratios.audio.size() != y.cols() || ratios.visual.size() != y.cols()) {
    throw ShapeError("denoise: ratios have " + std::to_string(ratios.audio.size()) +
                     " categories, labels have " + std::to_string(y.cols()));
  }
  if (warm_factor < 0.0 || warm_factor > 1.0) {
    throw ConfigError("denoise: warm_factor must lie in [0,1], got " +
                      std::to_string(warm_factor));
  }
}

std::vector<std::size_t> positive_rows(const Matrix& y, std::size_t c) {
  std::vector<std::size_t> idx;
  for (std::size_t b = 0; b < y.rows(); ++b) {
    if (y(b, c) != 0.0) idx.push_back(b);
  }
  return idx;
}

std::vector<double> gather_column(const Matrix& m, const std::vector<std::size_t>& rows,
                                  std::size_t c) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = m(rows[i], c);
  return out;
}

// Candidate count per Algorithm step: truncation toward zero.
std::size_t candidate_count(double ratio, double warm_factor, std::size_t positives) {
  return static_cast<std::size_t>(warm_factor * ratio *
                                  static_cast<double>(positives));
}

// Shared denoising skeleton. `use_cross_check` toggles the low-loss
// intersection with the other modality; `do_audio`/`do_visual` restrict it
// to a single track.
DenoiseResult denoise_impl(const Matrix& la, const Matrix& lv, const Matrix& y,
                           const NoiseRatios& ratios, double warm_factor,
                           bool use_cross_check, bool do_audio, bool do_visual) {
  check_denoise_args(la, lv, y, ratios, warm_factor);
  DenoiseResult out;
  out.y_audio = y;
  out.y_visual = y;

  auto remove_for = [&](std::size_t c, const std::vector<std::size_t>& positives,
                        const Matrix& own_loss, const Matrix& other_loss,
                        double ratio, Matrix& labels, Modality modality) {
    const std::size_t m = candidate_count(ratio, warm_factor, positives.size());
    if (m == 0) return;
    const std::vector<double> own = gather_column(own_loss, positives, c);
    std::vector<std::size_t> picked = select_indices(own, m, /*descending=*/true);
    if (use_cross_check) {
      const std::vector<double> other = gather_column(other_loss, positives, c);
      const std::vector<std::size_t> low_other =
          select_indices(other, m, /*descending=*/false);
      std::vector<std::size_t> both;
      for (std::size_t i : picked) {
        if (std::find(low_other.begin(), low_other.end(), i) != low_other.end()) {
          both.push_back(i);
        }
      }
      picked = std::move(both);
    }
    for (std::size_t i : picked) {
      const std::size_t row = positives[i];
      labels(row, c) = 0.0;
      out.removed.push_back({row, c, modality});
    }
  };

  for (std::size_t c = 0; c < y.cols(); ++c) {
    const std::vector<std::size_t> positives = positive_rows(y, c);
    if (positives.empty()) continue;
    if (do_audio) {
      remove_for(c, positives, la, lv, ratios.audio[c], out.y_audio, Modality::Audio);
    }
    if (do_visual) {
      remove_for(c, positives, lv, la, ratios.visual[c], out.y_visual, Modality::Visual);
    }
  }
  std::sort(out.removed.begin(), out.removed.end());
  return out;
}

}  // namespace

NoiseRatios NoiseRatios::constant(std::size_t num_categories, double rho) {
  if (rho < 0.0 || rho > 1.0) {
    throw ConfigError("constant noise ratio must lie in [0,1], got " +
                      std::to_string(rho));
  }
  return {std::vector<double>(num_categories, rho),
          std::vector<double>(num_categories, rho)};
}

NoiseRatios estimate_noise_ratios(const Matrix& pred_audio,
                                  const Matrix& pred_visual, const Matrix& y,
                                  const EstimatorThresholds& thresholds,
                                  bool mean_over_positives) {
  require_same_shape(pred_audio, pred_visual, "estimate_noise_ratios");
  require_same_shape(pred_audio, y, "estimate_noise_ratios");
  if (y.rows() == 0) {
    throw ConfigError("estimate_noise_ratios: empty input (N = 0)");
  }
  if (thresholds.audio <= 0.0 || thresholds.visual <= 0.0) {
    throw ConfigError("estimate_noise_ratios: thresholds must be > 0");
  }
  const std::size_t n = y.rows();
  const std::size_t cats = y.cols();
  NoiseRatios out{std::vector<double>(cats, 0.0), std::vector<double>(cats, 0.0)};

  for (std::size_t c = 0; c < cats; ++c) {
    double positives = 0.0;
    for (std::size_t i = 0; i < n; ++i) positives += y(i, c);

    auto ratio_for = [&](const Matrix& pred, double theta) {
      double mean = 0.0;
      double denom = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!mean_over_positives || y(i, c) != 0.0) {
          mean += pred(i, c);
          denom += 1.0;
        }
      }
      if (denom == 0.0) return 0.0;  // no positives under positives-only mean
      mean /= denom;
      if (mean == 0.0) {
        throw NumericError("estimate_noise_ratios: zero mean prediction for category " +
                           std::to_string(c) + ", cannot normalize");
      }
      double flagged = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (y(i, c) != 0.0 && pred(i, c) / mean < theta) flagged += 1.0;
      }
      return flagged / positives;
    };

    if (positives == 0.0) continue;  // ratio 0 by convention
    out.audio[c] = ratio_for(pred_audio, thresholds.audio);
    out.visual[c] = ratio_for(pred_visual, thresholds.visual);
  }
  return out;
}

std::vector<std::size_t> select_indices(const std::vector<double>& losses,
                                        std::size_t k, bool descending) {
  std::vector<std::size_t> idx(losses.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return descending ? losses[a] > losses[b] : losses[a] < losses[b];
  });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

DenoiseResult jomold_step(const Matrix& loss_audio, const Matrix& loss_visual,
                          const Matrix& y, const NoiseRatios& ratios,
                          double warm_factor) {
  return denoise_impl(loss_audio, loss_visual, y, ratios, warm_factor,
                      /*use_cross_check=*/true, true, true);
}

DenoiseResult inmold_step(const Matrix& loss_audio, const Matrix& loss_visual,
                          const Matrix& y, const NoiseRatios& ratios,
                          double warm_factor) {
  return denoise_impl(loss_audio, loss_visual, y, ratios, warm_factor,
                      /*use_cross_check=*/false, true, true);
}

DenoiseResult single_modality_step(const Matrix& loss_audio,
                                   const Matrix& loss_visual, const Matrix& y,
                                   const NoiseRatios& ratios,
                                   double warm_factor, Modality modality) {
  return denoise_impl(loss_audio, loss_visual, y, ratios, warm_factor,
                      /*use_cross_check=*/true, modality == Modality::Audio,
                      modality == Modality::Visual);
}

double warmup_factor(double progress_epochs, double warmup_epochs) {
  if (progress_epochs < 0.0 || warmup_epochs < 0.0) {
    throw ConfigError("warmup_factor: negative argument");
  }
  if (warmup_epochs == 0.0) return 1.0;
  return std::min(1.0, progress_epochs / warmup_epochs);
}

void save_noise_ratios_csv(const std::string& path, const NoiseRatios& ratios) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataFormatError("noise ratios: cannot open for writing: " + path);
  out << "category,r_audio,r_visual\n";
  char line[96];
  for (std::size_t c = 0; c < ratios.categories(); ++c) {
    std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f\n", c, ratios.audio[c],
                  ratios.visual[c]);
    out << line;
  }
}

NoiseRatios load_noise_ratios_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("noise ratios: cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "category,r_audio,r_visual") {
    throw DataFormatError("noise ratios: bad CSV header in " + path);
  }
  NoiseRatios out;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t cat;
    char comma1, comma2;
    double ra, rv;
    if (!(ss >> cat >> comma1 >> ra >> comma2 >> rv) || comma1 != ',' || comma2 != ',') {
      throw DataFormatError("noise ratios: malformed row '" + line + "' in " + path);
    }
    if (cat != expected++) {
      throw DataFormatError("noise ratios: categories out of order in " + path);
    }
    out.audio.push_back(ra);
    out.visual.push_back(rv);
  }
  if (out.audio.empty()) {
    throw DataFormatError("noise ratios: no rows in " + path);
  }
  return out;
}

}  // namespace avparse
