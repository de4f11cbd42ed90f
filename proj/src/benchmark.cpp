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

#include "avparse/benchmark.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "avparse/common.hpp"
#include "avparse/denoiser.hpp"
#include "avparse/kernels.hpp"
#include "avparse/report.hpp"

namespace avparse {
namespace {

constexpr const char* kMetricColumns[] = {
    "segment_audio",          "segment_visual",
    "segment_audio_visual",   "segment_type_at_av",
    "segment_event_at_av",    "event_audio",
    "event_visual",           "event_audio_visual",
    "event_type_at_av",       "event_event_at_av",
    "denoise_precision_audio", "denoise_recall_audio",
    "denoise_f1_audio",       "denoise_precision_visual",
    "denoise_recall_visual",  "denoise_f1_visual",
};

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::string cell_dir_name(const BenchmarkCell& cell) {
  std::string mode = cell.mode;
  for (char& ch : mode) {
    if (ch == '(' || ch == ')' || ch == '.') ch = '_';
  }
  return mode + "_seed" + std::to_string(cell.seed);
}

// One seed's worth of work: split, shared estimator, then every mode.
void run_seed(const ExperimentConfig& cfg, const Dataset& dataset,
              std::uint64_t seed, std::vector<BenchmarkCell*>& cells,
              NoiseRatios& estimated, bool& have_estimated) {
  auto [train, eval] = split_dataset(dataset, cfg.train_fraction, seed);

  bool needs_estimator = false;
  for (BenchmarkCell* cell : cells) {
    double rho = 0.0;
    DenoiserConfig dc = cfg.denoiser;
    dc.mode = parse_denoise_mode(cell->mode, &rho);
    if (dc.needs_estimated_ratios()) needs_estimator = true;
  }
  if (needs_estimator) {
    EstimatorOutcome est =
        run_estimator(train, cfg.model, cfg.optimizer,
                      cfg.denoiser.thresholds, cfg.denoiser.mean_over_positives,
                      seed);
    estimated = std::move(est.ratios);
    have_estimated = true;
  }

  for (BenchmarkCell* cell : cells) {
    const double start = now_seconds();
    try {
      DenoiserConfig dc = cfg.denoiser;
      dc.mode = parse_denoise_mode(cell->mode, &dc.constant_ratio);
      if (dc.mode != DenoiseMode::ConstantRatio) {
        dc.constant_ratio = cfg.denoiser.constant_ratio;
      }
      const NoiseRatios* ratios =
          dc.needs_estimated_ratios() ? &estimated : nullptr;
      TrainOutcome outcome =
          train_model(train, cfg.model, cfg.optimizer, dc, ratios, seed);
      cell->report = evaluate_model(outcome.params, cfg.model, eval);
      cell->report.denoise =
          denoise_prf(outcome.removed_final_epoch, train.noise);
      cell->report.has_denoise = true;
      cell->epoch_losses = std::move(outcome.epoch_losses);
      cell->ok = true;
    } catch (const std::exception& e) {
      cell->ok = false;
      cell->error = e.what();
    }
    cell->wall_seconds = now_seconds() - start;
  }
}

void write_comparison_csv(const std::string& path,
                          const std::vector<BenchmarkCell>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError("cannot open for writing: " + path);
  out << benchmark_csv_header() << "\n";
  for (const BenchmarkCell& cell : cells) {
    out << cell.mode << "," << cell.seed << ","
        << (cell.ok ? "ok" : "failed") << "," << fmt6(cell.wall_seconds);
    if (cell.ok) {
      for (const auto& [name, value] : cell.report.rows()) {
        (void)name;
        out << "," << fmt6(value);
      }
    } else {
      for (std::size_t i = 0; i < std::size(kMetricColumns); ++i) out << ",";
    }
    out << "\n";
  }
}

void write_summary_csv(const std::string& path,
                       const std::vector<std::string>& modes,
                       const std::vector<BenchmarkCell>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError("cannot open for writing: " + path);
  out << "mode,metric,mean,std,seeds\n";
  for (const std::string& mode : modes) {
    std::vector<const BenchmarkCell*> ok_cells;
    for (const BenchmarkCell& cell : cells) {
      if (cell.mode == mode && cell.ok) ok_cells.push_back(&cell);
    }
    if (ok_cells.empty()) continue;
    const auto first_rows = ok_cells.front()->report.rows();
    for (std::size_t m = 0; m < first_rows.size(); ++m) {
      double sum = 0.0, sum_sq = 0.0;
      for (const BenchmarkCell* cell : ok_cells) {
        const double v = cell->report.rows()[m].second;
        sum += v;
        sum_sq += v * v;
      }
      const double n = static_cast<double>(ok_cells.size());
      const double mean = sum / n;
      const double var = std::max(0.0, sum_sq / n - mean * mean);
      out << mode << "," << first_rows[m].first << "," << fmt6(mean) << ","
          << fmt6(std::sqrt(var)) << "," << ok_cells.size() << "\n";
    }
  }
}

void write_plots(const std::string& out_dir,
                 const std::vector<std::string>& modes,
                 const std::vector<BenchmarkCell>& cells) {
  std::vector<std::pair<std::string, double>> bars;
  std::vector<std::pair<std::string, std::vector<double>>> curves;
  for (const std::string& mode : modes) {
    double sum = 0.0;
    std::size_t n = 0;
    const std::vector<double>* first_losses = nullptr;
    for (const BenchmarkCell& cell : cells) {
      if (cell.mode != mode || !cell.ok) continue;
      sum += cell.report.seg_type_at_av;
      ++n;
      if (first_losses == nullptr) first_losses = &cell.epoch_losses;
    }
    if (n == 0) continue;
    bars.push_back({mode, sum / static_cast<double>(n)});
    if (first_losses != nullptr) curves.push_back({mode, *first_losses});
  }
  save_bar_chart_svg(out_dir + "/type_at_av_by_mode.svg",
                     "segment Type@AV by mode (mean over seeds)", bars);
  save_loss_curves_svg(out_dir + "/loss_curves.svg",
                       "training loss by mode (first seed)", curves);
}

}  // namespace

bool BenchmarkResult::all_ok() const {
  for (const BenchmarkCell& cell : cells) {
    if (!cell.ok) return false;
  }
  return true;
}

std::string benchmark_csv_header() {
  std::string header = "mode,seed,status,wall_seconds";
  for (const char* col : kMetricColumns) {
    header += ",";
    header += col;
  }
  return header;
}

std::size_t resolve_thread_cap(std::size_t requested) {
  std::size_t threads = requested;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  if (const char* env = std::getenv("JOMOLD_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || cap == 0) {
      throw ConfigError("JOMOLD_THREADS must be a positive integer");
    }
    threads = std::min<std::size_t>(threads, cap);
  }
  return threads;
}

std::uint64_t file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("cannot open for reading: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

BenchmarkResult run_benchmark(const ExperimentConfig& cfg,
                              const Dataset& dataset,
                              const std::string& out_dir,
                              std::size_t threads) {
  cfg.validate();
  if (cfg.benchmark_modes.empty()) {
    throw ConfigError("run_benchmark: empty mode list");
  }
  for (const std::string& mode : cfg.benchmark_modes) {
    double rho = 0.0;
    parse_denoise_mode(mode, &rho);  // rejects unknown modes up front
  }

  BenchmarkResult result;
  for (std::uint64_t seed : cfg.seeds) {
    for (const std::string& mode : cfg.benchmark_modes) {
      BenchmarkCell cell;
      cell.mode = mode;
      cell.seed = seed;
      result.cells.push_back(std::move(cell));
    }
  }

  const std::size_t num_seeds = cfg.seeds.size();
  std::vector<NoiseRatios> estimated(num_seeds);
  std::vector<char> have_estimated(num_seeds, 0);
  std::atomic<std::size_t> next_seed{0};
  const std::size_t workers =
      std::min(std::max<std::size_t>(1, threads), num_seeds);

  auto work = [&]() {
    for (;;) {
      const std::size_t si = next_seed.fetch_add(1);
      if (si >= num_seeds) return;
      std::vector<BenchmarkCell*> cells;
      for (BenchmarkCell& cell : result.cells) {
        if (cell.seed == cfg.seeds[si]) cells.push_back(&cell);
      }
      bool have = false;
      run_seed(cfg, dataset, cfg.seeds[si], cells, estimated[si], have);
      have_estimated[si] = have ? 1 : 0;
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  namespace fs = std::filesystem;
  write_comparison_csv(out_dir + "/comparison.csv", result.cells);
  write_summary_csv(out_dir + "/summary.csv", cfg.benchmark_modes,
                    result.cells);
  write_plots(out_dir, cfg.benchmark_modes, result.cells);
  for (std::size_t si = 0; si < num_seeds; ++si) {
    if (have_estimated[si]) {
      save_noise_ratios_csv(out_dir + "/ratios_seed" +
                                std::to_string(cfg.seeds[si]) + ".csv",
                            estimated[si]);
    }
  }
  const std::string echo = config_echo(cfg);
  std::ofstream failures(out_dir + "/failures.txt", std::ios::binary);
  for (const BenchmarkCell& cell : result.cells) {
    const std::string dir = out_dir + "/cells/" + cell_dir_name(cell);
    fs::create_directories(dir);
    RunManifest manifest;
    manifest.config_echo = echo;
    manifest.kernel_name = kern::active_kernels().name;
    manifest.seed = cell.seed;
    manifest.mode = cell.mode;
    manifest.epoch_losses = cell.epoch_losses;
    manifest.wall_seconds = cell.wall_seconds;
    save_manifest(dir + "/manifest.txt", manifest);
    if (cell.ok) {
      save_report_csv(dir + "/report.csv", cell.report);
    } else {
      failures << cell.mode << " seed " << cell.seed << ": " << cell.error
               << "\n";
    }
  }
  return result;
}

}  // namespace avparse
