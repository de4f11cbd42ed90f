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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "avparse/benchmark.hpp"
#include "avparse/checkpoint.hpp"
#include "avparse/common.hpp"
#include "avparse/config.hpp"
#include "avparse/dataset_io.hpp"
#include "avparse/denoiser.hpp"
#include "avparse/kernels.hpp"
#include "avparse/report.hpp"
#include "avparse/trainer.hpp"

namespace {

using namespace avparse;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDataFormat = 3;
constexpr int kExitNumeric = 4;

struct CommonOpts {
  std::string config_path;
  std::string kernels;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

ExperimentConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  return load_experiment_config(path);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir);
}

void apply_kernels(const std::string& name) {
  if (!name.empty()) kern::force_kernels(name);
}

void save_removed_csv(const std::string& path,
                      const std::vector<RemovedLabel>& removed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError("cannot open for writing: " + path);
  out << "video,category,modality\n";
  for (const RemovedLabel& r : removed) {
    out << r.batch_index << "," << r.category << ","
        << (r.modality == Modality::Audio ? "audio" : "visual") << "\n";
  }
}

std::vector<RemovedLabel> load_removed_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "video,category,modality") {
    throw DataFormatError(path + ": bad removed-label header");
  }
  std::vector<RemovedLabel> removed;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw DataFormatError(path + ": bad removed-label row: " + line);
    }
    RemovedLabel r;
    try {
      r.batch_index = std::stoull(line.substr(0, c1));
      r.category = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
    } catch (const std::exception&) {
      throw DataFormatError(path + ": bad removed-label row: " + line);
    }
    const std::string mod = line.substr(c2 + 1);
    if (mod == "audio") r.modality = Modality::Audio;
    else if (mod == "visual") r.modality = Modality::Visual;
    else throw DataFormatError(path + ": unknown modality: " + mod);
    removed.push_back(r);
  }
  return removed;
}

int cmd_generate(const CommonOpts& common, const std::string& out_path,
                 const std::string& train_out, const std::string& eval_out) {
  ExperimentConfig cfg = load_config_or_default(common.config_path);
  if (common.seed_set) cfg.generator.seed = common.seed;
  cfg.validate();
  const Dataset dataset = generate_dataset(cfg.generator);
  const std::string echo = config_echo(cfg);
  save_dataset(out_path, dataset, echo);
  std::cout << "wrote " << out_path << " (" << dataset.size() << " videos)\n";
  if (!train_out.empty() || !eval_out.empty()) {
    if (train_out.empty() || eval_out.empty()) {
      throw ConfigError("--train-out and --eval-out must be given together");
    }
    const auto [train, eval] =
        split_dataset(dataset, cfg.train_fraction, cfg.generator.seed);
    save_dataset(train_out, train, echo);
    save_dataset(eval_out, eval, echo);
    std::cout << "wrote " << train_out << " (" << train.size()
              << " videos), " << eval_out << " (" << eval.size()
              << " videos)\n";
  }
  const NoiseRatios true_ratios = dataset.true_noise_ratios();
  double mean_a = 0.0, mean_v = 0.0;
  for (std::size_t c = 0; c < true_ratios.categories(); ++c) {
    mean_a += true_ratios.audio[c];
    mean_v += true_ratios.visual[c];
  }
  const double nc = static_cast<double>(true_ratios.categories());
  std::printf("true noise ratios: audio mean %.4f, visual mean %.4f\n",
              mean_a / nc, mean_v / nc);
  return kExitOk;
}

int cmd_estimate(const CommonOpts& common, const std::string& dataset_path,
                 const std::string& out_dir) {
  ExperimentConfig cfg = load_config_or_default(common.config_path);
  cfg.validate();
  ensure_out_dir(out_dir);
  const Dataset dataset = load_dataset(dataset_path);
  cfg.model.feature_dim = dataset.feature_dim;
  cfg.model.num_segments = dataset.num_segments;
  cfg.model.num_categories = dataset.num_categories;
  const std::uint64_t seed = common.seed_set ? common.seed : cfg.seeds.at(0);

  EstimatorOutcome est =
      run_estimator(dataset, cfg.model, cfg.optimizer,
                    cfg.denoiser.thresholds, cfg.denoiser.mean_over_positives,
                    seed);
  save_noise_ratios_csv(out_dir + "/ratios.csv", est.ratios);

  RunManifest manifest;
  manifest.config_echo = config_echo(cfg);
  manifest.kernel_name = kern::active_kernels().name;
  manifest.seed = seed;
  manifest.mode = "estimator";
  manifest.epoch_losses = est.training.epoch_losses;
  save_manifest(out_dir + "/manifest.txt", manifest);

  const NoiseRatios true_ratios = dataset.true_noise_ratios();
  std::ofstream cmp(out_dir + "/estimated_vs_true.csv", std::ios::binary);
  cmp << "category,est_audio,true_audio,est_visual,true_visual\n";
  double mae = 0.0;
  for (std::size_t c = 0; c < est.ratios.categories(); ++c) {
    char row[160];
    std::snprintf(row, sizeof(row), "%zu,%.6f,%.6f,%.6f,%.6f\n", c,
                  est.ratios.audio[c], true_ratios.audio[c],
                  est.ratios.visual[c], true_ratios.visual[c]);
    cmp << row;
    mae += std::abs(est.ratios.audio[c] - true_ratios.audio[c]) +
           std::abs(est.ratios.visual[c] - true_ratios.visual[c]);
  }
  mae /= 2.0 * static_cast<double>(est.ratios.categories());
  std::printf("wrote %s/ratios.csv (MAE vs true: %.4f)\n", out_dir.c_str(),
              mae);
  return kExitOk;
}

int cmd_train(const CommonOpts& common, const std::string& dataset_path,
              const std::string& ratios_path, const std::string& out_dir,
              const std::string& mode_override) {
  ExperimentConfig cfg = load_config_or_default(common.config_path);
  if (!mode_override.empty()) {
    cfg.denoiser.mode =
        parse_denoise_mode(mode_override, &cfg.denoiser.constant_ratio);
  }
  cfg.validate();
  ensure_out_dir(out_dir);
  const Dataset dataset = load_dataset(dataset_path);
  cfg.model.feature_dim = dataset.feature_dim;
  cfg.model.num_segments = dataset.num_segments;
  cfg.model.num_categories = dataset.num_categories;
  const std::uint64_t seed = common.seed_set ? common.seed : cfg.seeds.at(0);

  NoiseRatios ratios;
  const NoiseRatios* ratios_ptr = nullptr;
  if (cfg.denoiser.needs_estimated_ratios()) {
    if (ratios_path.empty()) {
      throw ConfigError("mode " +
                        denoise_mode_string(cfg.denoiser.mode,
                                            cfg.denoiser.constant_ratio) +
                        " needs --ratios");
    }
    ratios = load_noise_ratios_csv(ratios_path);
    ratios_ptr = &ratios;
  }

  const auto start = std::chrono::steady_clock::now();
  TrainOutcome outcome = train_model(dataset, cfg.model, cfg.optimizer,
                                     cfg.denoiser, ratios_ptr, seed);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  save_checkpoint(out_dir + "/checkpoint.bin", cfg.model, outcome.params);
  save_removed_csv(out_dir + "/removed_labels.csv",
                   outcome.removed_final_epoch);
  RunManifest manifest;
  manifest.config_echo = config_echo(cfg);
  manifest.kernel_name = kern::active_kernels().name;
  manifest.seed = seed;
  manifest.mode =
      denoise_mode_string(cfg.denoiser.mode, cfg.denoiser.constant_ratio);
  manifest.epoch_losses = outcome.epoch_losses;
  manifest.wall_seconds = wall;
  save_manifest(out_dir + "/manifest.txt", manifest);
  std::printf("trained %d epochs, final loss %.6f, wall %.1fs\n",
              cfg.optimizer.epochs, outcome.epoch_losses.back(), wall);
  return kExitOk;
}

int cmd_evaluate(const std::string& dataset_path,
                 const std::string& checkpoint_path,
                 const std::string& removed_path, const std::string& out_dir) {
  const Dataset dataset = load_dataset(dataset_path);
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  if (ckpt.config.feature_dim != dataset.feature_dim ||
      ckpt.config.num_segments != dataset.num_segments ||
      ckpt.config.num_categories != dataset.num_categories) {
    throw DataFormatError(
        "checkpoint and dataset dimensions differ: checkpoint (D=" +
        std::to_string(ckpt.config.feature_dim) +
        ", T=" + std::to_string(ckpt.config.num_segments) +
        ", C=" + std::to_string(ckpt.config.num_categories) + ") vs dataset (D=" +
        std::to_string(dataset.feature_dim) +
        ", T=" + std::to_string(dataset.num_segments) +
        ", C=" + std::to_string(dataset.num_categories) + ")");
  }
  ParsingReport report = evaluate_model(ckpt.params, ckpt.config, dataset);
  if (!removed_path.empty()) {
    report.denoise =
        denoise_prf(load_removed_csv(removed_path), dataset.noise);
    report.has_denoise = true;
  }
  std::cout << report_table(report);
  if (!out_dir.empty()) {
    ensure_out_dir(out_dir);
    save_report_csv(out_dir + "/report.csv", report);
    std::cout << "wrote " << out_dir << "/report.csv\n";
  }
  return kExitOk;
}

int cmd_benchmark(const CommonOpts& common, const std::string& dataset_path,
                  const std::string& out_dir, std::size_t threads) {
  ExperimentConfig cfg = load_config_or_default(common.config_path);
  cfg.validate();
  ensure_out_dir(out_dir);

  Dataset dataset;
  std::uint64_t checksum_before = 0;
  if (dataset_path.empty()) {
    dataset = generate_dataset(cfg.generator);
  } else {
    checksum_before = file_checksum(dataset_path);
    dataset = load_dataset(dataset_path);
  }
  cfg.model.feature_dim = dataset.feature_dim;
  cfg.model.num_segments = dataset.num_segments;
  cfg.model.num_categories = dataset.num_categories;

  const std::size_t workers = resolve_thread_cap(threads);
  const BenchmarkResult result = run_benchmark(cfg, dataset, out_dir, workers);

  if (!dataset_path.empty() &&
      file_checksum(dataset_path) != checksum_before) {
    throw DataFormatError("input dataset file changed during the benchmark: " +
                          dataset_path);
  }
  std::size_t failed = 0;
  for (const BenchmarkCell& cell : result.cells) {
    if (!cell.ok) ++failed;
  }
  std::printf("benchmark: %zu cells, %zu failed; results in %s\n",
              result.cells.size(), failed, out_dir.c_str());
  return result.all_ok() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - weakly-supervised audio-visual parsing with joint-modal "
               "label denoising"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--config", common.config_path, "experiment config file")
      ->expected(1);
  app.add_option("--kernels", common.kernels,
                 "force a kernel variant (scalar, avx2, neon)");
  auto* seed_opt = app.add_option("--seed", common.seed, "seed override");

  std::string dataset_path, ratios_path, checkpoint_path, removed_path;
  std::string out_path, out_dir, train_out, eval_out, mode_override;
  std::size_t threads = 0;

  auto* gen = app.add_subcommand("generate", "generate a synthetic dataset");
  gen->add_option("--out", out_path, "output dataset path")->required();
  gen->add_option("--train-out", train_out, "training split output path");
  gen->add_option("--eval-out", eval_out, "evaluation split output path");

  auto* est = app.add_subcommand("estimate", "estimate noise ratios");
  est->add_option("--dataset", dataset_path, "training dataset")->required();
  est->add_option("--out-dir", out_dir, "output directory")->required();

  auto* tr = app.add_subcommand("train", "train a parsing model");
  tr->add_option("--dataset", dataset_path, "training dataset")->required();
  tr->add_option("--ratios", ratios_path, "noise ratio CSV");
  tr->add_option("--out-dir", out_dir, "output directory")->required();
  tr->add_option("--mode", mode_override, "denoise mode override");

  auto* ev = app.add_subcommand("evaluate", "evaluate a checkpoint");
  ev->add_option("--dataset", dataset_path, "evaluation dataset")->required();
  ev->add_option("--checkpoint", checkpoint_path, "model checkpoint")
      ->required();
  ev->add_option("--removed", removed_path,
                 "removed-label CSV for denoise metrics");
  ev->add_option("--out-dir", out_dir, "output directory");

  auto* bm = app.add_subcommand("benchmark", "run the mode x seed grid");
  bm->add_option("--dataset", dataset_path,
                 "dataset file (generated from config when absent)");
  bm->add_option("--out-dir", out_dir, "output directory")->required();
  bm->add_option("--threads", threads, "worker pool size (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    common.seed_set = seed_opt->count() > 0;
    apply_kernels(common.kernels);
    if (gen->parsed()) return cmd_generate(common, out_path, train_out, eval_out);
    if (est->parsed()) return cmd_estimate(common, dataset_path, out_dir);
    if (tr->parsed()) {
      return cmd_train(common, dataset_path, ratios_path, out_dir,
                       mode_override);
    }
    if (ev->parsed()) {
      return cmd_evaluate(dataset_path, checkpoint_path, removed_path,
                          out_dir);
    }
    if (bm->parsed()) return cmd_benchmark(common, dataset_path, out_dir, threads);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataFormatError& e) {
    std::cerr << "data format error: " << e.what() << "\n";
    return kExitDataFormat;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kExitDataFormat;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}
