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

#include <string>
#include <vector>

#include "avparse/config.hpp"
#include "avparse/metrics.hpp"
#include "avparse/trainer.hpp"

namespace avparse {

struct BenchmarkCell {
  std::string mode;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  ParsingReport report;
  std::vector<double> epoch_losses;
  double wall_seconds = 0.0;
};

struct BenchmarkResult {
  std::vector<BenchmarkCell> cells;

  bool all_ok() const;
};

// Exact column schema of comparison.csv.
std::string benchmark_csv_header();

// Runs the mode x seed grid. Cells sharing a seed also share one estimator
// training; seeds are distributed over a worker pool while each cell stays
// single-threaded. A failed cell is recorded and the grid continues.
//
// Writes comparison.csv, summary.csv, ratios_seed<seed>.csv, per-cell run
// directories with manifest and report, and SVG plots under out_dir.
// out_dir must already exist. Input datasets are never mutated.
BenchmarkResult run_benchmark(const ExperimentConfig& cfg,
                              const Dataset& dataset,
                              const std::string& out_dir, std::size_t threads);

// Effective worker count: `requested` (0 means hardware concurrency)
// capped by the JOMOLD_THREADS environment variable when set.
std::size_t resolve_thread_cap(std::size_t requested);

// FNV-1a over file bytes; used to verify the read-only dataset contract.
std::uint64_t file_checksum(const std::string& path);

}  // namespace avparse
