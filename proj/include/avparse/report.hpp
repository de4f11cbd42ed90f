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
#include <utility>
#include <vector>

#include "avparse/metrics.hpp"

namespace avparse {

// `metric,value` rows with a header, 6 decimal places.
std::string report_csv(const ParsingReport& report);
void save_report_csv(const std::string& path, const ParsingReport& report);

// Aligned plain-text table for terminals.
std::string report_table(const ParsingReport& report);

// Everything needed to reproduce and compare a run. The wall-clock line is
// written last so manifests from identical runs differ only in that line.
struct RunManifest {
  std::string config_echo;
  std::string kernel_name;
  std::uint64_t seed = 0;
  std::string mode;
  std::vector<double> epoch_losses;
  double wall_seconds = 0.0;
};

std::string manifest_text(const RunManifest& manifest);
void save_manifest(const std::string& path, const RunManifest& manifest);

// Minimal standalone SVG writers, no external tooling needed to view.
void save_bar_chart_svg(const std::string& path, const std::string& title,
                        const std::vector<std::pair<std::string, double>>& bars);
void save_loss_curves_svg(
    const std::string& path, const std::string& title,
    const std::vector<std::pair<std::string, std::vector<double>>>& curves);

}  // namespace avparse
