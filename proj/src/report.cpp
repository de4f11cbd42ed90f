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

#include "avparse/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "avparse/common.hpp"
#include "avparse/rng.hpp"

namespace avparse {
namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError("cannot open for writing: " + path);
  out << text;
  if (!out) throw DataFormatError("write failed: " + path);
}

std::string svg_header(int width, int height, const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
    << height << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << width / 2
    << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">"
    << title << "</text>\n";
  return s.str();
}

const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                          "#66ccee", "#aa3377", "#bbbbbb", "#222222"};

}  // namespace

std::string report_csv(const ParsingReport& report) {
  std::ostringstream out;
  out << "metric,value\n";
  for (const auto& [name, value] : report.rows()) {
    out << name << "," << fmt6(value) << "\n";
  }
  return out.str();
}

void save_report_csv(const std::string& path, const ParsingReport& report) {
  write_file(path, report_csv(report));
}

std::string report_table(const ParsingReport& report) {
  const auto rows = report.rows();
  std::size_t width = 0;
  for (const auto& [name, _] : rows) width = std::max(width, name.size());
  std::ostringstream out;
  for (const auto& [name, value] : rows) {
    out << name << std::string(width - name.size() + 2, ' ') << fmt6(value)
        << "\n";
  }
  return out.str();
}

std::string manifest_text(const RunManifest& manifest) {
  std::ostringstream out;
  out << "version = " << kVersion << "\n";
  out << "rng_algorithm = " << Rng::kAlgorithmId << "\n";
  out << "kernels = " << manifest.kernel_name << "\n";
  out << "seed = " << manifest.seed << "\n";
  out << "mode = " << manifest.mode << "\n";
  out << "epoch_losses =";
  for (double l : manifest.epoch_losses) out << " " << fmt6(l);
  out << "\n";
  out << "--- config ---\n" << manifest.config_echo;
  if (!manifest.config_echo.empty() && manifest.config_echo.back() != '\n') {
    out << "\n";
  }
  out << "--- timing ---\n";
  out << "wall_seconds = " << fmt6(manifest.wall_seconds) << "\n";
  return out.str();
}

void save_manifest(const std::string& path, const RunManifest& manifest) {
  write_file(path, manifest_text(manifest));
}

void save_bar_chart_svg(
    const std::string& path, const std::string& title,
    const std::vector<std::pair<std::string, double>>& bars) {
  const int width = 640, height = 400;
  const int left = 60, right = 20, top = 40, bottom = 70;
  const int plot_w = width - left - right, plot_h = height - top - bottom;
  double max_v = 0.0;
  for (const auto& [_, v] : bars) max_v = std::max(max_v, v);
  if (max_v <= 0.0) max_v = 1.0;

  std::ostringstream s;
  s << svg_header(width, height, title);
  s << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
    << left + plot_w << "\" y2=\"" << top + plot_h
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
    << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int g = 0; g <= 4; ++g) {
    const double v = max_v * g / 4.0;
    const double y = top + plot_h - plot_h * g / 4.0;
    s << "<text x=\"" << left - 6 << "\" y=\"" << y + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt6(v).substr(0, 5) << "</text>\n";
  }
  const std::size_t n = bars.size();
  if (n > 0) {
    const double slot = static_cast<double>(plot_w) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = plot_h * bars[i].second / max_v;
      const double x = left + slot * static_cast<double>(i) + slot * 0.15;
      s << "<rect x=\"" << x << "\" y=\"" << top + plot_h - h << "\" width=\""
        << slot * 0.7 << "\" height=\"" << h << "\" fill=\""
        << kPalette[i % 8] << "\"/>\n";
      s << "<text x=\"" << x + slot * 0.35 << "\" y=\"" << top + plot_h + 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << bars[i].first << "</text>\n";
      s << "<text x=\"" << x + slot * 0.35 << "\" y=\""
        << top + plot_h - h - 4
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << fmt6(bars[i].second).substr(0, 5) << "</text>\n";
    }
  }
  s << "</svg>\n";
  write_file(path, s.str());
}

void save_loss_curves_svg(
    const std::string& path, const std::string& title,
    const std::vector<std::pair<std::string, std::vector<double>>>& curves) {
  const int width = 640, height = 400;
  const int left = 60, right = 140, top = 40, bottom = 40;
  const int plot_w = width - left - right, plot_h = height - top - bottom;
  double max_v = 0.0;
  std::size_t max_len = 1;
  for (const auto& [_, ys] : curves) {
    max_len = std::max(max_len, ys.size());
    for (double y : ys) max_v = std::max(max_v, y);
  }
  if (max_v <= 0.0) max_v = 1.0;

  std::ostringstream s;
  s << svg_header(width, height, title);
  s << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
    << left + plot_w << "\" y2=\"" << top + plot_h
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
    << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int g = 0; g <= 4; ++g) {
    const double v = max_v * g / 4.0;
    const double y = top + plot_h - plot_h * g / 4.0;
    s << "<text x=\"" << left - 6 << "\" y=\"" << y + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << fmt6(v).substr(0, 5) << "</text>\n";
  }
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& ys = curves[ci].second;
    if (ys.empty()) continue;
    std::ostringstream pts;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double denom = static_cast<double>(std::max<std::size_t>(max_len - 1, 1));
      const double x = left + plot_w * static_cast<double>(i) / denom;
      const double y = top + plot_h - plot_h * ys[i] / max_v;
      pts << (i ? " " : "") << x << "," << y;
    }
    s << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
      << kPalette[ci % 8] << "\" stroke-width=\"1.5\"/>\n";
    s << "<text x=\"" << left + plot_w + 8 << "\" y=\""
      << top + 14 + 16 * static_cast<int>(ci)
      << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
      << kPalette[ci % 8] << "\">" << curves[ci].first << "</text>\n";
  }
  s << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 8
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"11\">epoch</text>\n";
  s << "</svg>\n";
  write_file(path, s.str());
}

}  // namespace avparse
