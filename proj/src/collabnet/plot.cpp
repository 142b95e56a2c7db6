// Copyright 2026 The collabnet Authors
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

#include "collabnet/plot.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "collabnet/common.hpp"

namespace collabnet::plot {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string render_svg(const LineChart& chart, const std::string& generated_at) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : chart.series)
    for (double v : s.y)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-12) {
    const double pad = std::max(1e-6, std::abs(hi) * 0.1);
    lo -= pad;
    hi += pad;
  }
  const std::size_t n = chart.x_labels.size();
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](std::size_t i) { return kLeft + (n <= 1 ? plot_w / 2 : plot_w * static_cast<double>(i) / static_cast<double>(n - 1)); };
  auto py = [&](double v) { return kTop + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<!-- generated " << generated_at << " -->\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(chart.title)
    << "</text>\n";
  o << "<text transform=\"translate(16," << kTop + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(chart.y_label) << "</text>\n";
  o << "<g stroke=\"#444\" fill=\"none\"><line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
    << "\" y2=\"" << kTop + plot_h << "\"/><line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
    << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\"/></g>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">" << tick(v)
      << "</text>\n";
  }
  const std::size_t stride = std::max<std::size_t>(1, (n + 11) / 12);
  for (std::size_t i = 0; i < n; i += stride)
    o << "<text x=\"" << num(px(i)) << "\" y=\"" << kTop + plot_h + 16 << "\" text-anchor=\"middle\">"
      << escape(chart.x_labels[i]) << "</text>\n";

  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const auto& series = chart.series[s];
    const char* colour = kColours[s % std::size(kColours)];
    o << "<g data-series=\"" << escape(series.name) << "\">\n";
    std::string path;
    bool pen = false;
    for (std::size_t i = 0; i < series.y.size() && i < n; ++i) {
      if (!std::isfinite(series.y[i])) {
        pen = false;
        continue;
      }
      path += (pen ? " L" : " M") + num(px(i)) + ' ' + num(py(series.y[i]));
      pen = true;
    }
    if (!path.empty()) o << "<path d=\"" << path.substr(1) << "\" stroke=\"" << colour << "\" fill=\"none\" stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < series.y.size() && i < n; ++i)
      if (std::isfinite(series.y[i]))
        o << "<circle cx=\"" << num(px(i)) << "\" cy=\"" << num(py(series.y[i])) << "\" r=\"2.5\" fill=\"" << colour
          << "\" data-value=\"" << format_real(series.y[i]) << "\"/>\n";
    o << "</g>\n";
    if (chart.series.size() > 1)
      o << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 14 + 14 * s << "\" fill=\"" << colour << "\">"
        << escape(series.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const LineChart& chart, const std::filesystem::path& path) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << render_svg(chart, stamp);
}

}  // namespace collabnet::plot
