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

// Standalone SVG line charts with the plotted data inline.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace collabnet::plot {

struct Series {
  std::string name;
  std::vector<double> y;  // NaN leaves a gap
};

struct LineChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> x_labels;  // one per point
  std::vector<Series> series;
};

/// Renders markers and connecting lines. The only non-deterministic content is
/// the generation timestamp in the leading comment.
std::string render_svg(const LineChart& chart, const std::string& generated_at);
void write_svg(const LineChart& chart, const std::filesystem::path& path);

}  // namespace collabnet::plot
