/******************************************************************************
 * Copyright 2026 The psmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

/**
 * @file svg_plot.hpp
 * @brief Static SVG line plots.
 */

#pragma once

#include <string>
#include <vector>

namespace psmrac::cli {

struct Series {
  std::string label;
  std::vector<double> y;
  bool dashed = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<Series> series;
  bool log_y = false;
};

/// Writes a standalone SVG file; series are thinned to at most max_points.
void write_svg(const std::string& path, const LinePlot& plot, std::size_t max_points = 2000);

}  // namespace psmrac::cli
