// core/include/spinlab/svg-plot.h

// Copyright 2026  The spinlab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINLAB_SVG_PLOT_H_
#define SPINLAB_SVG_PLOT_H_

#include <string>
#include <vector>

#include "spinlab/types.h"

namespace spinlab {

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
};

struct LinePlotSpec {
  std::string title, x_label, y_label;
  bool log_x = false;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG line chart. The plotted numbers are embedded as CSV
/// inside a <metadata> element.
std::string RenderLinePlot(const LinePlotSpec &spec);

struct HeatmapSpec {
  std::string title, x_label, y_label;
  Matrix values;  // rows drawn top to bottom, values expected in [0, 1]
  std::vector<std::string> row_names;
};

/// Self-contained SVG heatmap (white = 0, dark blue = 1), data embedded as CSV.
std::string RenderHeatmap(const HeatmapSpec &spec);

}  // namespace spinlab

#endif  // SPINLAB_SVG_PLOT_H_
