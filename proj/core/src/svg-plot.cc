// core/src/svg-plot.cc

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

#include "spinlab/svg-plot.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spinlab {

namespace {

std::string Escape(const std::string &s) {
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

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string Num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string RenderLinePlot(const LinePlotSpec &spec) {
  const double W = 640, H = 420, left = 70, right = 150, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto &s : spec.series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return left + (tx(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<metadata>\nseries,x,y\n";
  for (const auto &s : spec.series)
    for (size_t i = 0; i < s.x.size(); ++i)
      os << Escape(s.name) << ',' << Num(s.x[i]) << ',' << Num(s.y[i]) << '\n';
  os << "</metadata>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << Escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double yv = ymin + (ymax - ymin) * t / 4.0, xv = xmin + (xmax - xmin) * t / 4.0;
    const double label_x = spec.log_x ? std::pow(10.0, xv) : xv;
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
       << Num(yv) << "</text>\n";
    os << "<text x=\"" << left + (xv - xmin) / (xmax - xmin) * pw << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\">" << Num(label_x) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
     << Escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << top + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << Escape(spec.y_label) << "</text>\n";
  for (size_t s = 0; s < spec.series.size(); ++s) {
    const auto &ser = spec.series[s];
    const char *color = kPalette[s % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < ser.x.size(); ++i)
      if (std::isfinite(ser.y[i])) os << px(ser.x[i]) << ',' << py(ser.y[i]) << ' ';
    os << "\"/>\n";
    if (ser.x.size() <= 20)
      for (size_t i = 0; i < ser.x.size(); ++i)
        if (std::isfinite(ser.y[i]))
          os << "<circle cx=\"" << px(ser.x[i]) << "\" cy=\"" << py(ser.y[i])
             << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = top + 14 + 18 * static_cast<double>(s);
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << Escape(ser.name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string RenderHeatmap(const HeatmapSpec &spec) {
  const Eigen::Index R = spec.values.rows(), C = spec.values.cols();
  const double left = 70, top = 40, cell_w = std::max(2.0, std::min(12.0, 600.0 / std::max<Eigen::Index>(C, 1)));
  const double cell_h = 14, W = left + cell_w * C + 20, H = top + cell_h * R + 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  os << "<metadata>\nrow";
  for (Eigen::Index c = 0; c < C; ++c) os << ",c" << c;
  os << '\n';
  for (Eigen::Index r = 0; r < R; ++r) {
    os << (r < static_cast<Eigen::Index>(spec.row_names.size()) ? Escape(spec.row_names[r])
                                                                 : std::to_string(r));
    for (Eigen::Index c = 0; c < C; ++c) os << ',' << Num(spec.values(r, c));
    os << '\n';
  }
  os << "</metadata>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << Escape(spec.title) << "</text>\n";
  for (Eigen::Index r = 0; r < R; ++r) {
    if (r < static_cast<Eigen::Index>(spec.row_names.size()))
      os << "<text x=\"" << left - 4 << "\" y=\"" << top + cell_h * r + cell_h - 3
         << "\" text-anchor=\"end\">" << Escape(spec.row_names[r]) << "</text>\n";
    for (Eigen::Index c = 0; c < C; ++c) {
      const double v = std::clamp(spec.values(r, c), 0.0, 1.0);
      const int g = static_cast<int>(std::lround(255.0 * (1.0 - v)));
      os << "<rect x=\"" << left + cell_w * c << "\" y=\"" << top + cell_h * r << "\" width=\""
         << cell_w << "\" height=\"" << cell_h << "\" fill=\"rgb(" << g << ',' << g << ",255)\"/>\n";
    }
  }
  os << "<text x=\"" << left + cell_w * C / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\">" << Escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(14," << top + cell_h * R / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << Escape(spec.y_label) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace spinlab
