// Copyright 2026 The vriwae Authors.
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

#include "vriwae/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vriwae {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << v;
  return out.str();
}

}  // namespace

std::string render_svg(const Table& table, const std::string& x_col,
                       const std::vector<std::string>& y_cols, const SvgOptions& options) {
  if (table.empty()) throw std::invalid_argument("render_svg: empty table");
  if (y_cols.empty()) throw std::invalid_argument("render_svg: no y columns");
  const auto require = [&](const std::string& name) {
    if (!table.find_column(name)) throw std::invalid_argument("render_svg: missing column '" + name + "'");
  };
  require(x_col);
  for (const auto& y : y_cols) require(y);
  if (!options.group_by.empty()) require(options.group_by);

  // Group keys in first-appearance order.
  std::vector<std::string> groups;
  std::map<std::string, std::size_t> group_index;
  std::vector<std::size_t> row_group(table.size(), 0);
  for (std::size_t r = 0; r < table.size(); ++r) {
    const std::string key = options.group_by.empty() ? "" : table.text(r, options.group_by);
    auto [it, inserted] = group_index.emplace(key, groups.size());
    if (inserted) groups.push_back(key);
    row_group[r] = it->second;
  }

  std::vector<Series> series;
  for (const auto& y : y_cols) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      Series s;
      s.label = groups[g].empty() ? y : y + " [" + options.group_by + "=" + groups[g] + "]";
      for (std::size_t r = 0; r < table.size(); ++r) {
        if (row_group[r] != g) continue;
        double x = table.number(r, x_col);
        const double v = table.number(r, y);
        if (options.log_x) x = x > 0.0 ? std::log10(x) : std::nan("");
        if (std::isfinite(x) && std::isfinite(v)) s.points.emplace_back(x, v);
      }
      series.push_back(std::move(s));
    }
  }

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (x_hi == x_lo) x_lo -= 0.5, x_hi += 0.5;
  if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;

  const double margin_left = 80.0;
  const double margin_right = 220.0;
  const double margin_top = 40.0;
  const double margin_bottom = 50.0;
  const double plot_w = options.width - margin_left - margin_right;
  const double plot_h = options.height - margin_top - margin_bottom;
  const auto px = [&](double x) { return margin_left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return margin_top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << fixed(margin_left) << "\" y=\"" << fixed(margin_top) << "\" width=\""
      << fixed(plot_w) << "\" height=\"" << fixed(plot_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << fixed(margin_left) << "\" y=\"24\">" << escape(options.title)
        << "</text>\n";
  }
  const std::string x_label = options.log_x ? "log10(" + x_col + ")" : x_col;
  svg << "<text x=\"" << fixed(margin_left + plot_w / 2) << "\" y=\"" << options.height - 12
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_lo + (x_hi - x_lo) * k / 4.0;
    const double yv = y_lo + (y_hi - y_lo) * k / 4.0;
    svg << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << fixed(margin_top + plot_h + 16)
        << "\" text-anchor=\"middle\">" << format_double(std::round(xv * 1000) / 1000) << "</text>\n";
    svg << "<text x=\"" << fixed(margin_left - 6) << "\" y=\"" << fixed(py(yv) + 4)
        << "\" text-anchor=\"end\">" << format_double(std::round(yv * 1000) / 1000) << "</text>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* colour = kPalette[i % kPalette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t p = 0; p < series[i].points.size(); ++p) {
      svg << (p == 0 ? "" : " ") << fixed(px(series[i].points[p].first)) << ','
          << fixed(py(series[i].points[p].second));
    }
    svg << "\"/>\n";
    const double ly = margin_top + 14.0 * static_cast<double>(i) + 8.0;
    const double lx = margin_left + plot_w + 10.0;
    svg << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 18)
        << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << colour << "\"/>\n";
    svg << "<text x=\"" << fixed(lx + 22) << "\" y=\"" << fixed(ly + 4) << "\">"
        << escape(series[i].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void render_svg(const Table& table, const std::string& x_col,
                const std::vector<std::string>& y_cols, const std::filesystem::path& out_path,
                const SvgOptions& options) {
  const std::string content = render_svg(table, x_col, y_cols, options);
  std::ofstream out{out_path, std::ios::binary};
  if (!out) throw std::runtime_error("cannot open '" + out_path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + out_path.string() + "'");
}

}  // namespace vriwae
