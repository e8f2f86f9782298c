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

#ifndef VRIWAE_SVG_HPP
#define VRIWAE_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "vriwae/table.hpp"

namespace vriwae {

struct SvgOptions {
  bool log_x = true;
  /// When set, one polyline is drawn per (y column, distinct value of this column).
  std::string group_by;
  int width = 720;
  int height = 480;
  std::string title;
};

/// Renders a static line plot. Throws std::invalid_argument for an empty table
/// or unknown columns, and nothing is written in that case. Points with a
/// non-finite coordinate (or x <= 0 on a log axis) are skipped.
std::string render_svg(const Table& table, const std::string& x_col,
                       const std::vector<std::string>& y_cols, const SvgOptions& options = {});

void render_svg(const Table& table, const std::string& x_col,
                const std::vector<std::string>& y_cols, const std::filesystem::path& out_path,
                const SvgOptions& options = {});

}  // namespace vriwae

#endif  // VRIWAE_SVG_HPP
