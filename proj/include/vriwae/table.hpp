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

#ifndef VRIWAE_TABLE_HPP
#define VRIWAE_TABLE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

/**
 * \file
 * \brief Result tables and their CSV / JSON serialization.
 *
 * CSV files start with `#`-prefixed `key: value` metadata lines followed by a
 * header row. Doubles are written in shortest round-trip form, so re-running
 * an experiment with the same inputs yields byte-identical files.
 */

namespace vriwae {

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<std::int64_t, double, std::string>;

class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns);

  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  [[nodiscard]] std::size_t size() const { return rows_.size(); }
  [[nodiscard]] bool empty() const { return rows_.empty(); }

  /// Appends a row; throws if its width differs from the header.
  void add_row(std::vector<Cell> row);

  [[nodiscard]] std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws std::out_of_range for an unknown column.
  [[nodiscard]] std::size_t column(std::string_view name) const;

  /// Numeric value of a cell (integers widened); NaN for strings.
  [[nodiscard]] double number(std::size_t row, std::string_view name) const;
  [[nodiscard]] std::string text(std::size_t row, std::string_view name) const;

  /// Ordered `key: value` pairs written as the CSV comment header.
  std::vector<std::pair<std::string, std::string>> metadata;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

enum class OutputFormat { kCsv, kJson };

OutputFormat parse_output_format(std::string_view name);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
std::string format_cell(const Cell& cell);

void write_csv(const Table& table, std::ostream& out);
std::string to_csv(const Table& table);
nlohmann::ordered_json to_json(const Table& table);

/// Writes the table to `path`; throws std::runtime_error on I/O failure.
void write_table(const Table& table, const std::filesystem::path& path, OutputFormat format);

/// Parses the CSV layout produced by write_csv (no quoting support needed:
/// cells never contain commas or newlines).
Table read_csv(std::istream& in);
Table read_csv_file(const std::filesystem::path& path);

}  // namespace vriwae

#endif  // VRIWAE_TABLE_HPP
