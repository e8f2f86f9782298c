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

#include "vriwae/table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vriwae {

Table::Table(std::vector<std::string> columns) : columns_{std::move(columns)} {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (columns_[i] == columns_[j]) throw std::invalid_argument("Table: duplicate column " + columns_[i]);
    }
  }
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("Table::add_row: expected " + std::to_string(columns_.size()) +
                                " cells, got " + std::to_string(row.size()));
  }
  rows_.push_back(std::move(row));
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column(std::string_view name) const {
  const auto index = find_column(name);
  if (!index) throw std::out_of_range("Table: no column named '" + std::string{name} + "'");
  return *index;
}

double Table::number(std::size_t row, std::string_view name) const {
  const Cell& cell = rows_.at(row)[column(name)];
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  return std::nan("");
}

std::string Table::text(std::size_t row, std::string_view name) const {
  return format_cell(rows_.at(row)[column(name)]);
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown format '" + std::string{name} + "' (expected csv|json)");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return {buffer.data(), result.ptr};
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

void write_csv(const Table& table, std::ostream& out) {
  for (const auto& [key, value] : table.metadata) out << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < table.columns().size(); ++i) {
    out << (i == 0 ? "" : ",") << table.columns()[i];
  }
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i == 0 ? "" : ",") << format_cell(row[i]);
    out << '\n';
  }
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  write_csv(table, out);
  return out.str();
}

nlohmann::ordered_json to_json(const Table& table) {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.metadata) meta[key] = value;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows()) {
    nlohmann::ordered_json record = nlohmann::ordered_json::array();
    for (const Cell& cell : row) {
      if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        record.push_back(*i);
      } else if (const auto* d = std::get_if<double>(&cell)) {
        // JSON has no NaN or infinity.
        if (std::isfinite(*d)) {
          record.push_back(*d);
        } else {
          record.push_back(nullptr);
        }
      } else {
        record.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(record));
  }
  nlohmann::ordered_json out;
  out["metadata"] = std::move(meta);
  out["columns"] = table.columns();
  out["rows"] = std::move(rows);
  return out;
}

void write_table(const Table& table, const std::filesystem::path& path, OutputFormat format) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out{path, std::ios::binary};
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  if (format == OutputFormat::kCsv) {
    write_csv(table, out);
  } else {
    out << to_json(table).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream stream{line};
  while (std::getline(stream, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Cell parse_cell(const std::string& text) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (text.find_first_of(".eEn") == std::string::npos) {
    std::int64_t i = 0;
    const auto [ptr, ec] = std::from_chars(first, last, i);
    if (ec == std::errc{} && ptr == last) return i;
  }
  double d = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, d);
  if (ec == std::errc{} && ptr == last) return d;
  return text;
}

}  // namespace

Table read_csv(std::istream& in) {
  std::string line;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::optional<Table> table;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto colon = line.find(": ");
      if (colon != std::string::npos && colon > 2) {
        metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      }
      continue;
    }
    if (!table) {
      table.emplace(split(line));
      continue;
    }
    std::vector<Cell> row;
    for (const auto& field : split(line)) row.push_back(parse_cell(field));
    table->add_row(std::move(row));
  }
  if (!table) throw std::runtime_error("read_csv: no header row");
  table->metadata = std::move(metadata);
  return *std::move(table);
}

Table read_csv_file(const std::filesystem::path& path) {
  std::ifstream in{path};
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_csv(in);
}

}  // namespace vriwae
