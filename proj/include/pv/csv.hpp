// CSV import/export. Comma-separated, optional first-line header, label
// column picked by name or zero-based index, UTF-8 passthrough.

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pv/dataset.hpp"
#include "pv/format.hpp"

namespace pv {

namespace detail {

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// Loads a CSV file. Labels are re-encoded to dense ids 0..k-1 in order of
// first appearance; the original text per id lands in label_names. Row
// order is preserved. The label column is matched against header names
// first (when header is true), then interpreted as a zero-based index.
inline Dataset load_csv(const std::string& path, const std::string& label_column,
                        bool header) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_csv: cannot open '" + path + "'");

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!detail::trim(line).empty()) lines.push_back(line);
  }
  if (lines.empty()) throw std::invalid_argument("load_csv: '" + path + "' is empty");

  std::size_t label_idx = std::string::npos;
  std::size_t first_data_row = 0;
  std::size_t n_cols = detail::split_line(lines[0]).size();
  if (header) {
    const auto names = detail::split_line(lines[0]);
    for (std::size_t i = 0; i < names.size(); ++i)
      if (detail::trim(names[i]) == label_column) label_idx = i;
    first_data_row = 1;
    if (lines.size() < 2)
      throw std::invalid_argument("load_csv: '" + path + "' has a header but no rows");
  }
  if (label_idx == std::string::npos) {
    std::size_t parsed = 0;
    const auto res = std::from_chars(label_column.data(),
                                     label_column.data() + label_column.size(), parsed);
    if (res.ec != std::errc{} || res.ptr != label_column.data() + label_column.size())
      throw std::invalid_argument("load_csv: label column '" + label_column +
                                  "' not found in header and not an index");
    if (parsed >= n_cols)
      throw std::invalid_argument("load_csv: label column index out of range");
    label_idx = parsed;
  }

  const std::size_t n_rows = lines.size() - first_data_row;
  const std::size_t dim = n_cols - 1;
  Dataset out;
  out.name = std::filesystem::path(path).stem().string();
  out.features = Matrix(n_rows, dim);
  out.labels.reserve(n_rows);

  std::unordered_map<std::string, int> label_ids;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto cells = detail::split_line(lines[first_data_row + r]);
    if (cells.size() != n_cols)
      throw std::invalid_argument("load_csv: row " + std::to_string(r + 1) +
                                  ": expected " + std::to_string(n_cols) +
                                  " columns, got " + std::to_string(cells.size()));
    std::size_t f = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
      const std::string cell = detail::trim(cells[c]);
      if (c == label_idx) {
        const auto [it, inserted] =
            label_ids.try_emplace(cell, static_cast<int>(label_ids.size()));
        if (inserted) out.label_names.push_back(cell);
        out.labels.push_back(it->second);
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw std::invalid_argument("load_csv: row " + std::to_string(r + 1) +
                                    " column " + std::to_string(c + 1) +
                                    ": non-numeric value '" + cell + "'");
      out.features.at(r, f++) = v;
    }
  }

  out.class_count = static_cast<int>(label_ids.size());
  if (out.class_count < 2)
    throw std::invalid_argument("load_csv: '" + path + "' is a single-class dataset");
  out.ensure_valid();
  return out;
}

// Writes a dataset in the same format load_csv reads: feature columns
// f0..fD-1 plus a trailing label column. Values use shortest round-trip
// formatting, so save/load is lossless.
inline void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("save_csv: cannot write '" + path + "'");
  for (std::size_t c = 0; c < data.dim(); ++c) out << "f" << c << ",";
  out << "label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.dim(); ++c)
      out << format_double(data.features.at(r, c)) << ",";
    const int y = data.labels[r];
    if (static_cast<std::size_t>(y) < data.label_names.size())
      out << data.label_names[static_cast<std::size_t>(y)];
    else
      out << y;
    out << "\n";
  }
}

}  // namespace pv
