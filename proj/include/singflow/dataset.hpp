#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace singflow {

using Cell = std::variant<double, long long, std::string>;

// Tabular command output. The metadata preamble echoes the full run
// configuration, so identical configurations reproduce the rows
// bit-for-bit on the same build.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  void add_meta(std::string key, double value);
  void add_meta(std::string key, long long value);

  // Comma-separated, '.' decimal, scientific with 12 significant digits,
  // '#'-prefixed metadata preamble, then the header row.
  std::string to_csv() const;
  std::string to_json() const;
};

std::string format_cell(const Cell& cell);

}  // namespace singflow
