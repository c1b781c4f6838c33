#include "singflow/dataset.hpp"

#include <cstdio>

#include "json.hpp"

namespace singflow {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

}  // namespace

void Dataset::add_meta(std::string key, double value) {
  metadata.emplace_back(std::move(key), format_double(value));
}

void Dataset::add_meta(std::string key, long long value) {
  metadata.emplace_back(std::move(key), std::to_string(value));
}

std::string format_cell(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const long long* i = std::get_if<long long>(&cell))
    return std::to_string(*i);
  return std::get<std::string>(cell);
}

std::string Dataset::to_csv() const {
  std::string out;
  for (const auto& [k, v] : metadata) {
    out += "# ";
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_cell(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string Dataset::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) meta[k] = v;
  j["metadata"] = std::move(meta);
  j["schema"] = columns;
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (const double* d = std::get_if<double>(&cell))
        r.push_back(*d);
      else if (const long long* i = std::get_if<long long>(&cell))
        r.push_back(*i);
      else
        r.push_back(std::get<std::string>(cell));
    }
    rows_json.push_back(std::move(r));
  }
  j["rows"] = std::move(rows_json);
  return j.dump(2) + "\n";
}

}  // namespace singflow
