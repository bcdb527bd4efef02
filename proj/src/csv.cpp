#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "femto/csv.hpp"

namespace femto::csv {

const std::vector<std::string>& column_names() {
  static const std::vector<std::string> names = {
      "kind",          "scheme",        "rho",           "service_radius_m",
      "area_m2",       "beta",          "theta",         "tput_fms",
      "tput_mms",      "tput_oms",      "se_fms",        "se_mms",
      "se_oms",        "outage_oms",    "slack_fms",     "slack_oms",
      "source",        "d_max_m",       "feasible",      "fms_limited",
      "prop_max_area", "convexity_ok",  "binding",       "drops",
      "err_tput_fms",  "err_tput_mms",  "err_tput_oms",  "err_se_fms",
      "err_se_mms",    "err_se_oms",    "sweep_var",     "sweep_value",
      "k_in",          "n_max",         "colb_bias_db",  "runtime_s",
  };
  return names;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16g", v);
  return buf;
}

void ResultRow::set(const std::string& key, const std::string& value) {
  cells[key] = value;
}

void ResultRow::set(const std::string& key, double value) { cells[key] = format_double(value); }

void ResultRow::set(const std::string& key, int value) { cells[key] = std::to_string(value); }

const std::string& ResultRow::get(const std::string& key) const {
  static const std::string empty;
  const auto it = cells.find(key);
  return it == cells.end() ? empty : it->second;
}

double ResultRow::get_double(const std::string& key) const {
  const std::string& v = get(key);
  if (v.empty()) return std::nan("");
  return std::stod(v);
}

bool ResultRow::has(const std::string& key) const {
  const auto it = cells.find(key);
  return it != cells.end() && !it->second.empty();
}

std::string header_line() {
  std::string line;
  for (const auto& name : column_names()) {
    if (!line.empty()) line += ',';
    line += name;
  }
  return line;
}

std::string to_line(const ResultRow& row) {
  std::string line;
  for (const auto& name : column_names()) {
    if (!line.empty()) line += ',';
    line += row.get(name);
  }
  return line;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Table parse(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split_csv(line);
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("csv: row width does not match the header");
    }
    ResultRow row;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (!fields[i].empty()) row.cells[header[i]] = fields[i];
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace femto::csv
