#pragma once

#include <map>
#include <string>
#include <vector>

namespace femto::csv {

// Fixed, versioned result schema. Unused cells stay empty; numbers are
// written with 16 significant digits so a re-parse round-trips exactly.
inline constexpr const char* kSchemaTag = "# schema=femtolb-results-1";

const std::vector<std::string>& column_names();

struct ResultRow {
  std::map<std::string, std::string> cells;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool has(const std::string& key) const;
};

std::string header_line();
std::string to_line(const ResultRow& row);

struct Table {
  std::vector<ResultRow> rows;
};

Table parse(const std::string& text);  // accepts the schema tag + header + rows

std::string format_double(double v);  // 16 significant digits

}  // namespace femto::csv
