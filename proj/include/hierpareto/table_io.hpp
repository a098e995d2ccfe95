#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hierpareto {

// Tab-separated numeric table: '#'-prefixed metadata lines, one header row
// naming the columns, then rows at 17 significant digits.
struct Table {
  std::vector<std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // one vector per column

  void add_column(std::string name, std::vector<double> values);
};

std::string format_double(double v);
void write_table(const std::string& path, const Table& t);
std::string render_table(const Table& t);

// Whitespace-separated two-column numeric file; '#' comments and one
// optional non-numeric header line are skipped.
std::vector<std::pair<double, double>> read_two_column(const std::string& path);

}  // namespace hierpareto
