#include "hierpareto/table_io.hpp"

#include "hierpareto/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hierpareto {

void Table::add_column(std::string name, std::vector<double> values) {
  if (!data.empty() && values.size() != data.front().size())
    throw DomainError("table column '" + name + "' has the wrong length");
  columns.push_back(std::move(name));
  data.push_back(std::move(values));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_table(const Table& t) {
  std::ostringstream out;
  for (const auto& m : t.meta) out << "# " << m << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "\t" : "") << t.columns[c];
  out << '\n';
  const std::size_t rows = t.data.empty() ? 0 : t.data.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < t.data.size(); ++c) out << (c ? "\t" : "") << format_double(t.data[c][r]);
    out << '\n';
  }
  return out.str();
}

void write_table(const std::string& path, const Table& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << render_table(t);
  if (!f) throw Error("failed writing " + path);
}

std::vector<std::pair<double, double>> read_two_column(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read table " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  bool header_skipped = false;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string a, b;
    if (!(in >> a)) continue;
    if (!(in >> b)) throw ConfigError(path + ": expected two columns in '" + line + "'");
    try {
      std::size_t pa = 0, pb = 0;
      const double x = std::stod(a, &pa), y = std::stod(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing text");
      rows.emplace_back(x, y);
    } catch (const std::exception&) {
      if (rows.empty() && !header_skipped) {
        header_skipped = true;
        continue;
      }
      throw ConfigError(path + ": non-numeric row '" + line + "'");
    }
  }
  return rows;
}

}  // namespace hierpareto
