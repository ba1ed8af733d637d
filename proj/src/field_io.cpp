#include "raspen/field_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

namespace raspen {

Vector load_cell_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SolverError("cannot open field file " + path);
  std::map<Index, double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    Index idx = 0;
    double value = 0.0;
    if (!(fields >> idx >> value)) {
      throw SolverError(path + ":" + std::to_string(lineno) + ": expected 'index value'");
    }
    if (idx < 0 || !values.emplace(idx, value).second) {
      throw SolverError(path + ":" + std::to_string(lineno) + ": bad or duplicate index");
    }
  }
  const auto n = static_cast<Index>(values.size());
  if (n == 0) throw SolverError(path + ": empty field");
  if (values.rbegin()->first != n - 1) throw SolverError(path + ": indices are not 0..n-1");
  Vector out(n);
  for (const auto& [idx, v] : values) out[idx] = v;
  return out;
}

void save_cell_field(const std::string& path, const Vector& field, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw SolverError("cannot write field file " + path);
  if (!comment.empty()) out << "# " << comment << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index k = 0; k < field.size(); ++k) out << k << ' ' << field[k] << '\n';
}

}  // namespace raspen
