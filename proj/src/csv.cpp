#include <cstdio>
#include <fstream>

#include "ihoc/error.hpp"
#include "ihoc/integrate.hpp"

namespace ihoc {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_series_csv(const std::string& path, const std::vector<std::string>& names, const TimeGrid& grid,
                      const std::vector<Vec>& values) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << "t";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t k = 0; k < grid.size() && k < values.size(); ++k) {
    out << format_double(grid[k]);
    for (Eigen::Index i = 0; i < values[k].size(); ++i) out << ',' << format_double(values[k][i]);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

}  // namespace ihoc
