#include "advconf/boundary.hpp"

#include <cstdio>

#include "advconf/errors.hpp"

namespace advconf {

std::vector<GridPoint> boundary_map(const SvmModel& m, std::size_t grid) {
  if (m.dimension() != 2)
    throw DimensionMismatch("boundary map needs a 2-D classifier, got dimension " + std::to_string(m.dimension()));
  if (grid == 0) throw ConfigurationError("grid must be at least 1");
  std::vector<GridPoint> out;
  out.reserve(grid * grid);
  const double denom = grid > 1 ? static_cast<double>(grid - 1) : 1.0;
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const double x0 = static_cast<double>(i) / denom;
      const double x1 = static_cast<double>(j) / denom;
      const double x[2] = {x0, x1};
      out.push_back({x0, x1, m.decision(x)});
    }
  }
  return out;
}

std::string boundary_csv(const std::vector<GridPoint>& points) {
  std::string out = "x0,x1,g\n";
  char buf[128];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x0, p.x1, p.g);
    out += buf;
  }
  return out;
}

}  // namespace advconf
