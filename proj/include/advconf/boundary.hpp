#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "advconf/classifier.hpp"

namespace advconf {

struct GridPoint {
  double x0;
  double x1;
  double g;
};

// Decision values over a grid x grid lattice of [0,1]^2, x0 outer. A grid
// of 1 samples the origin only. Requires a 2-D classifier.
std::vector<GridPoint> boundary_map(const SvmModel& m, std::size_t grid);

std::string boundary_csv(const std::vector<GridPoint>& points);

}  // namespace advconf
