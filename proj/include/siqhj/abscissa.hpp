#pragma once

#include <limits>

namespace siqhj {

// A point of the real line together with its distances to the domain ends.
// Near pi/2 the gap keeps digits that x itself cannot hold.
struct Abscissa {
  double x;
  double lower_gap = std::numeric_limits<double>::infinity();
  double upper_gap = std::numeric_limits<double>::infinity();
};

} // namespace siqhj
