#pragma once

#include <cmath>

// Absolute-tolerance comparison for test assertions.
inline bool near(double a, double b, double tol) {
  return std::fabs(a - b) <= tol;
}
