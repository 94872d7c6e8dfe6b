#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "treepgd/errors.hpp"

namespace treepgd {

// Uniform value grid {lo, lo+step, ..., hi}. The endpoints must land exactly
// on the grid: (hi-lo)/step is an integer within 1e-9.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.5;

  GridSpec() = default;
  GridSpec(double lo_, double hi_, double step_) : lo(lo_), hi(hi_), step(step_) { validate(); }

  void validate() const {
    if (!(step > 0)) throw ParameterError("grid step must be positive");
    if (!(lo < hi)) throw ParameterError("grid requires lo < hi");
    const double k = (hi - lo) / step;
    if (std::abs(k - std::round(k)) > 1e-9)
      throw ParameterError("grid endpoints must be an integer number of steps apart");
    if (std::round(k) < 1) throw ParameterError("grid must contain at least 2 values");
  }

  int size() const { return static_cast<int>(std::round((hi - lo) / step)) + 1; }
  double value(int idx) const { return lo + idx * step; }

  // Index of the grid point nearest to x, clamped into range; ties broken
  // toward the smaller value.
  int snap_index(double x) const {
    const int n = size();
    if (x <= lo) return 0;
    if (x >= hi) return n - 1;
    int i0 = static_cast<int>(std::floor((x - lo) / step));
    if (i0 >= n - 1) i0 = n - 2;
    const double d_lo = x - value(i0);
    const double d_hi = value(i0 + 1) - x;
    return (d_lo <= d_hi) ? i0 : i0 + 1;
  }
};

inline double snap_to_grid(double x, const GridSpec& grid) {
  return grid.value(grid.snap_index(x));
}

// Expands hi upward (by less than one step) so that (hi-lo)/step is integral.
inline GridSpec make_grid(double lo, double hi, double step) {
  if (!(step > 0)) throw ParameterError("grid step must be positive");
  if (!(lo < hi)) throw ParameterError("grid requires lo < hi");
  const double k = (hi - lo) / step;
  double k_int = std::round(k);
  if (std::abs(k - k_int) > 1e-9) k_int = std::ceil(k);
  if (k_int < 1) k_int = 1;
  return GridSpec(lo, lo + k_int * step, step);
}

}  // namespace treepgd
