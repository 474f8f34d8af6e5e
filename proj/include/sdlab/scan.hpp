#pragma once

// Row scans: sup over n <= n_sup of weighted row sums of a per-cell
// functional, evaluated for a whole grid of arguments in one pass.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sdlab/core.hpp"

namespace sdlab {

// Fills out[j] with the cell value for the j-th grid argument.
using CellVector = std::function<void(const DistSpec&, std::span<double> out)>;

struct GridSup {
  std::vector<double> value;
  std::vector<std::size_t> argmax;  // first row attaining the sup
  std::size_t scan_n = 0;
  bool at_edge(std::size_t j) const { return argmax[j] == scan_n && value[j] > 0.0 && scan_n > 1; }
};

/// sup_{n <= n_sup} sum_i a_{n,i} f(X_{n,i}); w == nullptr means a_{n,i} = 1/k_n.
GridSup scan_sup(const ArraySpec& arr, const WeightScheme* w, std::size_t n_sup, std::size_t grid_size,
                 const CellVector& f);

/// Largest |X_{n,i}| over the scan range and whether it was already reached
/// in the first half of the range (a heuristic for uniformly bounded arrays).
struct Coverage {
  double max_magnitude = 0.0;
  bool stable = false;
  bool all_discrete = true;
  // Sorted distinct magnitudes of discrete atoms and Pareto cutoffs seen.
  std::vector<double> jumps;
};
Coverage scan_coverage(const ArraySpec& arr, std::size_t n_sup);

}  // namespace sdlab
