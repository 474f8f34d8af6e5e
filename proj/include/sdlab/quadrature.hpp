#pragma once

// Adaptive quadrature on finite segments and the dyadic block rule for
// improper integrals over [a, inf).

#include <cstddef>
#include <functional>
#include <vector>

#include "sdlab/core.hpp"

namespace sdlab {

struct QuadOptions {
  double abs_tol = 1e-9;
  double block_tol = 1e-12;  // a block below this ends the tail sum
  int max_blocks = 60;       // then the integral is declared divergent
  // Segments with more breakpoints than this are integrated without splitting.
  std::size_t max_breaks = 200000;
};

struct Integral {
  double value = 0.0;
  double error = 0.0;
  bool finite = true;
  double cutoff = 0.0;  // right end of the last block summed
  int blocks = 0;
};

using Integrand = std::function<double(double)>;

/// Integral over [a, b] split at the given breakpoints. Segments starting at
/// 0 use tanh-sinh so that integrable endpoint singularities are handled.
double integrate_segment(const Integrand& f, double a, double b, std::vector<double> breaks = {},
                         const QuadOptions& opt = {}, double* error = nullptr);

/// Integral over [a, inf): [a, 2^ceil(log2 a)] first, then dyadic blocks.
Integral integrate_to_infinity(const Integrand& f, double a, const BreakpointFn& breaks = {},
                               const QuadOptions& opt = {});

/// Integrals over [2^j, 2^(j+1)] for j = j0..j1.
std::vector<double> dyadic_blocks(const Integrand& f, int j0, int j1, const BreakpointFn& breaks = {},
                                  const QuadOptions& opt = {});

}  // namespace sdlab
