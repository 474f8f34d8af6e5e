#pragma once

// Three-way verdicts for the integral, series, normalizing-sequence and
// vanishing-limit hypotheses of the limit theorems.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sdlab/core.hpp"
#include "sdlab/domination.hpp"
#include "sdlab/quadrature.hpp"
#include "sdlab/svf.hpp"

namespace sdlab {

enum class Verdict { holds, fails, inconclusive };
std::string to_string(Verdict v);

struct ConditionVerdict {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  std::string rule;
  // Evidence sequence: argument (block index, n, k, ...) and value.
  std::vector<double> evidence_x;
  std::vector<double> evidence;
  double value = 0.0;  // integral, partial sum or max ratio
  bool value_finite = true;
  std::string note;
};

struct IntegralRule {
  QuadOptions quad{};
  // Fit window for the divergent-envelope test and the slope threshold.
  std::size_t fit_blocks = 10;
  double flat_slope = -0.25;
};

/// int_0^inf x^{p-1} L(x)^p G(x) dx with the dyadic block rule. Verdict
/// holds when a block drops below the block tolerance at a reliable point;
/// fails when log(j b_j) has least-squares slope >= flat_slope against log j
/// over the last fit_blocks blocks (a harmonic or heavier envelope).
ConditionVerdict chandra_ghosal_integral(const Functional& G, double p, const SlowlyVaryingSpec& L,
                                         const IntegralRule& rule = {});
ConditionVerdict chandra_ghosal_integral(const TailFunction& G, double p, const SlowlyVaryingSpec& L,
                                         const IntegralRule& rule = {});

/// Partial sums of P(|X_n|^p > n) for n <= N, judged blockwise over
/// [2^j, 2^{j+1}) with the same envelope rule.
ConditionVerdict series_condition(const ArraySpec& arr, double p, std::size_t N = 1000000,
                                  const IntegralRule& rule = {});

struct PlateauRule {
  double tolerance = 0.01;
};

/// max_{n<=N} [sum_{i<=n} b_i / i^2] / (b_n / n).
ConditionVerdict b_regularity_wlln(const NormalizingSequence& b, std::size_t N = 100000, const PlateauRule& rule = {});
/// max_{n<=N} [sum_{i<=n} b_i^2 / i^2] / (b_n^2 / n).
ConditionVerdict b_regularity_l2(const NormalizingSequence& b, std::size_t N = 100000, const PlateauRule& rule = {});

/// k G(b_k) along k_grid, judged by the decay gate. Unreliable scan points
/// turn a would-be verdict into inconclusive.
ConditionVerdict vanishing_kG(const Functional& G, const NormalizingSequence& b, std::span<const double> k_grid,
                              const DecayRule& rule = {});

/// Least-squares slope of log(j v_j) against log j over the last `window`
/// entries of v (v indexed from j = j0). NaN when a value is not positive.
double envelope_slope(std::span<const double> v, int j0, std::size_t window);

}  // namespace sdlab
