#pragma once

// Monte Carlo engine for partial-sum exceedance probabilities, the
// complete-convergence series and a tail-sup proxy for almost sure limits.
// Every replication is a pure function of (seed, n, replication), and results
// are reduced by slot index, so output never depends on the thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdlab/core.hpp"
#include "sdlab/svf.hpp"

namespace sdlab {

enum class Truncation { none, symmetric_clamp, clamp_at_b, indicator_at_b };
std::string to_string(Truncation t);
Truncation truncation_from_string(const std::string& s);

/// Elementwise truncation at `level`: clamp to [-level, level] or zero out
/// entries with |x| > level.
std::vector<double> truncate(std::span<const double> values, Truncation flavor, double level);

/// max_j |sum_{i<=j} c_i x_i|; empty weights mean c_i = 1.
double max_partial_sums(std::span<const double> row, std::span<const double> weights = {});

struct SimPlan {
  ArraySpec array;
  // Row coefficients c_{n,i} (raw_row is used); none means plain sums.
  std::optional<WeightScheme> weights;
  NormalizingSequence b = NormalizingSequence::power(1.0);
  std::vector<std::size_t> rows;
  std::size_t reps = 1000;
  std::vector<double> eps{0.1, 0.5, 1.0};
  std::uint64_t seed = 1;
  Truncation truncation = Truncation::none;
  double clamp_level = 1.0;  // used by symmetric_clamp
  // Subtract E X 1(|X| <= b_n) from every cell (zero for symmetric cells).
  bool center = false;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct SimCell {
  std::size_t n = 0;
  double eps = 0.0;
  double p_hat = 0.0;
  double se = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

struct SimRow {
  std::size_t n = 0;
  double b_n = 0.0;
  double mean_ratio = 0.0;  // mean of max_j |S_j| / b_n (tail-sup in path mode)
};

struct SeriesPoint {
  std::size_t n = 0;
  double eps = 0.0;
  double block = 0.0;    // p_hat(n) * sum_{m in block} 1/m
  double partial = 0.0;  // running series estimate
};

struct ExceedanceBlock {
  std::size_t lo = 0;  // block [lo, hi]
  std::size_t hi = 0;
  double observed = 0.0;  // count over all paths of n with |X_n| > b_n
  double expected = 0.0;  // R sum_n P(|X_n| > b_n)
  double se = 0.0;        // sqrt(R sum_n p (1 - p))
};

struct SimReport {
  std::string mode;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::string normalization;
  std::vector<SimCell> cells;
  std::vector<SimRow> rows;
  std::vector<SeriesPoint> series;
  // Per epsilon: "bounded" | "unbounded" | "inconclusive" (series mode) or the
  // fraction of paths with tail-sup < eps at the largest n (path mode).
  std::vector<std::pair<double, std::string>> diagnostics;
  std::vector<ExceedanceBlock> exceedances;
};

/// P(max_{j<=n} |S_j| > eps b_n) for every plan row and epsilon.
SimReport wlln_estimate(const SimPlan& plan);

/// Same probabilities with b_n = n^{1/p} Lt(n^{1/p}), Lt the conjugate of L,
/// and the blockwise series sum n^{-1} P(.) interpolated between plan rows.
SimReport slln_series_estimate(const SimPlan& plan, const SlowlyVaryingSpec& L, double p);

/// One path of length max(rows) per replication; per row n the tail-sup
/// statistic sup_{m >= n, m in rows} max_{j<=m} |S_j| / b_m. Also counts
/// |X_n| > b_n exceedances per dyadic block against their expectation.
SimReport slln_path_diagnostic(const SimPlan& plan);

struct HProbe {
  double c_hat = 0.0;
  double lhs = 0.0;  // E (max_j |sum_{i<=j} (X_i^(a) - E X_i^(a))|)^2
  double rhs = 0.0;  // sum_i E (X_i^(a))^2
  double lhs_se = 0.0;
};

/// Monte Carlo estimate of the constant in the maximal second-moment
/// inequality for clamped, centred partial sums. Throws std::domain_error when
/// the right-hand side vanishes.
HProbe condition_H_probe(const ArraySpec& arr, double a, std::size_t n, std::size_t R, std::uint64_t seed,
                         unsigned threads = 0);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

std::string to_csv(const SimReport& r);

}  // namespace sdlab
