#pragma once

// Array-of-random-variables model: survival functions, per-cell distribution
// specs, triangular arrays, weight schemes and normalizing sequences.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sdlab/svf.hpp"

namespace sdlab {

inline constexpr std::size_t kDefaultScanRows = 10000;

/// A point mass of |X|.
struct Atom {
  double magnitude;
  double prob;
};

// Jump or kink locations of a tail inside [lo, hi], ascending.
using BreakpointFn = std::function<std::vector<double>(double lo, double hi)>;

/// x -> P(|X| > x). Piecewise and empirical tails are right-continuous step
/// functions backed by a finite atom list; step tails are right-continuous
/// step functions whose jumps are enumerated lazily; analytic tails wrap a
/// callable. Arguments are long double so that tails can be queried far
/// beyond the double range.
class TailFunction {
 public:
  enum class Kind { analytic, piecewise, empirical, step };

  static TailFunction analytic(std::function<double(long double)> eval,
                               std::optional<double> support_hint = std::nullopt,
                               std::vector<double> breakpoints = {});
  static TailFunction step(std::function<double(long double)> eval, BreakpointFn jumps,
                           std::optional<double> support_hint = std::nullopt);
  static TailFunction piecewise(std::vector<Atom> atoms);
  // P(|X| > x) = #{samples with |s| > x} / N.
  static TailFunction empirical(std::span<const double> samples);

  double operator()(long double x) const;

  Kind kind() const { return kind_; }
  // Finite atom list available.
  bool is_discrete() const { return kind_ == Kind::piecewise || kind_ == Kind::empirical; }
  bool is_step() const { return kind_ != Kind::analytic; }
  std::optional<double> support_hint() const { return support_; }
  // Atoms sorted by magnitude (discrete kinds only).
  std::span<const Atom> atoms() const { return atoms_; }
  // Kinks or jumps inside [lo, hi].
  std::vector<double> breakpoints_in(double lo, double hi) const;

 private:
  Kind kind_ = Kind::analytic;
  std::function<double(long double)> eval_;
  std::optional<double> support_;
  std::vector<double> breakpoints_;
  BreakpointFn jumps_;
  std::vector<Atom> atoms_;
  std::vector<double> suffix_;  // suffix_[j] = sum of atoms_[j..].prob
};

// Symmetric law: +-magnitude with total probability prob, 0 otherwise.
struct SymmetricTwoPoint {
  double magnitude;
  double prob = 1.0;
};

struct SymmetricPM1 {};

// Symmetric sign times |X| with P(|X| > x) = min(1, (x / cutoff)^-alpha).
struct ParetoTail {
  double alpha;
  double cutoff = 1.0;
};

struct CustomDist {
  TailFunction tail;
  std::function<double(double)> quantile;  // signed quantile function on (0,1)
  std::optional<double> mean;
  bool symmetric = false;
  std::string label = "custom";
};

using DistSpec = std::variant<SymmetricTwoPoint, SymmetricPM1, ParetoTail, CustomDist>;

/// Exact survival function of |X|.
TailFunction tail_of(const DistSpec& spec);
/// P(|X| > x) without building a TailFunction.
double tail_prob(const DistSpec& spec, long double x);
/// Signed quantile; nondecreasing in u. Throws std::logic_error for Custom
/// specs without a quantile.
double quantile(const DistSpec& spec, double u);
bool is_symmetric(const DistSpec& spec);
bool is_discrete(const DistSpec& spec);
/// Largest possible |X| (infinity for unbounded laws).
double max_magnitude(const DistSpec& spec);
std::string describe(const DistSpec& spec);

// Point mass at 0.
DistSpec point_mass_zero();
// Signed atoms (value, prob); probabilities must sum to 1.
DistSpec discrete_dist(std::vector<std::pair<double, double>> signed_atoms, std::string label = "discrete");

struct CellRun {
  std::size_t first;  // 1-based column index
  std::size_t count;
  DistSpec dist;
};

struct Independent {};
// Cells are monotone transforms of a Gaussian vector whose adjacent
// components have the declared correlation (in [-0.5, 0]); all other pairs
// are uncorrelated.
struct GaussianNA {
  double correlation;
};
using RowDependence = std::variant<Independent, GaussianNA>;

using RowLength = std::function<std::size_t(std::size_t)>;

/// Triangular array {X_{n,i}, 1 <= i <= k_n}. Rows are described as runs of
/// identically distributed cells so that row functionals cost O(#runs).
class ArraySpec {
 public:
  static ArraySpec from_runs(RowLength k, std::function<std::vector<CellRun>(std::size_t)> runs,
                             bool mean_zero = true, RowDependence dependence = Independent{});
  static ArraySpec from_cells(RowLength k, std::function<DistSpec(std::size_t, std::size_t)> cell,
                              bool mean_zero = true, RowDependence dependence = Independent{});
  // X_{n,i} = X_i, k_n = n.
  static ArraySpec sequence(std::function<DistSpec(std::size_t)> x, bool mean_zero = true,
                            RowDependence dependence = Independent{});
  // Every cell has the same law; k_n = n unless given.
  static ArraySpec identical(DistSpec dist, RowLength k = {}, RowDependence dependence = Independent{});

  std::size_t k(std::size_t n) const;
  // Validated runs covering 1..k_n. Throws std::out_of_range for n = 0 or
  // beyond the declared rows, std::invalid_argument on malformed runs.
  std::vector<CellRun> row(std::size_t n) const;
  DistSpec cell(std::size_t n, std::size_t i) const;

  bool is_sequence() const { return static_cast<bool>(sequence_); }
  DistSpec sequence_term(std::size_t i) const;

  bool mean_zero() const { return mean_zero_; }
  const RowDependence& dependence() const { return dependence_; }

  std::optional<std::size_t> declared_rows() const { return declared_rows_; }
  ArraySpec with_declared_rows(std::size_t rows) const;

 private:
  RowLength k_;
  std::function<std::vector<CellRun>(std::size_t)> runs_;
  std::function<DistSpec(std::size_t)> sequence_;
  bool mean_zero_ = true;
  RowDependence dependence_ = Independent{};
  std::optional<std::size_t> declared_rows_;
};

struct WeightRun {
  std::size_t first;
  std::size_t count;
  double value;
};

struct SupScan {
  double value = 0.0;
  std::size_t argmax_n = 0;
  std::size_t scan_n = 0;
  // True when the supremum is attained at the last scanned row.
  bool at_edge = false;
};

/// Nonnegative weights a_{n,i}; optionally derived from c_{n,i} through
/// a = c / sum(c) or a = c^2 / sum(c^2).
class WeightScheme {
 public:
  enum class Kind { uniform, explicit_weights, c_normalized_sum, c_normalized_squares };

  static WeightScheme uniform(RowLength k);
  static WeightScheme explicit_runs(RowLength k, std::function<std::vector<WeightRun>(std::size_t)> a);
  static WeightScheme from_c(RowLength k, std::function<std::vector<WeightRun>(std::size_t)> c, Kind flavor);

  Kind kind() const { return kind_; }
  bool is_uniform() const { return kind_ == Kind::uniform; }
  std::size_t k(std::size_t n) const;

  std::vector<WeightRun> row(std::size_t n) const;      // a_{n,.}
  std::vector<WeightRun> raw_row(std::size_t n) const;  // c_{n,.} (a_{n,.} when not c-derived)
  double a(std::size_t n, std::size_t i) const;
  double row_weight_sum(std::size_t n) const;
  // A_n for c-derived schemes, 1 otherwise.
  double normalizer(std::size_t n) const;

  SupScan c0(std::size_t n_sup = kDefaultScanRows) const;
  // 0 < A_n <= C n over 1..n_sup.
  bool normalizer_growth_ok(double C, std::size_t n_sup = kDefaultScanRows) const;

  std::optional<std::size_t> declared_rows() const { return declared_rows_; }
  WeightScheme with_declared_rows(std::size_t rows) const;

 private:
  Kind kind_ = Kind::uniform;
  RowLength k_;
  std::function<std::vector<WeightRun>(std::size_t)> runs_;
  std::optional<std::size_t> declared_rows_;
};

double row_weight_sum(const WeightScheme& w, std::size_t n);

/// Positive nondecreasing b_n with b_0 = 0.
class NormalizingSequence {
 public:
  enum class ConjugateForm { inner, outer };  // n^{1/p} Lt(n^{1/p}) or n^{1/p} Lt(n)^{1/p}

  static NormalizingSequence power(double p);
  static NormalizingSequence power_with(double p, const SlowlyVaryingSpec& Ltilde, ConjugateForm form);
  static NormalizingSequence custom(std::function<double(std::size_t)> b, std::string tag);

  double operator()(std::size_t n) const;
  // b evaluated at real k, valid far beyond the size_t range for the power
  // families; custom sequences fall back to rounding k.
  long double at(long double k) const;
  const std::string& tag() const { return tag_; }
  std::optional<double> p() const { return p_; }

 private:
  std::function<double(std::size_t)> b_;
  std::function<long double(long double)> extended_;
  std::string tag_;
  std::optional<double> p_;
};

/// Realizes row n; a pure function of (seed, n, replication).
std::vector<double> sample_row(const ArraySpec& arr, std::size_t n, std::uint64_t seed,
                               std::uint64_t replication = 0);

/// Last `window` values below eps_lim and nonincreasing.
struct DecayRule {
  double eps_lim = 1e-3;
  std::size_t window = 5;
};
bool decays(std::span<const double> values, const DecayRule& rule = {});

/// 2^j for j = j0..j1.
std::vector<double> dyadic_grid(int j0, int j1);

}  // namespace sdlab
