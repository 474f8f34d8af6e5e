#pragma once

// Expectations from survival functions (integration by parts against the
// tail), truncated moments, bounded-moment sups and uniform integrability.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdlab/core.hpp"
#include "sdlab/quadrature.hpp"
#include "sdlab/scan.hpp"
#include "sdlab/svf.hpp"

namespace sdlab {

/// Nondecreasing h with h(0) = 0 plus derivative and non-smooth points.
struct ScalarFunction {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::vector<double> kinks;
  std::string label;
};

/// g(x) = x^p L(x^q) [log-factor](x).
struct MomentFunctionSpec {
  enum class LogFactor { none, log_nu, log_nu_sq };

  double power = 1.0;
  SlowlyVaryingSpec L = SlowlyVaryingSpec::constant_one();
  double L_arg_power = 1.0;
  LogFactor log_factor = LogFactor::none;
  int nu = 1;

  static MomentFunctionSpec power_of(double p);
  static MomentFunctionSpec with_log(double p, LogFactor factor, int nu = 1);

  double operator()(double x) const;
  double derivative(double x) const;
  std::vector<double> kinks() const;
  // Regularization anchor of L (in the x variable), 0 if none.
  double anchor() const;
  bool is_pure_power() const;
  std::string describe() const;
  ScalarFunction as_function() const;
};

struct Expectation {
  double value = 0.0;
  bool finite = true;
  double cutoff = 0.0;  // integration cutoff when the tail integral diverged
};

/// E h(xi) = E h(xi)1(xi <= A) + h(A) P(xi > A) + int_A^inf h'(x) P(xi > x) dx.
Expectation expectation_via_tail(const TailFunction& tail, const ScalarFunction& h, double A = 0.0,
                                 const QuadOptions& opt = {});
Expectation expectation_via_tail(const TailFunction& tail, const MomentFunctionSpec& h, double A = 0.0,
                                 const QuadOptions& opt = {});

/// E h(xi) 1(xi <= t) and E h(xi) 1(xi > t).
double expectation_at_most(const TailFunction& tail, const ScalarFunction& h, double t, const QuadOptions& opt = {});
Expectation expectation_above(const TailFunction& tail, const ScalarFunction& h, double t,
                              const QuadOptions& opt = {});

/// Both truncated parts at each threshold of an ascending list, sharing the
/// tail integrals between neighbouring thresholds.
struct SplitExpectation {
  double at_most = 0.0;
  Expectation above;
};
std::vector<SplitExpectation> expectation_split(const TailFunction& tail, const ScalarFunction& h,
                                                std::span<const double> ts, const QuadOptions& opt = {});

/// E g(|X|) with A = g's anchor.
Expectation moment_g(const TailFunction& tail, const MomentFunctionSpec& g, const QuadOptions& opt = {});

/// Per-cell versions for E h(|X|) on a distribution spec; discrete laws are
/// summed over atoms.
Expectation cell_expectation(const DistSpec& d, const ScalarFunction& h);
double cell_expectation_at_most(const DistSpec& d, const ScalarFunction& h, double t);
Expectation cell_expectation_above(const DistSpec& d, const ScalarFunction& h, double t);

struct MomentSup {
  double value = 0.0;
  std::size_t argmax_n = 0;
  std::size_t scan_n = 0;
  bool at_edge = false;  // sup attained at the last scanned row
  bool finite = true;    // every cell expectation finite
};

/// sup_n sum_i a_{n,i} E g(|X_{n,i}|); w == nullptr means Cesaro weights.
MomentSup bounded_moment_condition(const ArraySpec& arr, const WeightScheme* w, const MomentFunctionSpec& g,
                                   std::size_t n_sup = kDefaultScanRows);

struct UiReport {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<std::size_t> argmax;
  std::vector<bool> reliable;  // false where the scan range may hide mass
  std::size_t scan_n = 0;
  bool closed_form = false;
  bool decays = false;
  std::string rule;
};

struct UiOptions {
  std::size_t n_sup = kDefaultScanRows;
  DecayRule rule{};
  // Exact sup as a function of the level a, when known.
  std::function<double(long double)> closed_form;
  // Grid entries are log2(a); lets closed forms reach levels beyond the
  // double range.
  bool log2_grid = false;
};

/// sup_n sum_i a_{n,i} E(T(|X|) 1(T(|X|) > a)) per grid level a.
UiReport ui_check(const ArraySpec& arr, const WeightScheme* w, const MomentFunctionSpec& transform,
                  std::span<const double> a_grid, const UiOptions& opt = {});

/// sup_n sum_i a_{n,i} E g(|X_{n,i}|) after checking g(x)/T(x) -> infinity
/// on a geometric grid. Throws std::invalid_argument when the growth check fails.
MomentSup dlvp_witness(const ArraySpec& arr, const WeightScheme* w, const MomentFunctionSpec& g,
                       const MomentFunctionSpec& transform = MomentFunctionSpec::power_of(1.0),
                       std::size_t n_sup = kDefaultScanRows);
bool dlvp_growth_ok(const MomentFunctionSpec& g, const MomentFunctionSpec& transform);

/// x P(|X| > x^{1/p} Lt(x)^{1/p}) per grid point.
std::vector<double> condition_3_2(const TailFunction& X, double p, const SlowlyVaryingSpec& Ltilde,
                                  std::span<const double> x_grid);

}  // namespace sdlab
