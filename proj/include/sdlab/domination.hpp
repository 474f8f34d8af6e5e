#pragma once

// Domination functionals G (Cesaro) and G-hat (weighted), the dominating
// distribution built from them, the equivalence/transfer check and the
// truncated moment inequalities.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdlab/core.hpp"
#include "sdlab/quadrature.hpp"
#include "sdlab/scan.hpp"

namespace sdlab {

struct SupValue {
  double value = 0.0;
  std::size_t argmax_n = 0;
  bool at_edge = false;
  // The argument lies beyond every magnitude seen in the scan range of an
  // array whose magnitudes were still growing there.
  bool beyond_coverage = false;
  bool reliable() const { return !at_edge && !beyond_coverage; }
};

/// x -> sup_n sum_i a_{n,i} P(|X_{n,i}| > x), from a row scan, a closed form
/// or a plain tail.
class Functional {
 public:
  enum class Source { scanned, closed_form, tail };

  static Functional cesaro(const ArraySpec& arr, std::size_t n_sup = kDefaultScanRows);
  static Functional weighted(const ArraySpec& arr, const WeightScheme& w, std::size_t n_sup = kDefaultScanRows);
  static Functional closed_form(std::function<double(long double)> fn, BreakpointFn jumps, std::string label);
  static Functional from_tail(const TailFunction& t, std::string label = "tail");

  SupValue eval(long double x) const;
  std::vector<SupValue> eval_grid(std::span<const double> xs) const;
  double operator()(long double x) const { return eval(x).value; }

  Source source() const { return source_; }
  std::size_t scan_n() const { return n_sup_; }
  const std::string& label() const { return label_; }
  // Jump locations inside [lo, hi] when the functional is a step function.
  std::vector<double> jumps(double lo, double hi) const;
  bool is_step() const { return static_cast<bool>(jumps_); }
  const Coverage* coverage() const { return coverage_.get(); }

 private:
  Source source_ = Source::closed_form;
  std::string label_;
  std::function<double(long double)> fn_;
  BreakpointFn jumps_;
  std::shared_ptr<const ArraySpec> arr_;
  std::shared_ptr<const WeightScheme> w_;
  std::size_t n_sup_ = 0;
  std::shared_ptr<const Coverage> coverage_;
};

double cesaro_G(const ArraySpec& arr, long double x, std::size_t n_sup = kDefaultScanRows);
double weighted_G(const ArraySpec& arr, const WeightScheme& w, long double x, std::size_t n_sup = kDefaultScanRows);

struct DominationOptions {
  std::size_t n_sup = kDefaultScanRows;
  DecayRule rule{};
  std::vector<double> grid = dyadic_grid(0, 60);
  // Exact functional and C0 (fixtures); replaces the row scan.
  std::optional<Functional> closed_form;
  std::optional<double> c0;
  // Tail integrals of the dominating cdf.
  QuadOptions quad{};
};

struct DominationReport {
  std::string functional;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<std::size_t> argmax;
  std::vector<bool> reliable;
  std::size_t scan_n = 0;
  bool closed_form = false;
  double c0 = 0.0;
  double limit_estimate = 0.0;
  bool valid = false;
  std::string reason;
  std::string rule;
  // P(X > x) = G-hat(x) / C0 when valid.
  std::optional<TailFunction> cdf;

  // Equivalence/transfer fields.
  std::optional<bool> hypothesis_holds;
  double max_violation = 0.0;
  std::optional<double> violation_at;
  std::optional<double> identity_error;  // max |G-hat(x) - C0 P(X > x)| on the grid
};

/// F(x) = 1 - G-hat(x)/C0 on the grid; valid iff G-hat decays at the right end.
DominationReport construct_dominating_cdf(const ArraySpec& arr, const WeightScheme& w,
                                          const DominationOptions& opt = {});
/// Same for an already built functional (weights folded in).
DominationReport dominating_cdf_from(const Functional& G, double c0, const DominationOptions& opt = {});

/// Checks G-hat <= C Y on the grid, then constructs X and verifies
/// G-hat(x) = C0 P(X > x).
DominationReport check_equivalence_transfer(const ArraySpec& arr, const WeightScheme& w, const TailFunction& Y,
                                            double C, const DominationOptions& opt = {});

struct TruncatedBounds {
  double r = 0.0;
  double x = 0.0;
  double lhs_le = 0.0;  // sup_n (1/k_n) sum E|X|^r 1(|X| <= x)
  double rhs_le = 0.0;  // E|Y|^r 1(|Y| <= x) + x^r P(|Y| > x)
  double lhs_gt = 0.0;  // sup_n (1/k_n) sum E|X|^r 1(|X| > x)
  double rhs_gt = 0.0;  // E|Y|^r 1(|Y| > x), +inf when divergent
  bool rhs_gt_finite = true;
};

/// Both truncated-moment inequalities at (r, x). Throws std::domain_error
/// when G <= Y fails on the precheck grid.
TruncatedBounds truncated_moment_bounds(const ArraySpec& arr, const TailFunction& Y, double r, double x,
                                        const DominationOptions& opt = {});
/// The same at every x of an ascending list, with one row scan.
std::vector<TruncatedBounds> truncated_moment_bounds(const ArraySpec& arr, const TailFunction& Y, double r,
                                                     std::span<const double> xs, const DominationOptions& opt = {});

}  // namespace sdlab
