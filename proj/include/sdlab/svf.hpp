#pragma once

// Slowly varying functions with base-2 clamped logarithms, their stored de
// Bruijn conjugates, and the linear-growth regularization near the origin.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sdlab {

/// log2(max{2, x}); every "log" in this library uses this clamp.
double log_clamped(double x);

/// (log x)(log log x)...(log...log x) with nu factors, each iterated log clamped.
double log_nu(double x, int nu);

/// Same product as log_nu but with the last factor squared.
double log_nu_sq(double x, int nu);

/// d/dx of log_nu (or log_nu_sq when squared_last) away from clamp kinks.
double log_nu_derivative(double x, int nu, bool squared_last);

class SlowlyVaryingSpec {
 public:
  enum class Family { constant_one, log_power, loglog_power, product, custom };

  static SlowlyVaryingSpec constant_one();
  static SlowlyVaryingSpec log_power(double gamma);
  static SlowlyVaryingSpec loglog_power(double gamma);
  static SlowlyVaryingSpec product(std::vector<SlowlyVaryingSpec> factors);
  // Custom families must declare their conjugate for conjugate_residual. When
  // no derivative is given a relative central difference (h = x*1e-6) is used.
  static SlowlyVaryingSpec custom(std::function<double(double)> eval,
                                  std::function<double(double)> derivative = {},
                                  std::optional<SlowlyVaryingSpec> conjugate = std::nullopt,
                                  double smooth_from = 0.0, std::string label = "custom");

  double operator()(double x) const;
  double derivative(double x) const;

  // Unregularized values.
  double raw(double x) const;
  double raw_derivative(double x) const;

  Family family() const;
  double gamma() const;
  const std::vector<SlowlyVaryingSpec>& factors() const;
  std::string describe() const;

  // Splice point of the linear-growth regularization; 0 means none.
  double anchor() const;
  // Point beyond which the raw function is differentiable.
  double smooth_from() const;

  bool has_conjugate() const;
  // Throws std::logic_error when a custom family declared none.
  SlowlyVaryingSpec conjugate() const;

  SlowlyVaryingSpec with_anchor(double a) const;

 private:
  struct Node;
  explicit SlowlyVaryingSpec(std::shared_ptr<const Node> node, double anchor = 0.0);

  std::shared_ptr<const Node> node_;
  double anchor_ = 0.0;
};

/// |L(x) * Ltilde(x * L(x)) - 1| per grid point.
std::vector<double> conjugate_residual(const SlowlyVaryingSpec& L, std::span<const double> x_grid);

/// Splices L(a) x / a on [0, a) so that x^alpha * L_1(x) is strictly increasing
/// on [0, inf). Throws std::runtime_error if no anchor exists below 1e12.
SlowlyVaryingSpec regularize(const SlowlyVaryingSpec& L, double alpha);

/// x L'(x) / L(x). Throws std::domain_error when L(x) <= 0.
double derivative_ratio(const SlowlyVaryingSpec& L, double x);

}  // namespace sdlab
