#include "sdlab/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <stdexcept>

namespace sdlab {

namespace {

double piece(const Integrand& f, double a, double b, double& err) {
  if (!(b > a)) {
    err = 0.0;
    return 0.0;
  }
  if (a == 0.0) {
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    double l1 = 0.0;
    const double v = ts.integrate(f, a, b, 1e-12, &err, &l1);
    return v;
  }
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, 1e-12, &err);
}

}  // namespace

double integrate_segment(const Integrand& f, double a, double b, std::vector<double> breaks,
                         const QuadOptions& opt, double* error) {
  if (b < a) throw std::invalid_argument("integrate_segment: b < a");
  std::vector<double> pts{a};
  if (breaks.size() <= opt.max_breaks) {
    std::sort(breaks.begin(), breaks.end());
    for (double x : breaks) {
      if (x > pts.back() && x < b) pts.push_back(x);
    }
  }
  pts.push_back(b);
  double total = 0.0;
  double err_total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    double err = 0.0;
    total += piece(f, pts[k], pts[k + 1], err);
    err_total += err;
  }
  if (error) *error = err_total;
  return total;
}

Integral integrate_to_infinity(const Integrand& f, double a, const BreakpointFn& breaks, const QuadOptions& opt) {
  if (a < 0.0) throw std::invalid_argument("integrate_to_infinity: a must be >= 0");
  auto bp = [&](double lo, double hi) { return breaks ? breaks(lo, hi) : std::vector<double>{}; };
  Integral out;
  double lo = a;
  double hi = a <= 1.0 ? 1.0 : std::exp2(std::ceil(std::log2(a)));
  if (hi == lo) hi = 2.0 * lo;
  if (lo < hi) {
    double err = 0.0;
    out.value += integrate_segment(f, lo, hi, bp(lo, hi), opt, &err);
    out.error += err;
  }
  lo = hi;
  for (int j = 0; j < opt.max_blocks; ++j) {
    hi = 2.0 * lo;
    double err = 0.0;
    const double block = integrate_segment(f, lo, hi, bp(lo, hi), opt, &err);
    out.value += block;
    out.error += err;
    out.blocks = j + 1;
    out.cutoff = hi;
    if (std::abs(block) < opt.block_tol) return out;
    lo = hi;
  }
  out.finite = false;
  return out;
}

std::vector<double> dyadic_blocks(const Integrand& f, int j0, int j1, const BreakpointFn& breaks,
                                  const QuadOptions& opt) {
  std::vector<double> out;
  for (int j = j0; j <= j1; ++j) {
    const double lo = std::ldexp(1.0, j);
    const double hi = std::ldexp(1.0, j + 1);
    out.push_back(integrate_segment(f, lo, hi, breaks ? breaks(lo, hi) : std::vector<double>{}, opt));
  }
  return out;
}

}  // namespace sdlab
