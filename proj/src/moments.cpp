#include "sdlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <variant>

namespace sdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_factor_value(double x, MomentFunctionSpec::LogFactor f, int nu) {
  switch (f) {
    case MomentFunctionSpec::LogFactor::none:
      return 1.0;
    case MomentFunctionSpec::LogFactor::log_nu:
      return log_nu(x, nu);
    case MomentFunctionSpec::LogFactor::log_nu_sq:
      return log_nu_sq(x, nu);
  }
  return 1.0;
}

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b, double lo, double hi) {
  for (double x : b) {
    if (x > lo && x < hi) a.push_back(x);
  }
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// int_lo^hi h'(x) P(xi > x) dx. Step tails are integrated exactly piece by piece.
double tail_integral(const TailFunction& tail, const ScalarFunction& h, double lo, double hi,
                     const QuadOptions& opt) {
  if (!(hi > lo)) return 0.0;
  if (tail.support_hint() && lo >= *tail.support_hint()) return 0.0;
  if (tail.is_step()) {
    std::vector<double> pts = tail.breakpoints_in(lo, hi);
    if (pts.size() <= opt.max_breaks) {
      std::vector<double> cuts{lo};
      for (double x : pts) {
        if (x > cuts.back() && x < hi) cuts.push_back(x);
      }
      cuts.push_back(hi);
      double total = 0.0;
      double h_prev = h.f(cuts[0]);
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double h_next = h.f(cuts[k + 1]);
        const double g = tail(cuts[k]);
        if (g != 0.0) total += g * (h_next - h_prev);
        h_prev = h_next;
      }
      return total;
    }
  }
  std::vector<double> breaks = tail.is_step() ? merged({}, h.kinks, lo, hi)
                                               : merged(tail.breakpoints_in(lo, hi), h.kinks, lo, hi);
  auto integrand = [&](double x) {
    const double g = tail(x);
    return g == 0.0 ? 0.0 : h.df(x) * g;
  };
  return integrate_segment(integrand, lo, hi, std::move(breaks), opt);
}

// int_A^inf h'(x) P(xi > x) dx by the dyadic block rule.
Expectation tail_to_infinity(const TailFunction& tail, const ScalarFunction& h, double A, const QuadOptions& opt) {
  Expectation out;
  double lo = A;
  double hi = A <= 1.0 ? 1.0 : std::exp2(std::ceil(std::log2(A)));
  if (hi == lo) hi = 2.0 * lo;
  out.value += tail_integral(tail, h, lo, hi, opt);
  lo = hi;
  for (int j = 0; j < opt.max_blocks; ++j) {
    hi = 2.0 * lo;
    const double block = tail_integral(tail, h, lo, hi, opt);
    out.value += block;
    out.cutoff = hi;
    if (std::abs(block) < opt.block_tol) return out;
    lo = hi;
  }
  out.finite = false;
  return out;
}

// Smallest t with T(t) > a for nondecreasing T (bisection unless T is a power).
double inverse_level(const MomentFunctionSpec& T, double a) {
  if (a < 0.0) return 0.0;
  if (T.is_pure_power()) return std::pow(a, 1.0 / T.power);
  double lo = 0.0;
  double hi = 1.0;
  while (T(hi) <= a) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return kInf;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (T(mid) > a) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

}  // namespace

// ---------------------------------------------------------- MomentFunctionSpec

MomentFunctionSpec MomentFunctionSpec::power_of(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("moment power must be > 0");
  MomentFunctionSpec g;
  g.power = p;
  return g;
}

MomentFunctionSpec MomentFunctionSpec::with_log(double p, LogFactor factor, int nu) {
  MomentFunctionSpec g = power_of(p);
  if (nu < 1) throw std::invalid_argument("nu must be >= 1");
  g.log_factor = factor;
  g.nu = nu;
  return g;
}

double MomentFunctionSpec::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  const double y = L_arg_power == 1.0 ? x : std::pow(x, L_arg_power);
  return std::pow(x, power) * L(y) * log_factor_value(x, log_factor, nu);
}

double MomentFunctionSpec::derivative(double x) const {
  if (x <= 0.0) return power < 1.0 ? kInf : (power == 1.0 ? L(0.0) * log_factor_value(0.0, log_factor, nu) : 0.0);
  const double q = L_arg_power;
  const double y = q == 1.0 ? x : std::pow(x, q);
  const double lv = L(y);
  const double lam = log_factor_value(x, log_factor, nu);
  const double xp = std::pow(x, power);
  double d = power * std::pow(x, power - 1.0) * lv * lam;
  d += xp * q * std::pow(x, q - 1.0) * L.derivative(y) * lam;
  if (log_factor != LogFactor::none) {
    d += xp * lv * log_nu_derivative(x, nu, log_factor == LogFactor::log_nu_sq);
  }
  return d;
}

std::vector<double> MomentFunctionSpec::kinks() const {
  std::vector<double> out;
  if (log_factor != LogFactor::none) {
    double t = 2.0;
    for (int k = 0; k < nu && std::isfinite(t); ++k) {
      out.push_back(t);
      t = std::exp2(t);
    }
  }
  const double inv = 1.0 / L_arg_power;
  for (double y : {L.smooth_from(), L.anchor(), 2.0, 4.0}) {
    if (y > 0.0 && L.family() != SlowlyVaryingSpec::Family::constant_one) out.push_back(std::pow(y, inv));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double MomentFunctionSpec::anchor() const {
  return L.anchor() > 0.0 ? std::pow(L.anchor(), 1.0 / L_arg_power) : 0.0;
}

bool MomentFunctionSpec::is_pure_power() const {
  return log_factor == LogFactor::none && L.family() == SlowlyVaryingSpec::Family::constant_one;
}

std::string MomentFunctionSpec::describe() const {
  std::string s = "x^" + std::to_string(power);
  if (L.family() != SlowlyVaryingSpec::Family::constant_one) {
    s += " L(x";
    if (L_arg_power != 1.0) s += "^" + std::to_string(L_arg_power);
    s += ") with L = " + L.describe();
  }
  if (log_factor == LogFactor::log_nu) s += " log_" + std::to_string(nu) + "(x)";
  if (log_factor == LogFactor::log_nu_sq) s += " log^(2)_" + std::to_string(nu) + "(x)";
  return s;
}

ScalarFunction MomentFunctionSpec::as_function() const {
  const MomentFunctionSpec self = *this;
  return {[self](double x) { return self(x); }, [self](double x) { return self.derivative(x); }, kinks(),
          describe()};
}

// ----------------------------------------------------------------- expectations

Expectation expectation_via_tail(const TailFunction& tail, const ScalarFunction& h, double A,
                                 const QuadOptions& opt) {
  if (A < 0.0) throw std::invalid_argument("expectation_via_tail: A must be >= 0");
  const double hA = h.f(A);
  const double GA = tail(A);
  Expectation out;
  if (tail.is_discrete()) {
    double below = 0.0;
    double upper = 0.0;
    for (const Atom& a : tail.atoms()) {
      if (a.magnitude <= A) {
        below += h.f(a.magnitude) * a.prob;
      } else {
        upper += (h.f(a.magnitude) - hA) * a.prob;
      }
    }
    out.value = below + hA * GA + upper;
    return out;
  }
  const double below = tail_integral(tail, h, 0.0, A, opt) - hA * GA;
  const Expectation upper = tail_to_infinity(tail, h, A, opt);
  out.value = below + hA * GA + upper.value;
  out.finite = upper.finite;
  out.cutoff = upper.cutoff;
  if (!out.finite) out.value = kInf;
  return out;
}

Expectation expectation_via_tail(const TailFunction& tail, const MomentFunctionSpec& h, double A,
                                 const QuadOptions& opt) {
  return expectation_via_tail(tail, h.as_function(), A, opt);
}

double expectation_at_most(const TailFunction& tail, const ScalarFunction& h, double t, const QuadOptions& opt) {
  if (t < 0.0) return 0.0;
  if (tail.is_discrete()) {
    double s = 0.0;
    for (const Atom& a : tail.atoms()) {
      if (a.magnitude <= t) s += h.f(a.magnitude) * a.prob;
    }
    return s;
  }
  return tail_integral(tail, h, 0.0, t, opt) - h.f(t) * tail(t);
}

Expectation expectation_above(const TailFunction& tail, const ScalarFunction& h, double t, const QuadOptions& opt) {
  Expectation out;
  t = std::max(t, 0.0);
  if (tail.is_discrete()) {
    for (const Atom& a : tail.atoms()) {
      if (a.magnitude > t) out.value += h.f(a.magnitude) * a.prob;
    }
    return out;
  }
  const Expectation upper = tail_to_infinity(tail, h, t, opt);
  out.value = h.f(t) * tail(t) + upper.value;
  out.finite = upper.finite;
  out.cutoff = upper.cutoff;
  if (!out.finite) out.value = kInf;
  return out;
}

std::vector<SplitExpectation> expectation_split(const TailFunction& tail, const ScalarFunction& h,
                                                std::span<const double> ts, const QuadOptions& opt) {
  if (!std::is_sorted(ts.begin(), ts.end())) throw std::invalid_argument("thresholds must be ascending");
  std::vector<SplitExpectation> out(ts.size());
  if (ts.empty()) return out;
  if (tail.is_discrete()) {
    for (std::size_t j = 0; j < ts.size(); ++j) {
      out[j].at_most = expectation_at_most(tail, h, ts[j], opt);
      out[j].above = expectation_above(tail, h, ts[j], opt);
    }
    return out;
  }
  // Running int_0^t h' P(xi > x) dx upward and int_t^inf downward.
  double below = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double t = std::max(ts[j], 0.0);
    below += tail_integral(tail, h, prev, t, opt);
    prev = std::max(prev, t);
    out[j].at_most = below - h.f(t) * tail(t);
  }
  const double last = std::max(ts.back(), 0.0);
  const Expectation upper = tail_to_infinity(tail, h, last, opt);
  double above = upper.value;
  for (std::size_t j = ts.size(); j-- > 0;) {
    const double t = std::max(ts[j], 0.0);
    if (j + 1 < ts.size()) above += tail_integral(tail, h, t, std::max(ts[j + 1], 0.0), opt);
    Expectation& e = out[j].above;
    e.finite = upper.finite;
    e.cutoff = upper.cutoff;
    e.value = upper.finite ? h.f(t) * tail(t) + above : kInf;
  }
  return out;
}

Expectation moment_g(const TailFunction& tail, const MomentFunctionSpec& g, const QuadOptions& opt) {
  return expectation_via_tail(tail, g, g.anchor(), opt);
}

Expectation cell_expectation(const DistSpec& d, const ScalarFunction& h) {
  if (const auto* s = std::get_if<SymmetricTwoPoint>(&d)) return {h.f(s->magnitude) * s->prob, true, 0.0};
  if (std::holds_alternative<SymmetricPM1>(d)) return {h.f(1.0), true, 0.0};
  return expectation_via_tail(tail_of(d), h, 0.0);
}

double cell_expectation_at_most(const DistSpec& d, const ScalarFunction& h, double t) {
  if (const auto* s = std::get_if<SymmetricTwoPoint>(&d)) return s->magnitude <= t ? h.f(s->magnitude) * s->prob : 0.0;
  if (std::holds_alternative<SymmetricPM1>(d)) return 1.0 <= t ? h.f(1.0) : 0.0;
  return expectation_at_most(tail_of(d), h, t);
}

Expectation cell_expectation_above(const DistSpec& d, const ScalarFunction& h, double t) {
  if (const auto* s = std::get_if<SymmetricTwoPoint>(&d)) return {s->magnitude > t ? h.f(s->magnitude) * s->prob : 0.0, true, 0.0};
  if (std::holds_alternative<SymmetricPM1>(d)) return {1.0 > t ? h.f(1.0) : 0.0, true, 0.0};
  return expectation_above(tail_of(d), h, t);
}

// ------------------------------------------------------------- array-level sups

MomentSup bounded_moment_condition(const ArraySpec& arr, const WeightScheme* w, const MomentFunctionSpec& g,
                                   std::size_t n_sup) {
  const ScalarFunction h = g.as_function();
  bool all_finite = true;
  std::map<std::pair<double, double>, double> pareto_cache;
  CellVector f = [&](const DistSpec& d, std::span<double> out) {
    if (const auto* p = std::get_if<ParetoTail>(&d)) {
      auto key = std::make_pair(p->alpha, p->cutoff);
      auto it = pareto_cache.find(key);
      if (it == pareto_cache.end()) {
        const Expectation e = cell_expectation(d, h);
        if (!e.finite) all_finite = false;
        it = pareto_cache.emplace(key, e.value).first;
      }
      out[0] = it->second;
      return;
    }
    const Expectation e = cell_expectation(d, h);
    if (!e.finite) all_finite = false;
    out[0] = e.value;
  };
  const GridSup s = scan_sup(arr, w, n_sup, 1, f);
  MomentSup out;
  out.value = s.value[0];
  out.argmax_n = s.argmax[0];
  out.scan_n = s.scan_n;
  out.at_edge = s.at_edge(0);
  out.finite = all_finite && std::isfinite(out.value);
  return out;
}

UiReport ui_check(const ArraySpec& arr, const WeightScheme* w, const MomentFunctionSpec& transform,
                  std::span<const double> a_grid, const UiOptions& opt) {
  UiReport r;
  r.grid.assign(a_grid.begin(), a_grid.end());
  r.rule = "last " + std::to_string(opt.rule.window) + " values < " + std::to_string(opt.rule.eps_lim) +
           " and nonincreasing";
  if (opt.closed_form) {
    r.closed_form = true;
    for (double a : a_grid) r.values.push_back(opt.closed_form(opt.log2_grid ? std::exp2(static_cast<long double>(a)) : a));
    r.argmax.assign(a_grid.size(), 0);
    r.reliable.assign(a_grid.size(), true);
    r.decays = decays(r.values, opt.rule);
    return r;
  }

  if (opt.log2_grid) throw std::invalid_argument("ui_check: log2 grids need a closed form");
  const ScalarFunction T = transform.as_function();
  std::vector<double> levels;
  for (double a : a_grid) levels.push_back(inverse_level(transform, a));
  std::map<std::pair<double, double>, std::vector<double>> pareto_cache;

  CellVector f = [&](const DistSpec& d, std::span<double> out) {
    auto discrete = [&](double m, double q) {
      const double tm = T.f(m);
      for (std::size_t j = 0; j < a_grid.size(); ++j) out[j] = tm > a_grid[j] ? tm * q : 0.0;
    };
    if (const auto* s = std::get_if<SymmetricTwoPoint>(&d)) return discrete(s->magnitude, s->prob);
    if (std::holds_alternative<SymmetricPM1>(d)) return discrete(1.0, 1.0);
    if (const auto* c = std::get_if<CustomDist>(&d); c && c->tail.is_discrete()) {
      std::fill(out.begin(), out.end(), 0.0);
      for (const Atom& at : c->tail.atoms()) {
        const double tm = T.f(at.magnitude);
        for (std::size_t j = 0; j < a_grid.size(); ++j) {
          if (tm > a_grid[j]) out[j] += tm * at.prob;
        }
      }
      return;
    }
    const auto* p = std::get_if<ParetoTail>(&d);
    if (p) {
      auto it = pareto_cache.find({p->alpha, p->cutoff});
      if (it != pareto_cache.end()) {
        std::copy(it->second.begin(), it->second.end(), out.begin());
        return;
      }
    }
    const TailFunction tail = tail_of(d);
    for (std::size_t j = 0; j < a_grid.size(); ++j) out[j] = expectation_above(tail, T, levels[j]).value;
    if (p) pareto_cache[{p->alpha, p->cutoff}] = std::vector<double>(out.begin(), out.end());
  };
  const GridSup s = scan_sup(arr, w, opt.n_sup, a_grid.size(), f);
  const Coverage cov = scan_coverage(arr, opt.n_sup);
  r.values = s.value;
  r.argmax = s.argmax;
  r.scan_n = s.scan_n;
  for (std::size_t j = 0; j < a_grid.size(); ++j) {
    const bool beyond = !cov.stable && levels[j] >= cov.max_magnitude;
    r.reliable.push_back(!s.at_edge(j) && !beyond);
  }
  r.decays = decays(r.values, opt.rule);
  if (r.decays) {
    for (std::size_t j = a_grid.size() - opt.rule.window; j < a_grid.size(); ++j) {
      if (!r.reliable[j]) r.decays = false;
    }
  }
  return r;
}

bool dlvp_growth_ok(const MomentFunctionSpec& g, const MomentFunctionSpec& transform) {
  std::vector<double> ratio;
  for (int j = 1; j <= 60; ++j) {
    const double x = std::ldexp(1.0, j);
    ratio.push_back(g(x) / transform(x));
  }
  for (std::size_t k = ratio.size() / 2; k + 1 < ratio.size(); ++k) {
    if (!(ratio[k + 1] > ratio[k])) return false;
  }
  return true;
}

MomentSup dlvp_witness(const ArraySpec& arr, const WeightScheme* w, const MomentFunctionSpec& g,
                       const MomentFunctionSpec& transform, std::size_t n_sup) {
  if (!dlvp_growth_ok(g, transform)) {
    throw std::invalid_argument("dlvp_witness: g(x)/T(x) is not increasing to infinity on the check grid");
  }
  return bounded_moment_condition(arr, w, g, n_sup);
}

std::vector<double> condition_3_2(const TailFunction& X, double p, const SlowlyVaryingSpec& Ltilde,
                                  std::span<const double> x_grid) {
  if (!(p > 0.0)) throw std::invalid_argument("condition_3_2: p must be > 0");
  std::vector<double> out;
  for (double x : x_grid) {
    const long double thr =
        std::pow(static_cast<long double>(x), 1.0L / p) * std::pow(static_cast<long double>(Ltilde(x)), 1.0L / p);
    out.push_back(static_cast<double>(static_cast<long double>(x) * X(thr)));
  }
  return out;
}

}  // namespace sdlab
