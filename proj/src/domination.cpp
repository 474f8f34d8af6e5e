#include "sdlab/domination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "sdlab/moments.hpp"

namespace sdlab {

namespace {

std::string rule_text(const DecayRule& r) {
  std::ostringstream os;
  os << "last " << r.window << " grid values < " << r.eps_lim << " and nonincreasing";
  return os.str();
}

// Scanned functional tabulated on first use at 32 points per octave plus the
// grid. On [t_i, t_{i+1}) it takes the value at t_i, which bounds the
// nonincreasing functional from above, and it is 0 past the largest atom.
struct UpperTable {
  std::once_flag once;
  std::vector<double> knots, values;
};

TailFunction tabulated_upper(const Functional& G, double c0, std::span<const double> grid) {
  const double top = G.coverage()->max_magnitude;
  std::vector<double> t{0.0};
  double lo = 0x1p-10;
  for (double g : grid) {
    if (g > 0.0) lo = std::min(lo, g);
  }
  for (int i = 0;; ++i) {
    const double x = lo * std::exp2(i / 32.0);
    if (x >= top) break;
    t.push_back(x);
  }
  for (double g : grid) {
    if (g > 0.0 && g < top) t.push_back(g);
  }
  t.push_back(top);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());

  auto table = std::make_shared<UpperTable>();
  table->knots = std::move(t);
  auto ready = [table, G, c0]() -> const UpperTable& {
    std::call_once(table->once, [&] {
      for (const SupValue& s : G.eval_grid(table->knots)) table->values.push_back(std::min(1.0, s.value / c0));
      table->values.back() = 0.0;
    });
    return *table;
  };
  auto eval = [ready](long double x) {
    if (x < 0.0L) return 1.0;
    const UpperTable& u = ready();
    const auto it = std::upper_bound(u.knots.begin(), u.knots.end(), static_cast<double>(x));
    return u.values[static_cast<std::size_t>(it - u.knots.begin()) - 1];
  };
  auto jumps = [table](double a, double b) {
    const std::vector<double>& k = table->knots;
    std::vector<double> out;
    for (auto it = std::lower_bound(k.begin(), k.end(), a); it != k.end() && *it <= b; ++it) out.push_back(*it);
    return out;
  };
  return TailFunction::step(eval, jumps, top);
}

}  // namespace

// ------------------------------------------------------------------ Functional

Functional Functional::cesaro(const ArraySpec& arr, std::size_t n_sup) {
  Functional f;
  f.source_ = Source::scanned;
  f.label_ = "cesaro G (scan n <= " + std::to_string(n_sup) + ")";
  f.arr_ = std::make_shared<const ArraySpec>(arr);
  f.n_sup_ = arr.declared_rows() ? std::min(n_sup, *arr.declared_rows()) : n_sup;
  auto cov = std::make_shared<const Coverage>(scan_coverage(arr, n_sup));
  f.coverage_ = cov;
  if (cov->all_discrete) {
    f.jumps_ = [cov](double lo, double hi) {
      std::vector<double> out;
      auto it = std::lower_bound(cov->jumps.begin(), cov->jumps.end(), lo);
      for (; it != cov->jumps.end() && *it <= hi; ++it) out.push_back(*it);
      return out;
    };
  }
  return f;
}

Functional Functional::weighted(const ArraySpec& arr, const WeightScheme& w, std::size_t n_sup) {
  Functional f = cesaro(arr, n_sup);
  f.label_ = "weighted G-hat (scan n <= " + std::to_string(f.n_sup_) + ")";
  f.w_ = std::make_shared<const WeightScheme>(w);
  return f;
}

Functional Functional::closed_form(std::function<double(long double)> fn, BreakpointFn jumps, std::string label) {
  if (!fn) throw std::invalid_argument("closed-form functional needs a callable");
  Functional f;
  f.source_ = Source::closed_form;
  f.fn_ = std::move(fn);
  f.jumps_ = std::move(jumps);
  f.label_ = std::move(label);
  return f;
}

Functional Functional::from_tail(const TailFunction& t, std::string label) {
  Functional f;
  f.source_ = Source::tail;
  f.fn_ = [t](long double x) { return t(x); };
  if (t.is_step()) f.jumps_ = [t](double lo, double hi) { return t.breakpoints_in(lo, hi); };
  f.label_ = std::move(label);
  return f;
}

std::vector<SupValue> Functional::eval_grid(std::span<const double> xs) const {
  std::vector<SupValue> out(xs.size());
  if (source_ != Source::scanned) {
    for (std::size_t j = 0; j < xs.size(); ++j) out[j].value = fn_(xs[j]);
    return out;
  }
  CellVector f = [&](const DistSpec& d, std::span<double> v) {
    for (std::size_t j = 0; j < xs.size(); ++j) v[j] = tail_prob(d, xs[j]);
  };
  const GridSup s = scan_sup(*arr_, w_.get(), n_sup_, xs.size(), f);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    out[j].value = s.value[j];
    out[j].argmax_n = s.argmax[j];
    out[j].at_edge = s.at_edge(j);
    out[j].beyond_coverage = !coverage_->stable && xs[j] >= coverage_->max_magnitude;
  }
  return out;
}

SupValue Functional::eval(long double x) const {
  if (source_ != Source::scanned) {
    SupValue v;
    v.value = fn_(x);
    return v;
  }
  CellVector f = [x](const DistSpec& d, std::span<double> v) { v[0] = tail_prob(d, x); };
  const GridSup s = scan_sup(*arr_, w_.get(), n_sup_, 1, f);
  SupValue v;
  v.value = s.value[0];
  v.argmax_n = s.argmax[0];
  v.at_edge = s.at_edge(0);
  v.beyond_coverage = !coverage_->stable && x >= coverage_->max_magnitude;
  return v;
}

std::vector<double> Functional::jumps(double lo, double hi) const {
  if (!jumps_) return {};
  return jumps_(lo, hi);
}

double cesaro_G(const ArraySpec& arr, long double x, std::size_t n_sup) {
  if (x < 0.0L) return 1.0;
  return Functional::cesaro(arr, n_sup).eval(x).value;
}

double weighted_G(const ArraySpec& arr, const WeightScheme& w, long double x, std::size_t n_sup) {
  return Functional::weighted(arr, w, n_sup).eval(x).value;
}

// ---------------------------------------------------------- dominating CDF

DominationReport dominating_cdf_from(const Functional& G, double c0, const DominationOptions& opt) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw std::domain_error("C0 must lie in (0, inf)");
  DominationReport r;
  r.functional = G.label();
  r.grid = opt.grid;
  r.c0 = c0;
  r.closed_form = G.source() != Functional::Source::scanned;
  r.scan_n = G.scan_n();
  r.rule = rule_text(opt.rule);
  const std::vector<SupValue> vals = G.eval_grid(opt.grid);
  for (const SupValue& v : vals) {
    r.values.push_back(v.value);
    r.argmax.push_back(v.argmax_n);
    r.reliable.push_back(v.reliable());
  }
  r.limit_estimate = r.values.empty() ? 0.0 : r.values.back();

  const bool gate = decays(r.values, opt.rule);
  bool tail_reliable = true;
  for (std::size_t j = r.values.size() >= opt.rule.window ? r.values.size() - opt.rule.window : 0;
       j < r.values.size(); ++j) {
    if (!r.reliable[j]) tail_reliable = false;
  }
  if (gate && tail_reliable) {
    r.valid = true;
    r.reason = "functional vanishes at the right end of the grid";
    const Coverage* cov = G.coverage();
    if (G.source() == Functional::Source::scanned && cov && cov->all_discrete && std::isfinite(cov->max_magnitude) &&
        cov->max_magnitude > 0.0) {
      r.cdf = tabulated_upper(G, c0, opt.grid);
      return r;
    }
    const Functional Gc = G;
    auto eval = [Gc, c0](long double x) { return Gc(x) / c0; };
    if (G.is_step()) {
      r.cdf = TailFunction::step(eval, [Gc](double lo, double hi) { return Gc.jumps(lo, hi); });
    } else {
      r.cdf = TailFunction::analytic(eval);
    }
  } else if (gate) {
    r.reason = "inconclusive: vanishing values lie beyond the scanned rows";
  } else {
    std::ostringstream os;
    os << "limit does not vanish: value " << r.limit_estimate << " at x = " << (r.grid.empty() ? 0.0 : r.grid.back());
    r.reason = os.str();
  }
  return r;
}

DominationReport construct_dominating_cdf(const ArraySpec& arr, const WeightScheme& w,
                                          const DominationOptions& opt) {
  Functional G = opt.closed_form ? *opt.closed_form
                                 : (w.is_uniform() ? Functional::cesaro(arr, opt.n_sup)
                                                   : Functional::weighted(arr, w, opt.n_sup));
  const double c0 = opt.c0 ? *opt.c0 : w.c0(opt.n_sup).value;
  return dominating_cdf_from(G, c0, opt);
}

DominationReport check_equivalence_transfer(const ArraySpec& arr, const WeightScheme& w, const TailFunction& Y,
                                            double C, const DominationOptions& opt) {
  if (!(C > 0.0)) throw std::invalid_argument("check_equivalence_transfer: C must be > 0");
  DominationReport r = construct_dominating_cdf(arr, w, opt);
  bool holds = true;
  for (std::size_t j = 0; j < r.grid.size(); ++j) {
    const double excess = r.values[j] - C * Y(r.grid[j]);
    if (excess > 1e-12 * std::max(1.0, r.values[j])) {
      if (holds || excess > r.max_violation) {
        r.max_violation = excess;
        r.violation_at = r.grid[j];
      }
      holds = false;
    }
  }
  r.hypothesis_holds = holds;
  if (holds && r.valid) {
    double err = 0.0;
    for (std::size_t j = 0; j < r.grid.size(); ++j) {
      err = std::max(err, std::abs(r.values[j] - r.c0 * (*r.cdf)(r.grid[j])));
    }
    r.identity_error = err;
  }
  return r;
}

TruncatedBounds truncated_moment_bounds(const ArraySpec& arr, const TailFunction& Y, double r, double x,
                                        const DominationOptions& opt) {
  const double xs[] = {x};
  return truncated_moment_bounds(arr, Y, r, xs, opt).front();
}

std::vector<TruncatedBounds> truncated_moment_bounds(const ArraySpec& arr, const TailFunction& Y, double r,
                                                     std::span<const double> xs, const DominationOptions& opt) {
  if (!(r > 0.0)) throw std::invalid_argument("truncated_moment_bounds: r must be > 0");
  for (double x : xs) {
    if (x < 0.0) throw std::invalid_argument("truncated_moment_bounds: x must be >= 0");
  }
  if (!std::is_sorted(xs.begin(), xs.end())) throw std::invalid_argument("truncated_moment_bounds: x must ascend");
  std::vector<double> grid = opt.grid;
  grid.insert(grid.end(), xs.begin(), xs.end());
  const Functional G = opt.closed_form ? *opt.closed_form : Functional::cesaro(arr, opt.n_sup);
  const std::vector<SupValue> g = G.eval_grid(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (g[j].value > Y(grid[j]) + 1e-12) {
      std::ostringstream os;
      os << "domination precheck failed: G(" << grid[j] << ") = " << g[j].value << " > P(|Y| > x) = " << Y(grid[j]);
      throw std::domain_error(os.str());
    }
  }

  const ScalarFunction h = MomentFunctionSpec::power_of(r).as_function();
  const std::size_t m = xs.size();
  CellVector f = [&](const DistSpec& d, std::span<double> out) {
    for (std::size_t j = 0; j < m; ++j) {
      out[2 * j] = cell_expectation_at_most(d, h, xs[j]);
      out[2 * j + 1] = cell_expectation_above(d, h, xs[j]).value;
    }
  };
  const GridSup s = scan_sup(arr, nullptr, opt.n_sup, 2 * m, f);
  const std::vector<SplitExpectation> rhs = expectation_split(Y, h, xs, opt.quad);
  std::vector<TruncatedBounds> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    TruncatedBounds& b = out[j];
    b.r = r;
    b.x = xs[j];
    b.lhs_le = s.value[2 * j];
    b.lhs_gt = s.value[2 * j + 1];
    b.rhs_le = rhs[j].at_most + std::pow(xs[j], r) * Y(xs[j]);
    b.rhs_gt_finite = rhs[j].above.finite;
    b.rhs_gt = b.rhs_gt_finite ? rhs[j].above.value : std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace sdlab
