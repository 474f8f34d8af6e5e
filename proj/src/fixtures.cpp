#include "sdlab/fixtures.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <stdexcept>

namespace sdlab {

namespace {

constexpr std::size_t kJumpCap = 200001;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// log2(max{2, x}) in extended precision.
long double ell(long double x) { return std::log2(std::max(2.0L, x)); }

// Smallest integer n >= 3 with n / log2(n) > y, for y >= 2.
long double first_ratio_above(long double y) {
  auto f = [](long double n) { return n / std::log2(n); };
  long double lo = 3.0L;
  long double hi = 4.0L;
  if (y > 64.0L) {
    // The larger root of n = y log2 n attracts the iteration with factor
    // about 1 / (ln 2 ln n).
    long double n = y * std::log2(y);
    for (int it = 0; it < 60; ++it) {
      const long double next = y * std::log2(n);
      const bool done = std::abs(next - n) <= 1e-18L * n;
      n = next;
      if (done) break;
    }
    lo = std::max(3.0L, std::floor(n * (1.0L - 1e-15L)) - 2.0L);
    hi = std::ceil(n * (1.0L + 1e-15L)) + 2.0L;
    while (lo > 3.0L && f(lo) > y) lo = std::max(3.0L, lo - (hi - lo));
    while (f(hi) <= y) hi += hi - lo;
  } else {
    while (f(hi) <= y) {
      lo = hi;
      hi *= 2.0L;
    }
  }
  for (int it = 0; it < 400 && hi - lo > 0.5L; ++it) {
    const long double mid = std::floor(0.5L * (lo + hi));
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > y) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Integer arithmetic is exact below 2^63; above that the answer is only
  // needed to relative precision.
  if (hi < 9.0e18L) {
    long double n = std::ceil(lo);
    while (f(n) <= y) n += 1.0L;
    while (n > 3.0L && f(n - 1.0L) > y) n -= 1.0L;
    return n;
  }
  return hi;
}

// Smallest m >= 1 with 2^m / m > y.
long double first_spike_above(long double y) {
  if (y < 2.0L) return 1.0L;
  long double m = std::max(3.0L, std::floor(std::log2(y)));
  while (std::ldexp(1.0L, static_cast<int>(m)) / m <= y) m += 1.0L;
  return m;
}


BreakpointFn integer_jumps(bool odd_only) {
  return [odd_only](double lo, double hi) {
    std::vector<double> out;
    double x = std::max(1.0, std::ceil(lo));
    if (odd_only && std::fmod(x, 2.0) == 0.0) x += 1.0;
    const double step = odd_only ? 2.0 : 1.0;
    for (; x <= hi && out.size() < kJumpCap; x += step) out.push_back(x);
    return out;
  };
}

}  // namespace

namespace closed {

double example21_cesaro(long double x) {
  if (x < 1.0L) return 1.0;
  long double n0 = std::floor(x) + 1.0L;
  if (std::fmod(n0, 2.0L) == 0.0L) n0 += 1.0L;
  return static_cast<double>((n0 + 1.0L) / (2.0L * n0));
}

double example21_weighted(long double x) {
  if (x < 1.0L) return 1.25;
  const long double n0 = std::floor(x) + 1.0L;
  return static_cast<double>(std::ceil(n0 / 2.0L) / (n0 * n0));
}

double example21_weighted_ui(long double a, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("transform power must be > 0");
  auto big = [q](long double n) { return std::ceil(n / 2.0L) * std::pow(n, static_cast<long double>(q) - 2.0L); };
  if (a < 1.0L) {
    long double best = 1.0L;
    for (int n = 2; n <= 4096; ++n) best = std::max(best, 1.0L + big(n));
    return static_cast<double>(best);
  }
  if (q > 1.0) return std::numeric_limits<double>::infinity();
  long double n0 = std::floor(std::pow(a, 1.0L / q)) + 1.0L;
  // Unit steps are below long double resolution past 2^60.
  if (n0 < 0x1p60L) {
    while (n0 > 1.0L && std::pow(n0 - 1.0L, static_cast<long double>(q)) > a) n0 -= 1.0L;
    while (std::pow(n0, static_cast<long double>(q)) <= a) n0 += 1.0L;
  }
  long double best = 0.0L;
  for (int d = 0; d < 4; ++d) best = std::max(best, big(n0 + d));
  return static_cast<double>(best);
}

double wlln_magnitude(std::size_t n, double p) {
  const double nn = static_cast<double>(n);
  return std::pow(nn / log_clamped(nn), 1.0 / p);
}

double wlln_cesaro(long double x, double p) {
  if (x < 1.0L) return 1.0;
  const long double y = std::pow(x, static_cast<long double>(p));
  if (y < 2.0L) return 0.5;
  return static_cast<double>(1.0L / first_ratio_above(y));
}

double wlln_cesaro_ui(long double a) {
  if (a < 1.0L) {
    long double best = 1.0L;
    for (int n = 2; n <= 4096; ++n) best = std::max(best, (n - 1.0L) / n + 1.0L / ell(n));
    return static_cast<double>(best);
  }
  if (a < 2.0L) return 1.0;
  return static_cast<double>(1.0L / ell(first_ratio_above(a)));
}

double x2m_spike(std::size_t m, double p) {
  return std::pow(std::ldexp(1.0, static_cast<int>(m)) / static_cast<double>(m), 1.0 / p);
}

double x2m_cesaro(long double x, double p) {
  if (x < 1.0L) return 1.0;
  const long double m = first_spike_above(std::pow(x, static_cast<long double>(p)));
  return static_cast<double>(std::ldexp(1.0L, -static_cast<int>(m)));
}

double x2m_cesaro_ui(long double a) {
  if (a < 1.0L) {
    long double best = 1.0L;
    long double spikes = 0.0L;
    for (int M = 1; M <= 62; ++M) {
      spikes += std::ldexp(1.0L, M) / M;
      const long double n = std::ldexp(1.0L, M);
      best = std::max(best, (n - M + spikes) / n);
    }
    return static_cast<double>(best);
  }
  const long double ma = first_spike_above(a);
  long double s = 1.0L / ma;
  long double best = s;
  for (long double M = ma + 1.0L; M < ma + 400.0L; M += 1.0L) {
    s = s / 2.0L + 1.0L / M;
    best = std::max(best, s);
  }
  return static_cast<double>(best);
}

}  // namespace closed

std::vector<std::string> fixture_names() {
  return {"example-2.1", "example-4.1", "wlln-counterexample", "x2m-example"};
}

Fixture load_fixture(const std::string& name, std::optional<double> p_opt, int nu) {
  if (nu < 1) throw std::invalid_argument("nu must be a positive integer");
  if (p_opt && !(*p_opt > 0.0 && *p_opt < 2.0)) throw std::invalid_argument("fixture p must lie in (0, 2)");
  Fixture f;
  f.name = name;
  f.nu = nu;
  f.limit_grid = dyadic_grid(0, 60);
  for (int j = 0; j <= 2100; ++j) f.ui_log2_grid.push_back(j);
  f.k_grid = dyadic_grid(0, 1010);
  RowLength kn = [](std::size_t n) { return n; };

  if (name == "example-2.1") {
    f.p = p_opt.value_or(1.0);
    f.array = ArraySpec::from_runs(kn, [](std::size_t n) {
      const std::size_t m = n / 2;
      std::vector<CellRun> runs;
      if (m > 0) runs.push_back({1, m, SymmetricPM1{}});
      runs.push_back({m + 1, n - m, SymmetricTwoPoint{static_cast<double>(n), 1.0}});
      return runs;
    });
    f.weights = WeightScheme::explicit_runs(kn, [](std::size_t n) {
      const std::size_t m = n / 2;
      std::vector<WeightRun> runs;
      if (m > 0) runs.push_back({1, m, 1.0 / static_cast<double>(m)});
      const double nn = static_cast<double>(n);
      runs.push_back({m + 1, n - m, 1.0 / (nn * nn)});
      return runs;
    });
    f.b = NormalizingSequence::power(f.p);
    f.cesaro_closed = Functional::closed_form(closed::example21_cesaro, integer_jumps(true), "cesaro G (closed form)");
    f.weighted_closed =
        Functional::closed_form(closed::example21_weighted, integer_jumps(false), "weighted G-hat (closed form)");
    f.c0_closed = 1.25;
    const double q = f.p;
    f.ui_weighted_closed = [q](long double a) { return closed::example21_weighted_ui(a, q); };
    f.moment_g = MomentFunctionSpec::power_of(f.p);
    f.expect.c0 = 1.25;
    f.expect.cesaro_domination_valid = false;
    f.expect.weighted_domination_valid = true;
    f.expect.cesaro_G_floor = 0.5;
    return f;
  }

  if (name == "example-4.1") {
    f.p = p_opt.value_or(1.5);
    const double p = f.p;
    f.array = ArraySpec::sequence([p, nu](std::size_t n) -> DistSpec {
      const double nn = static_cast<double>(n);
      return SymmetricTwoPoint{std::pow(nn + 1.0, 1.0 / p), 1.0 / (nn * log_nu(nn, nu))};
    });
    f.weights = WeightScheme::uniform(kn);
    f.b = NormalizingSequence::power(p);
    f.moment_g = MomentFunctionSpec::with_log(p, MomentFunctionSpec::LogFactor::log_nu, nu);
    f.expect.bounded_moment_finite = true;
    f.expect.series = Verdict::fails;
    return f;
  }

  if (name == "wlln-counterexample") {
    f.p = p_opt.value_or(0.5);
    const double p = f.p;
    f.array = ArraySpec::from_runs(kn, [p](std::size_t n) {
      std::vector<CellRun> runs;
      if (n > 1) runs.push_back({1, n - 1, SymmetricPM1{}});
      runs.push_back({n, 1, SymmetricTwoPoint{closed::wlln_magnitude(n, p), 1.0}});
      return runs;
    });
    f.weights = WeightScheme::from_c(
        kn,
        [](std::size_t n) {
          std::vector<WeightRun> runs;
          if (n > 1) runs.push_back({1, n - 1, 0.0});
          runs.push_back({n, 1, static_cast<double>(n)});
          return runs;
        },
        WeightScheme::Kind::c_normalized_sum);
    f.b = NormalizingSequence::power(p);
    BreakpointFn jumps = [p](double lo, double hi) {
      std::vector<double> out;
      std::size_t start = 2;
      const long double y = std::pow(static_cast<long double>(std::max(lo, 1.0)), static_cast<long double>(p));
      if (y > 4.0L) start = static_cast<std::size_t>(std::max(4.0L, first_ratio_above(y) - 2.0L));
      if (start > 2) {
        for (std::size_t n : {2u, 3u}) {
          const double m = closed::wlln_magnitude(n, p);
          if (m >= lo && m <= hi) out.push_back(m);
        }
      }
      for (std::size_t n = start; out.size() < kJumpCap; ++n) {
        const double m = closed::wlln_magnitude(n, p);
        if (n >= 4 && m > hi) break;
        if (m >= lo && m <= hi) out.push_back(m);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };
    f.cesaro_closed = Functional::closed_form([p](long double x) { return closed::wlln_cesaro(x, p); }, jumps,
                                              "cesaro G (closed form)");
    f.weighted_closed = Functional::closed_form([](long double) { return 1.0; }, BreakpointFn{},
                                                "weighted G-hat (closed form)");
    f.c0_closed = 1.0;
    f.ui_cesaro_closed = closed::wlln_cesaro_ui;
    f.ui_weighted_closed = [](long double) { return std::numeric_limits<double>::infinity(); };
    f.moment_g = MomentFunctionSpec::with_log(p, MomentFunctionSpec::LogFactor::log_nu, 1);
    f.expect.c0 = 1.0;
    f.expect.cesaro_domination_valid = true;
    f.expect.weighted_domination_valid = false;
    f.expect.ui_cesaro_decays = true;
    f.expect.ui_weighted_decays = false;
    f.expect.kG = Verdict::holds;
    f.expect.kG_weighted = Verdict::fails;
    f.expect.bounded_moment_finite = true;
    f.expect.bounded_moment_bound = 1.0 + 1.0 / p;
    f.expect.wlln_holds = false;
    for (std::size_t n : {16u, 256u}) {
      const double nn = static_cast<double>(n);
      f.expect.deterministic_statistic.emplace_back(n, nn / std::pow(log_clamped(nn), 1.0 / p));
    }
    return f;
  }

  if (name == "x2m-example") {
    f.p = p_opt.value_or(0.5);
    const double p = f.p;
    f.array = ArraySpec::sequence([p](std::size_t n) -> DistSpec {
      if (n >= 2 && is_power_of_two(n)) {
        return SymmetricTwoPoint{closed::x2m_spike(static_cast<std::size_t>(std::countr_zero(n)), p), 1.0};
      }
      return SymmetricPM1{};
    });
    f.weights = WeightScheme::uniform(kn);
    f.b = NormalizingSequence::power(p);
    BreakpointFn jumps = [p](double lo, double hi) {
      std::vector<double> out;
      for (std::size_t m = 2; m < 1100; ++m) {
        const double s = closed::x2m_spike(m, p);
        if (s > hi) break;
        if (s >= lo) out.push_back(s);
      }
      return out;
    };
    f.cesaro_closed = Functional::closed_form([p](long double x) { return closed::x2m_cesaro(x, p); }, jumps,
                                              "cesaro G (closed form)");
    f.c0_closed = 1.0;
    f.ui_cesaro_closed = closed::x2m_cesaro_ui;
    f.moment_g = MomentFunctionSpec::with_log(p, MomentFunctionSpec::LogFactor::log_nu, 1);
    f.expect.cesaro_domination_valid = true;
    f.expect.ui_cesaro_decays = true;
    f.expect.series = Verdict::holds;
    f.expect.series_sum = 0.0;
    f.expect.chandra_ghosal = Verdict::fails;
    f.expect.kG = Verdict::holds;
    f.expect.bounded_moment_finite = true;
    f.expect.bounded_moment_bound = 1.0 + 2.0 / p;
    f.expect.wlln_holds = true;
    return f;
  }

  throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace sdlab
