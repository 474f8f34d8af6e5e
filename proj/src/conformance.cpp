#include "sdlab/conformance.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sdlab/serialize.hpp"
#include "sdlab/simulate.hpp"

namespace sdlab {

namespace {

std::string valid_text(const DominationReport& r) {
  if (r.valid) return "valid";
  return r.reason.rfind("inconclusive", 0) == 0 ? "inconclusive" : "invalid";
}

void expect(CheckOutcome& o, const std::optional<std::string>& e) {
  o.expected = e;
  o.matches = !e || *e == o.result;
}

std::optional<std::string> opt_text(const std::optional<bool>& b, const char* yes, const char* no) {
  if (!b) return std::nullopt;
  return std::string(*b ? yes : no);
}

std::optional<std::string> opt_text(const std::optional<Verdict>& v) {
  if (!v) return std::nullopt;
  return to_string(*v);
}

Functional cesaro_functional(const LoadedSpec& s, std::size_t n_sup) {
  if (s.fixture && s.fixture->cesaro_closed) return *s.fixture->cesaro_closed;
  return Functional::cesaro(s.array, n_sup);
}

Functional weighted_functional(const LoadedSpec& s, std::size_t n_sup) {
  if (s.fixture && s.fixture->weighted_closed) return *s.fixture->weighted_closed;
  if (s.fixture && s.weights.is_uniform() && s.fixture->cesaro_closed) return *s.fixture->cesaro_closed;
  if (s.weights.is_uniform()) return Functional::cesaro(s.array, n_sup);
  return Functional::weighted(s.array, s.weights, n_sup);
}

std::vector<double> k_grid_for(const LoadedSpec& s, const Functional& G) {
  if (s.fixture && G.source() != Functional::Source::scanned) return s.fixture->k_grid;
  return dyadic_grid(0, 60);
}

CheckOutcome domination_check(const LoadedSpec& s, bool weighted, std::size_t n_sup) {
  CheckOutcome o;
  o.condition = weighted ? "weighted-domination" : "cesaro-domination";
  DominationOptions opt;
  opt.n_sup = n_sup;
  const Functional G = weighted ? weighted_functional(s, n_sup) : cesaro_functional(s, n_sup);
  double c0 = 1.0;
  if (weighted) {
    if (s.fixture && s.fixture->c0_closed && (s.fixture->weighted_closed || s.weights.is_uniform())) {
      c0 = *s.fixture->c0_closed;
    } else {
      c0 = s.weights.c0(n_sup).value;
    }
  }
  const DominationReport r = dominating_cdf_from(G, c0, opt);
  o.result = valid_text(r);
  o.detail = to_json(r);
  if (s.fixture) {
    expect(o, opt_text(weighted ? s.fixture->expect.weighted_domination_valid : s.fixture->expect.cesaro_domination_valid,
                       "valid", "invalid"));
  }
  return o;
}

CheckOutcome ui_outcome(const LoadedSpec& s, bool weighted, std::size_t n_sup) {
  CheckOutcome o;
  o.condition = weighted ? "ui-weighted" : "ui";
  const MomentFunctionSpec T = MomentFunctionSpec::power_of(s.p);
  UiOptions opt;
  opt.n_sup = n_sup;
  std::vector<double> grid = dyadic_grid(0, 60);
  const auto& closed = s.fixture ? (weighted ? s.fixture->ui_weighted_closed : s.fixture->ui_cesaro_closed)
                                 : std::function<double(long double)>{};
  if (closed) {
    opt.closed_form = closed;
    opt.log2_grid = true;
    grid = s.fixture->ui_log2_grid;
  }
  const WeightScheme* w = weighted && !s.weights.is_uniform() ? &s.weights : nullptr;
  const UiReport r = ui_check(s.array, w, T, grid, opt);
  bool tail_reliable = true;
  for (std::size_t j = r.values.size() >= opt.rule.window ? r.values.size() - opt.rule.window : 0; j < r.values.size(); ++j) {
    if (!r.reliable[j]) tail_reliable = false;
  }
  o.result = r.decays ? "decays" : (tail_reliable ? "does-not-decay" : "inconclusive");
  o.detail = to_json(r);
  o.detail["grid_is_log2"] = opt.log2_grid;
  o.detail["transform"] = T.describe();
  if (s.fixture) {
    expect(o, opt_text(weighted ? s.fixture->expect.ui_weighted_decays : s.fixture->expect.ui_cesaro_decays, "decays",
                       "does-not-decay"));
  }
  return o;
}

}  // namespace

std::vector<std::string> condition_names() {
  return {"cesaro-domination", "weighted-domination", "chandra-ghosal", "series",     "b-regularity",
          "b-regularity-l2",   "kG",                  "kG-weighted",    "ui",         "ui-weighted",
          "bounded-moment"};
}

CheckOutcome run_check(const LoadedSpec& s, const std::string& condition, std::size_t n_sup) {
  if (condition == "cesaro-domination") return domination_check(s, false, n_sup);
  if (condition == "weighted-domination" || condition == "domination") return domination_check(s, true, n_sup);
  if (condition == "ui") return ui_outcome(s, false, n_sup);
  if (condition == "ui-weighted") return ui_outcome(s, true, n_sup);

  CheckOutcome o;
  o.condition = condition;
  if (condition == "chandra-ghosal") {
    const ConditionVerdict v = chandra_ghosal_integral(cesaro_functional(s, n_sup), s.p, s.L);
    o.result = to_string(v.verdict);
    o.detail = to_json(v);
    if (s.fixture) expect(o, opt_text(s.fixture->expect.chandra_ghosal));
    return o;
  }
  if (condition == "series") {
    if (!s.array.is_sequence()) throw std::invalid_argument("series condition needs a sequence-shaped array");
    const ConditionVerdict v = series_condition(s.array, s.p);
    o.result = to_string(v.verdict);
    o.detail = to_json(v);
    if (s.fixture) expect(o, opt_text(s.fixture->expect.series));
    return o;
  }
  if (condition == "b-regularity" || condition == "b-regularity-l2") {
    const bool l2 = condition == "b-regularity-l2";
    const ConditionVerdict v = l2 ? b_regularity_l2(s.b) : b_regularity_wlln(s.b);
    o.result = to_string(v.verdict);
    o.detail = to_json(v);
    o.detail["b"] = s.b.tag();
    if (s.fixture) expect(o, std::string(l2 || s.p < 1.0 ? "holds" : "fails"));
    return o;
  }
  if (condition == "kG" || condition == "kG-weighted") {
    const bool weighted = condition == "kG-weighted";
    const Functional G = weighted ? weighted_functional(s, n_sup) : cesaro_functional(s, n_sup);
    const std::vector<double> grid = k_grid_for(s, G);
    const ConditionVerdict v = vanishing_kG(G, s.b, grid);
    o.result = to_string(v.verdict);
    o.detail = to_json(v);
    o.detail["b"] = s.b.tag();
    if (s.fixture) expect(o, opt_text(weighted ? s.fixture->expect.kG_weighted : s.fixture->expect.kG));
    return o;
  }
  if (condition == "bounded-moment") {
    MomentFunctionSpec g = s.fixture ? s.fixture->moment_g : MomentFunctionSpec::power_of(s.p);
    if (!s.fixture) g.L = s.L;
    const MomentSup m = bounded_moment_condition(s.array, nullptr, g, n_sup);
    o.result = m.finite ? "finite" : "infinite";
    o.detail = to_json(m);
    o.detail["g"] = g.describe();
    if (s.fixture) {
      expect(o, opt_text(s.fixture->expect.bounded_moment_finite, "finite", "infinite"));
      if (s.fixture->expect.bounded_moment_bound) {
        o.detail["bound"] = *s.fixture->expect.bounded_moment_bound;
        if (m.value > *s.fixture->expect.bounded_moment_bound) o.matches = false;
      }
    }
    return o;
  }
  throw std::invalid_argument("unknown condition '" + condition + "'");
}

// ---------------------------------------------------------------- conformance

namespace {

struct Suite {
  std::string fixture;
  const ConformanceOptions& opt;
  std::vector<ConformanceResult> out;

  double value(const std::string& key, double fallback) const {
    auto it = opt.overrides.find(fixture + ":" + key);
    return it == opt.overrides.end() ? fallback : it->second;
  }
  void add(const std::string& check, bool ok, const std::string& detail) { out.push_back({fixture, check, ok, detail}); }
  void outcome(const LoadedSpec& s, const std::string& condition) {
    try {
      const CheckOutcome o = run_check(s, condition, opt.n_sup);
      add(condition, o.matches, "result " + o.result + (o.expected ? ", expected " + *o.expected : ""));
    } catch (const std::exception& e) {
      add(condition, false, std::string("error: ") + e.what());
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Scanned functional against its closed form at reliable grid points.
void scan_agrees(Suite& su, const std::string& label, const Functional& scanned, const Functional& closed) {
  std::vector<double> xs = dyadic_grid(0, 24);
  xs.push_back(1.5);
  xs.push_back(0.5);
  const std::vector<SupValue> v = scanned.eval_grid(xs);
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (!v[j].reliable()) continue;
    ++used;
    worst = std::max(worst, std::abs(v[j].value - closed(xs[j])));
  }
  su.add(label, used >= 3 && worst <= 1e-12,
         "max |scan - closed form| = " + fmt(worst) + " over " + std::to_string(used) + " reliable points");
}

void wlln_sim(Suite& su, const LoadedSpec& s, bool expect_holds) {
  SimPlan plan;
  plan.array = s.array;
  if (s.weights.kind() == WeightScheme::Kind::c_normalized_sum || s.weights.kind() == WeightScheme::Kind::c_normalized_squares) {
    plan.weights = s.weights;
  }
  plan.b = s.b;
  for (int j = 6; j <= 14; j += 2) plan.rows.push_back(std::size_t{1} << j);
  plan.reps = su.opt.wlln_reps;
  plan.eps = {0.5};
  plan.seed = 20240601;
  plan.threads = su.opt.threads;
  const SimReport r = wlln_estimate(plan);
  const double last = r.cells.back().p_hat;
  const double se = r.cells.back().se;
  bool ok;
  if (expect_holds) {
    ok = last <= 0.05 + 3.0 * se;
  } else {
    ok = true;
    for (const SimCell& c : r.cells) {
      if (c.n >= 256 && c.p_hat != 1.0) ok = false;
    }
  }
  su.add("wlln-simulation", ok, "final p_hat " + fmt(last) + " (se " + fmt(se) + ") at n = " + std::to_string(r.cells.back().n));
}

}  // namespace

std::vector<ConformanceResult> verify_fixture(const std::string& name, const ConformanceOptions& opt) {
  Suite su{name, opt, {}};
  LoadedSpec s;
  try {
    s = spec_from_fixture(name);
  } catch (const std::exception& e) {
    su.add("load", false, e.what());
    return su.out;
  }
  const Fixture& f = *s.fixture;

  if (name == "example-2.1") {
    const double c0 = s.weights.c0(opt.n_sup).value;
    const double want = su.value("c0", *f.expect.c0);
    su.add("c0", std::abs(c0 - want) <= 1e-12 && c0 > 1.0 && c0 <= 2.0,
           "row scan C0 = " + fmt(c0) + ", expected " + fmt(want));
    const double floor = su.value("G_floor", *f.expect.cesaro_G_floor);
    bool floor_ok = true;
    for (double x : f.limit_grid) floor_ok = floor_ok && (*f.cesaro_closed)(x) >= floor;
    su.add("cesaro-G-floor", floor_ok, "G(x) >= " + fmt(floor) + " for x = 2^0..2^60");
    su.add("cesaro-G-at-1.5", cesaro_G(s.array, 1.5L, opt.n_sup) == 2.0 / 3.0, "scan value " + fmt(cesaro_G(s.array, 1.5L, opt.n_sup)));
    su.add("weighted-G-at-1.5", weighted_G(s.array, s.weights, 1.5L, opt.n_sup) == 0.25,
           "scan value " + fmt(weighted_G(s.array, s.weights, 1.5L, opt.n_sup)));
    scan_agrees(su, "cesaro-G-scan", Functional::cesaro(s.array, opt.n_sup), *f.cesaro_closed);
    scan_agrees(su, "weighted-G-scan", Functional::weighted(s.array, s.weights, opt.n_sup), *f.weighted_closed);
    su.outcome(s, "cesaro-domination");
    su.outcome(s, "weighted-domination");
    const DominationReport r = dominating_cdf_from(*f.weighted_closed, *f.c0_closed);
    bool bound_ok = r.valid;
    for (double x : r.grid) {
      if (bound_ok && x >= 1.0) bound_ok = 1.0 - (*r.cdf)(x) >= 1.0 - 1.0 / (r.c0 * x) - 1e-15;
    }
    su.add("weighted-cdf-bound", bound_ok, "F(x) >= 1 - 1/(C0 x) on the grid");
  } else if (name == "example-4.1") {
    su.outcome(s, "bounded-moment");
    su.outcome(s, "series");
    const ConditionVerdict v = series_condition(s.array, f.p);
    su.add("series-exceeds-3", v.value > su.value("series_sum", 3.0), "partial sum at N = 10^6 is " + fmt(v.value));
    double worst = 0.0;
    for (std::size_t n = 1; n <= 1000; ++n) {
      const double nn = static_cast<double>(n);
      const double t = tail_prob(s.array.sequence_term(n), std::pow(static_cast<long double>(n), 1.0L / f.p));
      worst = std::max(worst, std::abs(t - 1.0 / (nn * log_nu(nn, f.nu))));
    }
    su.add("series-terms", worst <= 1e-15, "max |P(|X_n| > n^(1/p)) - 1/(n log n)| = " + fmt(worst));
  } else if (name == "wlln-counterexample") {
    su.outcome(s, "cesaro-domination");
    su.outcome(s, "weighted-domination");
    su.outcome(s, "ui");
    su.outcome(s, "ui-weighted");
    su.outcome(s, "kG");
    su.outcome(s, "kG-weighted");
    su.outcome(s, "bounded-moment");
    {
      const std::vector<double> ks = dyadic_grid(0, 60);
      const ConditionVerdict v = vanishing_kG(*f.weighted_closed, s.b, ks);
      bool exact = true;
      for (std::size_t j = 0; j < ks.size(); ++j) exact = exact && v.evidence[j] == ks[j];
      su.add("kG-weighted-equals-k", exact, "k G-hat(b_k) = k on k = 2^0..2^60");
    }
    for (const auto& [n, want] : f.expect.deterministic_statistic) {
      std::vector<double> c(n, 0.0);
      c[n - 1] = static_cast<double>(n);
      const double got = max_partial_sums(sample_row(s.array, n, 1), c) / s.b(n);
      const double expected = su.value("statistic_" + std::to_string(n), want);
      su.add("deterministic-statistic-n" + std::to_string(n), std::abs(got - expected) <= 1e-12 * expected,
             "value " + fmt(got) + ", expected " + fmt(expected));
    }
    scan_agrees(su, "cesaro-G-scan", Functional::cesaro(s.array, opt.n_sup), *f.cesaro_closed);
    {
      UiOptions uo;
      uo.n_sup = std::min<std::size_t>(opt.n_sup, 2000);
      const std::vector<double> grid = dyadic_grid(0, 8);
      const UiReport scanned = ui_check(s.array, nullptr, MomentFunctionSpec::power_of(f.p), grid, uo);
      double worst = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        if (scanned.reliable[j]) worst = std::max(worst, std::abs(scanned.values[j] - f.ui_cesaro_closed(grid[j])));
      }
      su.add("ui-scan", worst <= 1e-12, "max |scan - closed form| = " + fmt(worst));
    }
    wlln_sim(su, s, false);
  } else if (name == "x2m-example") {
    su.outcome(s, "cesaro-domination");
    su.outcome(s, "ui");
    su.outcome(s, "series");
    const ConditionVerdict v = series_condition(s.array, f.p);
    const double want = su.value("series_sum", *f.expect.series_sum);
    su.add("series-sum", v.value == want, "partial sum " + fmt(v.value) + ", expected " + fmt(want));
    su.outcome(s, "chandra-ghosal");
    su.outcome(s, "kG");
    su.outcome(s, "bounded-moment");
    scan_agrees(su, "cesaro-G-scan", Functional::cesaro(s.array, opt.n_sup), *f.cesaro_closed);
    wlln_sim(su, s, true);
  }
  return su.out;
}

}  // namespace sdlab
