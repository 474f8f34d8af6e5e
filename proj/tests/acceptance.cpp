// One PASS/FAIL line per acceptance criterion.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sdlab/conditions.hpp"
#include "sdlab/domination.hpp"
#include "sdlab/fixtures.hpp"
#include "sdlab/moments.hpp"
#include "sdlab/scan.hpp"
#include "sdlab/simulate.hpp"
#include "sdlab/svf.hpp"

using namespace sdlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "[exception: " << e.what() << "] ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0 && secs >= budget_s) {
    o.pass = false;
    o.detail << "[runtime " << secs << " s over " << budget_s << " s] ";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %2d  %-44s  %.3f s  %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.str().c_str());
  std::fflush(stdout);
}

RowLength rows_n() {
  return [](std::size_t n) { return n; };
}

std::vector<double> expand(const std::vector<WeightRun>& runs, std::size_t k) {
  std::vector<double> out(k, 0.0);
  for (const auto& r : runs)
    for (std::size_t i = 0; i < r.count; ++i) out[r.first - 1 + i] = r.value;
  return out;
}

ScalarFunction power_fn(double r) {
  return {[r](double x) { return std::pow(x, r); }, [r](double x) { return r * std::pow(x, r - 1.0); }, {}, "x^r"};
}

// Dyadic grid 2^0, 2^1, ... cut at the first point the row scan cannot vouch for.
std::vector<double> reliable_grid(const ArraySpec& arr, std::size_t n_sup) {
  const auto G = Functional::cesaro(arr, n_sup);
  std::vector<double> grid;
  for (double x : dyadic_grid(0, 60)) {
    if (!G.eval(x).reliable()) break;
    grid.push_back(x);
  }
  return grid;
}

constexpr std::size_t kScanRows = 100000;

// Dominating X of the Cesaro functional: closed form when the fixture has one,
// else the row scan on the range it covers.
DominationReport cesaro_domination(const Fixture& f) {
  DominationOptions opt;
  if (f.cesaro_closed) {
    opt.closed_form = *f.cesaro_closed;
    opt.c0 = 1.0;
    opt.grid = f.limit_grid;
  } else {
    opt.n_sup = kScanRows;
    opt.grid = reliable_grid(f.array, kScanRows);
  }
  return construct_dominating_cdf(f.array, WeightScheme::uniform(rows_n()), opt);
}

int run_sdlab(const std::string& args) {
  const int st = std::system((std::string(SDLAB_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "small-weights example exactness", 1.0, [](Outcome& o) {
    const Fixture f = load_fixture("example-2.1");
    double floor_min = 1.0;
    for (double x : f.limit_grid) floor_min = std::min(floor_min, (*f.cesaro_closed)(x));
    const auto scanned = Functional::cesaro(f.array);
    std::size_t checked = 0;
    for (const auto& v : scanned.eval_grid(f.limit_grid)) {
      if (!v.reliable()) continue;
      floor_min = std::min(floor_min, v.value);
      ++checked;
    }
    o.require(floor_min >= 0.5, "G >= 1/2 on x = 2^0..2^60");
    // Closed forms decide the limit on 2^0..2^60; the scan must agree on the
    // range its rows cover.
    DominationOptions cu, cw, scan;
    cu.closed_form = *f.cesaro_closed;
    cu.c0 = 1.0;
    cw.closed_form = *f.weighted_closed;
    cw.c0 = *f.c0_closed;
    scan.grid = reliable_grid(f.array, scan.n_sup);
    const auto uniform = construct_dominating_cdf(f.array, WeightScheme::uniform(rows_n()), cu);
    const auto weighted = construct_dominating_cdf(f.array, f.weights, cw);
    const auto uniform_scan = construct_dominating_cdf(f.array, WeightScheme::uniform(rows_n()), scan);
    const auto weighted_scan = construct_dominating_cdf(f.array, f.weights, scan);
    o.require(!uniform_scan.valid && weighted_scan.valid, "row scan agrees on the covered range");
    o.require(!uniform.valid, "invalid under uniform weights");
    o.require(weighted.valid, "valid under the example's weights");
    const auto c0 = f.weights.c0(10000);
    o.require(c0.value == 1.25 && c0.value > 1.0 && c0.value <= 2.0, "C0 = 5/4");
    o.detail << "min G = " << floor_min << " (" << checked << " scanned points), uniform valid=" << uniform.valid
             << ", weighted valid=" << weighted.valid << ", C0 = " << c0.value;
  });

  criterion(2, "WLLN counterexample exactness", 1.0, [](Outcome& o) {
    const Fixture f = load_fixture("wlln-counterexample");
    UiOptions uo;
    uo.closed_form = f.ui_cesaro_closed;
    uo.log2_grid = true;
    const auto ui = ui_check(f.array, nullptr, MomentFunctionSpec::power_of(f.p), f.ui_log2_grid, uo);
    o.require(ui.decays, "Cesaro UI of |X|^p decays");
    const auto kG = vanishing_kG(*f.weighted_closed, f.b, f.k_grid);
    o.require(kG.verdict == Verdict::fails, "k G-hat(b_k) verdict fails");
    bool exact = true;
    for (std::size_t j = 0; j < kG.evidence.size(); ++j) exact = exact && kG.evidence[j] == kG.evidence_x[j];
    o.require(exact, "k G-hat(b_k) = k");
    double s16 = 0.0, s256 = 0.0;
    for (std::size_t n : {16u, 256u}) {
      const auto row = sample_row(f.array, n, 1);
      const double s = max_partial_sums(row, expand(f.weights.raw_row(n), n)) / f.b(n);
      (n == 16 ? s16 : s256) = s;
    }
    o.require(s16 == 1.0 && s256 == 4.0, "deterministic statistic 1 and 4");
    o.detail << "UI last = " << ui.values.back() << ", kG verdict " << to_string(kG.verdict) << ", statistic "
             << s16 << " / " << s256;
  });

  criterion(3, "spike sequence exactness and WLLN Monte Carlo", 120.0, [](Outcome& o) {
    const Fixture f = load_fixture("x2m-example");
    const auto s = series_condition(f.array, f.p);
    o.require(s.verdict == Verdict::holds && s.value == 0.0, "series sums to 0");
    const auto cg = chandra_ghosal_integral(*f.cesaro_closed, f.p, SlowlyVaryingSpec::constant_one());
    o.require(cg.verdict == Verdict::fails, "integral verdict fails");
    // Lower envelope: G(x) >= eps0 / (x^p log x) along the grid.
    double eps0 = 1e300;
    for (double x : dyadic_grid(2, 60)) eps0 = std::min(eps0, (*f.cesaro_closed)(x) * std::pow(x, f.p) * std::log2(x));
    o.require(eps0 > 0.0, "positive envelope constant");
    const auto kG = vanishing_kG(*f.cesaro_closed, f.b, f.k_grid);
    o.require(kG.verdict == Verdict::holds, "k G(b_k) holds");

    SimPlan plan;
    plan.array = f.array;
    plan.b = f.b;
    plan.rows = {};
    for (std::size_t n = 64; n <= 16384; n *= 2) plan.rows.push_back(n);
    plan.reps = 2000;
    plan.eps = {0.5};
    plan.seed = 20240601;
    const auto r = wlln_estimate(plan);
    bool trending = true;
    for (std::size_t k = 1; k < r.cells.size(); ++k) {
      const auto& a = r.cells[k - 1];
      const auto& b = r.cells[k];
      trending = trending && b.p_hat <= a.p_hat + 3.0 * std::hypot(a.se, b.se);
    }
    o.require(trending, "p_hat monotone within 3 se");
    const auto& last = r.cells.back();
    o.require(last.p_hat <= 0.05 + 3.0 * last.se, "final p_hat <= 0.05 + 3 se");
    o.detail << "series " << s.value << ", integral " << to_string(cg.verdict) << " (eps0 = " << eps0 << "), kG "
             << to_string(kG.verdict) << ", p_hat " << r.cells.front().p_hat << " -> " << last.p_hat;
  });

  criterion(4, "log-weighted sequence exactness and path proxy", 120.0, [](Outcome& o) {
    const Fixture f = load_fixture("example-4.1");
    const auto m = bounded_moment_condition(f.array, nullptr, f.moment_g);
    o.require(m.finite && !m.at_edge, "bounded moment finite");
    const auto s = series_condition(f.array, f.p, 1000000);
    o.require(s.verdict == Verdict::fails, "divergence rule fires");
    std::size_t first_above = 0;
    double partial = 0.0;
    for (std::size_t n = 1; n <= 1000000 && !first_above; ++n) {
      partial += tail_prob(f.array.sequence_term(n), std::pow(double(n), 1.0 / f.p));
      if (partial > 3.0) first_above = n;
    }
    o.require(first_above > 0 && s.value > 3.0, "partial sums exceed 3 within 10^6");

    SimPlan plan;
    plan.array = f.array;
    plan.b = NormalizingSequence::power(f.p);
    for (std::size_t n = 16; n <= 16384; n *= 2) plan.rows.push_back(n);
    plan.reps = 2000;
    plan.eps = {1.0};
    plan.seed = 3;
    const auto r = slln_path_diagnostic(plan);
    double worst = 0.0, late = 0.0;
    for (const auto& b : r.exceedances) {
      if (b.se > 0.0) worst = std::max(worst, std::abs(b.observed - b.expected) / b.se);
      else o.require(b.observed == b.expected, "degenerate block matches exactly");
      if (b.lo >= 1024) late += b.observed;
    }
    o.require(worst <= 3.0, "block frequencies within 3 se");
    o.require(late > 0.0, "exceedances keep occurring at large n");
    o.detail << "moment sup " << m.value << ", partial sum > 3 at n = " << first_above << ", sum(10^6) = " << s.value
             << ", worst block deviation " << worst << " se, exceedances beyond 1024: " << late;
  });

  criterion(5, "tail-integral expectations", 0.0, [](Outcome& o) {
    double worst = 0.0;
    std::size_t cells = 0;
    for (const auto& name : fixture_names()) {
      const Fixture f = load_fixture(name);
      std::vector<ScalarFunction> hs{power_fn(0.5), power_fn(1.0), power_fn(2.0), f.moment_g.as_function()};
      for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u, 17u, 64u, 255u, 1024u, 4096u}) {
        for (const CellRun& run : f.array.row(n)) {
          const TailFunction t = tail_of(run.dist);
          if (!t.is_discrete()) continue;
          for (const auto& h : hs) {
            double direct = 0.0;
            for (const Atom& a : t.atoms()) direct += a.prob * h.f(a.magnitude);
            for (double A : {0.0, 0.5, 1.0, 3.0, 100.0}) {
              const auto e = expectation_via_tail(t, h, A);
              worst = std::max(worst, std::abs(e.value - direct) / std::max(1.0, std::abs(direct)));
            }
            ++cells;
          }
        }
      }
    }
    o.require(worst <= 1e-12, "atom sums within 1e-12");
    auto uni = TailFunction::analytic([](long double x) { return std::clamp(1.0 - double(x), 0.0, 1.0); }, 1.0, {1.0});
    const double u = expectation_via_tail(uni, power_fn(2.0)).value;
    o.require(std::abs(u - 1.0 / 3.0) <= 1e-9, "Uniform(0,1), h = x^2");
    double spread = 0.0;
    const auto par = tail_of(ParetoTail{3.0, 1.0});
    for (double A : {0.0, 0.5, 1.0, 2.0, 10.0, 1000.0})
      spread = std::max(spread, std::abs(expectation_via_tail(par, power_fn(2.0), A).value - 3.0));
    for (double A : {0.0, 0.3, 0.9, 5.0}) spread = std::max(spread, std::abs(expectation_via_tail(uni, power_fn(2.0), A).value - 1.0 / 3.0));
    o.require(spread <= 1e-9, "invariance in A");
    o.detail << cells << " cell/h pairs, worst relative error " << worst << ", uniform error " << std::abs(u - 1.0 / 3.0)
             << ", A spread " << spread;
  });

  criterion(6, "truncated moment inequalities", 0.0, [](Outcome& o) {
    std::size_t checks = 0, violations = 0, dominated = 0;
    for (const auto& name : fixture_names()) {
      const Fixture f = load_fixture(name);
      const DominationReport d = cesaro_domination(f);
      if (!d.valid) continue;
      ++dominated;
      DominationOptions opt;
      opt.grid = f.cesaro_closed ? dyadic_grid(0, 60) : d.grid;
      opt.n_sup = f.cesaro_closed ? kDefaultScanRows : kScanRows;
      std::vector<double> xs;
      for (int j = -2; j <= 14; ++j) xs.push_back(std::ldexp(1.0, j));
      for (double r : {0.5, 1.0, 2.0}) {
        for (const TruncatedBounds& b : truncated_moment_bounds(f.array, *d.cdf, r, xs, opt)) {
          const double x = b.x;
          ++checks;
          const bool le = b.lhs_le <= b.rhs_le * (1.0 + 1e-9) + 1e-12;
          const bool gt = b.lhs_gt <= b.rhs_gt * (1.0 + 1e-9) + 1e-12;
          if (!le || !gt) {
            ++violations;
            o.detail << "{" << name << " r=" << r << " x=" << x << ": " << b.lhs_le << " vs " << b.rhs_le << ", "
                     << b.lhs_gt << " vs " << b.rhs_gt << "} ";
          }
        }
      }
    }
    o.require(dominated >= 3, "at least three dominated fixtures");
    o.require(violations == 0, "zero violations");
    o.detail << dominated << " dominated fixtures, " << checks << " (r, x) pairs, " << violations << " violations";
  });

  criterion(7, "slowly varying machinery", 0.0, [](Outcome& o) {
    const std::vector<double> xs{std::ldexp(1.0, 20), std::ldexp(1.0, 400)};
    const auto r = conjugate_residual(SlowlyVaryingSpec::log_power(1.0), xs);
    o.require(r[1] < 0.03 && r[1] < r[0], "residual at 2^400 below 0.03 and below 2^20");
    const std::vector<SlowlyVaryingSpec> families{
        SlowlyVaryingSpec::constant_one(),
        SlowlyVaryingSpec::log_power(0.5),
        SlowlyVaryingSpec::log_power(-0.5),
        SlowlyVaryingSpec::loglog_power(1.0),
        SlowlyVaryingSpec::loglog_power(-1.0),
        SlowlyVaryingSpec::product({SlowlyVaryingSpec::log_power(0.5), SlowlyVaryingSpec::loglog_power(1.0)})};
    double worst = 0.0;
    for (const auto& L : families) {
      for (double lam : {0.5, 2.0, 10.0}) {
        const double x = std::ldexp(1.0, 60);
        worst = std::max(worst, std::abs(L(lam * x) / L(x) - 1.0));
      }
    }
    o.require(worst < 0.05, "max deviation at 2^60 below 0.05");
    o.detail << "residual " << r[0] << " -> " << r[1] << ", worst L(lx)/L(x) deviation " << worst;
  });

  criterion(8, "moment/UI/tail-rate round trip", 0.0, [](Outcome& o) {
    std::size_t counterexamples = 0, first_used = 0, second_used = 0, cases = 0, undecided = 0;
    const auto Lt = SlowlyVaryingSpec::constant_one().conjugate();
    for (const auto& name : fixture_names()) {
      const Fixture f = load_fixture(name);
      const MomentFunctionSpec T = MomentFunctionSpec::power_of(f.p);
      struct Case {
        const WeightScheme* w;
        std::optional<Functional> closed;
        double c0;
        std::function<double(long double)> ui_closed;
      };
      std::vector<Case> cs{{nullptr, f.cesaro_closed, 1.0, f.ui_cesaro_closed}};
      if (!f.weights.is_uniform()) cs.push_back({&f.weights, f.weighted_closed, f.c0_closed.value_or(0.0), f.ui_weighted_closed});
      for (const Case& c : cs) {
        ++cases;
        const WeightScheme w = c.w ? *c.w : WeightScheme::uniform(rows_n());
        DominationOptions dopt;
        std::vector<double> xgrid;
        if (c.closed) {
          dopt.closed_form = *c.closed;
          dopt.c0 = c.c0;
          dopt.grid = f.limit_grid;
          for (int j = 0; j <= 1020; ++j) xgrid.push_back(std::ldexp(1.0, j));
        } else {
          dopt.n_sup = kScanRows;
          dopt.grid = reliable_grid(f.array, kScanRows);
          // x P(X > x^(1/p)) needs x^(1/p) inside the covered range.
          for (double x = 1.0; std::pow(x, 1.0 / f.p) <= dopt.grid.back(); x *= 2.0) xgrid.push_back(x);
        }
        bool ui_decays = false;
        if (c.ui_closed) {
          UiOptions uo;
          uo.closed_form = c.ui_closed;
          uo.log2_grid = true;
          ui_decays = ui_check(f.array, c.w, T, f.ui_log2_grid, uo).decays;
        } else {
          UiOptions uo;
          uo.n_sup = kScanRows;
          const auto ui = ui_check(f.array, c.w, T, dyadic_grid(0, 40), uo);
          std::vector<double> prefix;
          for (std::size_t j = 0; j < ui.values.size() && ui.reliable[j]; ++j) prefix.push_back(ui.values[j]);
          ui_decays = decays(prefix);
        }
        const DominationReport d = construct_dominating_cdf(f.array, w, dopt);
        // A scanned tail is zero past the scanned rows, so finiteness only
        // counts when the block sum settles inside the reliable grid.
        bool moment = false;
        if (d.valid) {
          const Expectation m = moment_g(*d.cdf, T);
          moment = m.finite && (c.closed || m.cutoff <= dopt.grid.back());
          if (m.finite && !moment) ++undecided;
        }
        if (moment) {
          ++first_used;
          if (!ui_decays) {
            ++counterexamples;
            o.detail << "{" << name << ": moment finite but UI does not decay} ";
          }
        }
        if (ui_decays && d.valid) {
          ++second_used;
          const auto c32 = condition_3_2(*d.cdf, f.p, Lt, xgrid);
          if (!decays(c32)) {
            ++counterexamples;
            o.detail << "{" << name << ": UI decays but x P(X > x^(1/p)) ends at " << c32.back() << "} ";
          }
        }
      }
    }
    {
      // Identical Pareto(3) rows: E|Y| is finite, so the moment side must hold.
      ++cases;
      const ArraySpec par = ArraySpec::identical(ParetoTail{3.0, 1.0});
      const MomentFunctionSpec T = MomentFunctionSpec::power_of(1.0);
      DominationOptions dopt;
      dopt.n_sup = 16;
      const DominationReport d = construct_dominating_cdf(par, WeightScheme::uniform(rows_n()), dopt);
      UiOptions uo;
      uo.n_sup = 16;
      const auto ui = ui_check(par, nullptr, T, dyadic_grid(0, 40), uo);
      if (d.valid && moment_g(*d.cdf, T).finite) {
        ++first_used;
        if (!ui.decays) {
          ++counterexamples;
          o.detail << "{pareto-3: moment finite but UI does not decay} ";
        }
      } else {
        o.detail << "{pareto-3: " << d.reason << "} ";
      }
    }
    o.require(first_used >= 1, "moment implication exercised");
    o.require(counterexamples == 0, "zero counterexamples");
    o.detail << cases << " cases; moment implication exercised " << first_used
             << "x, tail-rate implication " << second_used << "x; " << undecided << " moment undecided beyond the scan; "
             << counterexamples << " counterexamples";
  });

  criterion(9, "normalizing-sequence checkers", 0.0, [](Outcome& o) {
    auto harmonic = [](double n) {
      long double h = 0.0L;
      for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) h += 1.0L / i;
      return static_cast<double>(h);
    };
    auto matches = [](const ConditionVerdict& v, const std::function<double(double)>& ref) {
      double worst = 0.0;
      for (std::size_t j = 0; j < v.evidence.size(); ++j)
        worst = std::max(worst, std::abs(v.evidence[j] - ref(v.evidence_x[j])) / ref(v.evidence_x[j]));
      return worst <= 1e-12 && !v.evidence.empty();
    };
    const auto w2 = b_regularity_wlln(NormalizingSequence::power(0.5));
    const auto w1 = b_regularity_wlln(NormalizingSequence::power(1.0));
    const auto l1 = b_regularity_l2(NormalizingSequence::power(1.0));
    const auto lh = b_regularity_l2(NormalizingSequence::power(2.0));
    auto one = [](double) { return 1.0; };
    o.require(w2.verdict == Verdict::holds && matches(w2, one), "b = n^2 holds with ratio 1");
    o.require(w1.verdict == Verdict::fails && matches(w1, harmonic), "b = n fails with ratio H_n");
    o.require(l1.verdict == Verdict::holds && matches(l1, one), "b = n holds with ratio 1 (second moments)");
    o.require(lh.verdict == Verdict::fails && matches(lh, harmonic), "b = sqrt n fails with ratio H_n");
    o.detail << "n^2 " << to_string(w2.verdict) << ", n " << to_string(w1.verdict) << " (max " << w1.value
             << "); second moments: n " << to_string(l1.verdict) << ", sqrt n " << to_string(lh.verdict) << " (max "
             << lh.value << ")";
  });

  criterion(10, "bitwise determinism of simulate", 0.0, [](Outcome& o) {
    const fs::path dir = fs::temp_directory_path() / ("sdlab-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string args = "simulate --fixture x2m-example --mode wlln --rows 2^6..2^12 --reps 500 --eps 0.1,0.5 --seed 7";
    std::vector<std::string> outs;
    int i = 0;
    for (unsigned t : {1u, 8u, 8u, 1u}) {
      const fs::path p = dir / ("run" + std::to_string(i++) + ".csv");
      o.require(run_sdlab(args + " --threads " + std::to_string(t) + " --out " + p.string()) == 0, "simulate exit 0");
      outs.push_back(slurp(p));
    }
    const bool same = std::all_of(outs.begin(), outs.end(), [&](const std::string& s) { return s == outs[0]; });
    o.require(!outs[0].empty() && same, "identical CSV bytes");
    const fs::path manifest = dir / "run0.csv.manifest.json";
    o.require(run_sdlab("replay " + manifest.string() + " --verify") == 0, "replay --verify");
    fs::remove_all(dir);
    o.detail << "4 runs (threads 1, 8, 8, 1), " << outs[0].size() << " bytes each, identical=" << same;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
