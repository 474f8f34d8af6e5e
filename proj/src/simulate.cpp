#include "sdlab/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sdlab/conditions.hpp"
#include "sdlab/moments.hpp"

namespace sdlab {

std::string to_string(Truncation t) {
  switch (t) {
    case Truncation::none: return "none";
    case Truncation::symmetric_clamp: return "symmetric-clamp";
    case Truncation::clamp_at_b: return "clamp-at-b";
    case Truncation::indicator_at_b: return "indicator-at-b";
  }
  return "none";
}

Truncation truncation_from_string(const std::string& s) {
  if (s == "none") return Truncation::none;
  if (s == "symmetric-clamp") return Truncation::symmetric_clamp;
  if (s == "clamp-at-b") return Truncation::clamp_at_b;
  if (s == "indicator-at-b") return Truncation::indicator_at_b;
  throw std::invalid_argument("unknown truncation flavor '" + s + "'");
}

std::vector<double> truncate(std::span<const double> values, Truncation flavor, double level) {
  if (!(level > 0.0)) throw std::invalid_argument("truncation level must be > 0");
  std::vector<double> out(values.begin(), values.end());
  switch (flavor) {
    case Truncation::none:
      break;
    case Truncation::symmetric_clamp:
    case Truncation::clamp_at_b:
      for (double& v : out) v = std::clamp(v, -level, level);
      break;
    case Truncation::indicator_at_b:
      for (double& v : out) {
        if (std::abs(v) > level) v = 0.0;
      }
      break;
  }
  return out;
}

double max_partial_sums(std::span<const double> row, std::span<const double> weights) {
  if (!weights.empty() && weights.size() != row.size()) {
    throw std::invalid_argument("max_partial_sums: weight length does not match the row");
  }
  double s = 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    s += weights.empty() ? row[i] : weights[i] * row[i];
    best = std::max(best, std::abs(s));
  }
  return best;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void SimPlan::validate() const {
  if (reps < 1) throw std::invalid_argument("plan needs at least one replication");
  if (rows.empty()) throw std::invalid_argument("plan needs at least one row");
  if (!std::is_sorted(rows.begin(), rows.end()) || rows.front() < 1) {
    throw std::invalid_argument("plan rows must be positive and ascending");
  }
  for (double e : eps) {
    if (!(e > 0.0)) throw std::invalid_argument("epsilon levels must be > 0");
  }
  if (truncation == Truncation::symmetric_clamp && !(clamp_level > 0.0)) {
    throw std::invalid_argument("symmetric clamp needs a positive level");
  }
}

namespace {

std::vector<double> expand(const std::vector<WeightRun>& runs, std::size_t k) {
  std::vector<double> out(k, 0.0);
  for (const WeightRun& r : runs) {
    for (std::size_t j = 0; j < r.count && r.first - 1 + j < k; ++j) out[r.first - 1 + j] = r.value;
  }
  return out;
}

void require_symmetric_row(const ArraySpec& arr, std::size_t n, const char* what) {
  auto check = [&](const DistSpec& d) {
    if (!is_symmetric(d)) {
      throw std::invalid_argument(std::string(what) + " is only available for symmetric cells (" + describe(d) + ")");
    }
  };
  if (arr.is_sequence()) {
    for (std::size_t i = 1; i <= arr.k(n); ++i) check(arr.sequence_term(i));
  } else {
    for (const CellRun& r : arr.row(n)) check(r.dist);
  }
}

// max_j |S_j| / b_n for one replication of row n.
double row_statistic(const SimPlan& plan, std::size_t n, std::size_t rep, const std::vector<double>& c, double bn) {
  std::vector<double> x = sample_row(plan.array, n, plan.seed, rep);
  switch (plan.truncation) {
    case Truncation::none: break;
    case Truncation::symmetric_clamp: x = truncate(x, plan.truncation, plan.clamp_level); break;
    default: x = truncate(x, plan.truncation, bn); break;
  }
  // Centering terms vanish for symmetric cells, which require_symmetric_row enforces.
  return max_partial_sums(x, c) / bn;
}

SimReport estimate_rows(const SimPlan& plan, const NormalizingSequence& b, const std::string& mode) {
  plan.validate();
  SimReport rep;
  rep.mode = mode;
  rep.seed = plan.seed;
  rep.reps = plan.reps;
  rep.normalization = b.tag();
  for (std::size_t n : plan.rows) {
    if (plan.center) require_symmetric_row(plan.array, n, "centering");
    const double bn = b(n);
    if (!(bn > 0.0)) throw std::domain_error("b_n must be positive");
    std::vector<double> c;
    if (plan.weights) c = expand(plan.weights->raw_row(n), plan.array.k(n));
    std::vector<double> stat(plan.reps);
    parallel_for(plan.reps, plan.threads, [&](std::size_t r) { stat[r] = row_statistic(plan, n, r, c, bn); });
    double mean = 0.0;
    for (double s : stat) mean += s;
    rep.rows.push_back({n, bn, mean / static_cast<double>(plan.reps)});
    for (double e : plan.eps) {
      std::size_t hits = 0;
      for (double s : stat) hits += s > e ? 1 : 0;
      const double ph = static_cast<double>(hits) / static_cast<double>(plan.reps);
      rep.cells.push_back({n, e, ph, std::sqrt(ph * (1.0 - ph) / static_cast<double>(plan.reps)), plan.reps, plan.seed});
    }
  }
  return rep;
}

double harmonic_block(std::size_t lo, std::size_t hi_exclusive) {
  long double s = 0.0L;
  for (std::size_t m = lo; m < hi_exclusive; ++m) s += 1.0L / static_cast<long double>(m);
  return static_cast<double>(s);
}

}  // namespace

SimReport wlln_estimate(const SimPlan& plan) { return estimate_rows(plan, plan.b, "wlln"); }

SimReport slln_series_estimate(const SimPlan& plan, const SlowlyVaryingSpec& L, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("slln_series_estimate: p must be > 0");
  const SlowlyVaryingSpec Lt = L.conjugate();
  const NormalizingSequence b = NormalizingSequence::power_with(p, Lt, NormalizingSequence::ConjugateForm::inner);
  SimReport rep = estimate_rows(plan, b, "slln-series");

  const std::size_t nr = plan.rows.size();
  std::vector<double> weight(nr);
  for (std::size_t k = 0; k < nr; ++k) {
    const std::size_t lo = plan.rows[k];
    std::size_t hi;
    if (k + 1 < nr) {
      hi = plan.rows[k + 1];
    } else if (nr > 1) {
      hi = lo + (plan.rows[k] - plan.rows[k - 1]) * lo / std::max<std::size_t>(plan.rows[k - 1], 1);
    } else {
      hi = 2 * lo;
    }
    weight[k] = harmonic_block(lo, std::max(hi, lo + 1));
  }
  for (std::size_t e = 0; e < plan.eps.size(); ++e) {
    double partial = 0.0;
    std::vector<double> contrib;
    for (std::size_t k = 0; k < nr; ++k) {
      const SimCell& c = rep.cells[k * plan.eps.size() + e];
      const double blk = c.p_hat * weight[k];
      partial += blk;
      contrib.push_back(blk);
      rep.series.push_back({c.n, c.eps, blk, partial});
    }
    std::string diag = "inconclusive";
    const DecayRule fade{1e-3, std::min<std::size_t>(3, contrib.size())};
    const double slope = envelope_slope(contrib, 1, std::min<std::size_t>(6, contrib.size()));
    if (decays(contrib, fade)) {
      diag = "bounded";
    } else if (std::isfinite(slope) && slope >= -0.25) {
      diag = "unbounded";
    }
    rep.diagnostics.emplace_back(plan.eps[e], diag);
  }
  return rep;
}

SimReport slln_path_diagnostic(const SimPlan& plan) {
  plan.validate();
  if (!plan.array.is_sequence()) throw std::invalid_argument("path diagnostic needs a sequence-shaped array");
  const std::size_t nmax = plan.rows.back();
  const std::size_t nr = plan.rows.size();
  std::vector<double> bn(nr);
  for (std::size_t k = 0; k < nr; ++k) bn[k] = plan.b(plan.rows[k]);

  // Dyadic blocks [2^j, 2^{j+1} - 1] clipped to [1, nmax].
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t lo = 1; lo <= nmax; lo <<= 1) blocks.emplace_back(lo, std::min(2 * lo - 1, nmax));
  std::vector<double> b_all(nmax + 1);
  for (std::size_t i = 1; i <= nmax; ++i) b_all[i] = plan.b(i);

  std::vector<std::vector<double>> tail_sup(plan.reps, std::vector<double>(nr));
  std::vector<std::vector<double>> counts(plan.reps, std::vector<double>(blocks.size()));
  parallel_for(plan.reps, plan.threads, [&](std::size_t r) {
    std::vector<double> x = sample_row(plan.array, nmax, plan.seed, r);
    if (plan.truncation == Truncation::symmetric_clamp) x = truncate(x, plan.truncation, plan.clamp_level);
    std::vector<double> stat(nr);
    double s = 0.0, best = 0.0;
    std::size_t k = 0, blk = 0;
    for (std::size_t i = 1; i <= nmax; ++i) {
      const double xi = x[i - 1];
      while (i > blocks[blk].second) ++blk;
      if (std::abs(xi) > b_all[i]) counts[r][blk] += 1.0;
      s += xi;
      best = std::max(best, std::abs(s));
      while (k < nr && plan.rows[k] == i) {
        stat[k] = best / bn[k];
        ++k;
      }
    }
    double run = 0.0;
    for (std::size_t q = nr; q-- > 0;) {
      run = std::max(run, stat[q]);
      tail_sup[r][q] = run;
    }
  });

  SimReport rep;
  rep.mode = "slln-path";
  rep.seed = plan.seed;
  rep.reps = plan.reps;
  rep.normalization = plan.b.tag();
  const double R = static_cast<double>(plan.reps);
  for (std::size_t k = 0; k < nr; ++k) {
    double mean = 0.0;
    for (std::size_t r = 0; r < plan.reps; ++r) mean += tail_sup[r][k];
    rep.rows.push_back({plan.rows[k], bn[k], mean / R});
    for (double e : plan.eps) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < plan.reps; ++r) hits += tail_sup[r][k] >= e ? 1 : 0;
      const double ph = static_cast<double>(hits) / R;
      rep.cells.push_back({plan.rows[k], e, ph, std::sqrt(ph * (1.0 - ph) / R), plan.reps, plan.seed});
    }
  }
  for (std::size_t e = 0; e < plan.eps.size(); ++e) {
    const double frac = 1.0 - rep.cells[(nr - 1) * plan.eps.size() + e].p_hat;
    std::ostringstream os;
    os << std::setprecision(17) << frac;
    rep.diagnostics.emplace_back(plan.eps[e], os.str());
  }
  for (std::size_t q = 0; q < blocks.size(); ++q) {
    ExceedanceBlock eb;
    eb.lo = blocks[q].first;
    eb.hi = blocks[q].second;
    double var = 0.0;
    for (std::size_t i = eb.lo; i <= eb.hi; ++i) {
      const double pr = tail_prob(plan.array.sequence_term(i), b_all[i]);
      eb.expected += R * pr;
      var += R * pr * (1.0 - pr);
    }
    for (std::size_t r = 0; r < plan.reps; ++r) eb.observed += counts[r][q];
    eb.se = std::sqrt(var);
    rep.exceedances.push_back(eb);
  }
  return rep;
}

HProbe condition_H_probe(const ArraySpec& arr, double a, std::size_t n, std::size_t R, std::uint64_t seed,
                         unsigned threads) {
  if (!(a > 0.0)) throw std::invalid_argument("condition_H_probe: a must be > 0");
  if (n < 1 || R < 1) throw std::invalid_argument("condition_H_probe: n and R must be >= 1");
  require_symmetric_row(arr, n, "condition (H) probe centering");
  ScalarFunction h;
  h.f = [a](double x) { return std::min(x, a) * std::min(x, a); };
  h.df = [a](double x) { return x < a ? 2.0 * x : 0.0; };
  h.kinks = {a};
  h.label = "min(x, a)^2";

  HProbe out;
  long double rhs = 0.0L;
  if (arr.is_sequence()) {
    for (std::size_t i = 1; i <= n; ++i) rhs += cell_expectation(arr.sequence_term(i), h).value;
  } else {
    for (const CellRun& r : arr.row(n)) rhs += static_cast<long double>(r.count) * cell_expectation(r.dist, h).value;
  }
  out.rhs = static_cast<double>(rhs);
  if (!(out.rhs > 0.0)) throw std::domain_error("condition_H_probe: all clamped cells vanish");

  std::vector<double> sq(R);
  parallel_for(R, threads, [&](std::size_t r) {
    const std::vector<double> x = truncate(sample_row(arr, n, seed, r), Truncation::symmetric_clamp, a);
    const double m = max_partial_sums(x);
    sq[r] = m * m;
  });
  double mean = 0.0;
  for (double v : sq) mean += v;
  mean /= static_cast<double>(R);
  double var = 0.0;
  for (double v : sq) var += (v - mean) * (v - mean);
  out.lhs = mean;
  out.lhs_se = R > 1 ? std::sqrt(var / static_cast<double>(R - 1) / static_cast<double>(R)) : 0.0;
  out.c_hat = out.lhs / out.rhs;
  return out;
}

std::string to_csv(const SimReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "n,epsilon,p_hat,se,R,seed\n";
  for (const SimCell& c : r.cells) {
    os << c.n << ',' << c.eps << ',' << c.p_hat << ',' << c.se << ',' << c.reps << ',' << c.seed << '\n';
  }
  return os.str();
}

}  // namespace sdlab
