#include "sdlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sdlab/rng.hpp"

namespace sdlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_dist(const DistSpec& d) {
  std::visit(overloaded{
                 [](const SymmetricTwoPoint& s) {
                   if (!(s.magnitude > 0.0)) throw std::invalid_argument("two-point magnitude must be > 0");
                   if (!(s.prob > 0.0 && s.prob <= 1.0)) throw std::invalid_argument("two-point prob must be in (0,1]");
                 },
                 [](const SymmetricPM1&) {},
                 [](const ParetoTail& p) {
                   if (!(p.alpha > 0.0)) throw std::invalid_argument("pareto alpha must be > 0");
                   if (!(p.cutoff >= 1.0)) throw std::invalid_argument("pareto cutoff must be >= 1");
                 },
                 [](const CustomDist&) {},
             },
             d);
}

}  // namespace

// ---------------------------------------------------------------- TailFunction

TailFunction TailFunction::analytic(std::function<double(long double)> eval, std::optional<double> support_hint,
                                    std::vector<double> breakpoints) {
  if (!eval) throw std::invalid_argument("analytic tail needs a callable");
  TailFunction t;
  t.kind_ = Kind::analytic;
  t.eval_ = std::move(eval);
  t.support_ = support_hint;
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  t.breakpoints_ = std::move(breakpoints);
  return t;
}

TailFunction TailFunction::step(std::function<double(long double)> eval, BreakpointFn jumps,
                                std::optional<double> support_hint) {
  if (!eval || !jumps) throw std::invalid_argument("step tail needs a callable and a jump enumerator");
  TailFunction t;
  t.kind_ = Kind::step;
  t.eval_ = std::move(eval);
  t.jumps_ = std::move(jumps);
  t.support_ = support_hint;
  return t;
}

TailFunction TailFunction::piecewise(std::vector<Atom> atoms) {
  TailFunction t;
  t.kind_ = Kind::piecewise;
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.magnitude < b.magnitude; });
  for (const Atom& a : atoms) {
    if (a.magnitude < 0.0) throw std::invalid_argument("atom magnitudes must be >= 0");
    if (a.prob < 0.0) throw std::invalid_argument("atom probabilities must be >= 0");
    if (a.prob == 0.0) continue;
    if (!t.atoms_.empty() && t.atoms_.back().magnitude == a.magnitude) {
      t.atoms_.back().prob += a.prob;
    } else {
      t.atoms_.push_back(a);
    }
  }
  t.suffix_.assign(t.atoms_.size() + 1, 0.0);
  for (std::size_t j = t.atoms_.size(); j-- > 0;) t.suffix_[j] = t.suffix_[j + 1] + t.atoms_[j].prob;
  if (!t.atoms_.empty()) t.support_ = t.atoms_.back().magnitude;
  return t;
}

TailFunction TailFunction::empirical(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical tail needs samples");
  std::vector<Atom> atoms;
  atoms.reserve(samples.size());
  const double w = 1.0 / static_cast<double>(samples.size());
  for (double s : samples) atoms.push_back({std::abs(s), w});
  TailFunction t = piecewise(std::move(atoms));
  t.kind_ = Kind::empirical;
  return t;
}

double TailFunction::operator()(long double x) const {
  if (kind_ == Kind::analytic || kind_ == Kind::step) {
    if (x < 0.0) return 1.0;
    if (support_ && x > *support_) return 0.0;
    return std::clamp(eval_(x), 0.0, 1.0);
  }
  if (x < 0.0) return std::min(1.0, suffix_.front());
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x,
                             [](long double v, const Atom& a) { return v < a.magnitude; });
  return std::clamp(suffix_[static_cast<std::size_t>(it - atoms_.begin())], 0.0, 1.0);
}

std::vector<double> TailFunction::breakpoints_in(double lo, double hi) const {
  std::vector<double> out;
  if (kind_ == Kind::step) return jumps_(lo, hi);
  if (kind_ == Kind::analytic) {
    for (double b : breakpoints_) {
      if (b >= lo && b <= hi) out.push_back(b);
    }
    return out;
  }
  for (const Atom& a : atoms_) {
    if (a.magnitude >= lo && a.magnitude <= hi) out.push_back(a.magnitude);
  }
  return out;
}

// -------------------------------------------------------------------- DistSpec

TailFunction tail_of(const DistSpec& spec) {
  validate_dist(spec);
  return std::visit(
      overloaded{
          [](const SymmetricTwoPoint& s) {
            return TailFunction::piecewise({{0.0, 1.0 - s.prob}, {s.magnitude, s.prob}});
          },
          [](const SymmetricPM1&) { return TailFunction::piecewise({{1.0, 1.0}}); },
          [](const ParetoTail& p) {
            const double alpha = p.alpha;
            const double c = p.cutoff;
            return TailFunction::analytic(
                [alpha, c](long double x) {
                  return x < c ? 1.0 : static_cast<double>(std::pow(x / c, static_cast<long double>(-alpha)));
                },
                std::nullopt, {c});
          },
          [](const CustomDist& c) { return c.tail; },
      },
      spec);
}

double tail_prob(const DistSpec& spec, long double x) {
  if (x < 0.0) return 1.0;
  return std::visit(overloaded{
                        [x](const SymmetricTwoPoint& s) { return s.magnitude > x ? s.prob : 0.0; },
                        [x](const SymmetricPM1&) { return 1.0 > x ? 1.0 : 0.0; },
                        [x](const ParetoTail& p) {
                          if (x < p.cutoff) return 1.0;
                          return static_cast<double>(std::pow(x / p.cutoff, static_cast<long double>(-p.alpha)));
                        },
                        [x](const CustomDist& c) { return c.tail(x); },
                    },
                    spec);
}

double quantile(const DistSpec& spec, double u) {
  return std::visit(overloaded{
                        [u](const SymmetricTwoPoint& s) {
                          if (u < 0.5 * s.prob) return -s.magnitude;
                          if (u < 1.0 - 0.5 * s.prob) return 0.0;
                          return s.magnitude;
                        },
                        [u](const SymmetricPM1&) { return u < 0.5 ? -1.0 : 1.0; },
                        [u](const ParetoTail& p) {
                          if (u < 0.5) return -p.cutoff * std::pow(2.0 * u, -1.0 / p.alpha);
                          return p.cutoff * std::pow(2.0 * (1.0 - u), -1.0 / p.alpha);
                        },
                        [u](const CustomDist& c) {
                          if (!c.quantile) throw std::logic_error("custom distribution '" + c.label + "' has no quantile");
                          return c.quantile(u);
                        },
                    },
                    spec);
}

bool is_symmetric(const DistSpec& spec) {
  if (const auto* c = std::get_if<CustomDist>(&spec)) return c->symmetric;
  return true;
}

bool is_discrete(const DistSpec& spec) {
  if (std::holds_alternative<ParetoTail>(spec)) return false;
  if (const auto* c = std::get_if<CustomDist>(&spec)) return c->tail.is_discrete();
  return true;
}

double max_magnitude(const DistSpec& spec) {
  return std::visit(overloaded{
                        [](const SymmetricTwoPoint& s) { return s.magnitude; },
                        [](const SymmetricPM1&) { return 1.0; },
                        [](const ParetoTail&) { return kInf; },
                        [](const CustomDist& c) {
                          if (c.tail.support_hint()) return *c.tail.support_hint();
                          return kInf;
                        },
                    },
                    spec);
}

std::string describe(const DistSpec& spec) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const SymmetricTwoPoint& s) { os << "+-" << s.magnitude << " w.p. " << s.prob; },
                 [&](const SymmetricPM1&) { os << "+-1"; },
                 [&](const ParetoTail& p) { os << "pareto(alpha=" << p.alpha << ", cutoff=" << p.cutoff << ")"; },
                 [&](const CustomDist& c) { os << c.label; },
             },
             spec);
  return os.str();
}

DistSpec point_mass_zero() {
  CustomDist d;
  d.tail = TailFunction::piecewise({{0.0, 1.0}});
  d.quantile = [](double) { return 0.0; };
  d.mean = 0.0;
  d.symmetric = true;
  d.label = "zero";
  return d;
}

DistSpec discrete_dist(std::vector<std::pair<double, double>> signed_atoms, std::string label) {
  if (signed_atoms.empty()) throw std::invalid_argument("discrete distribution needs atoms");
  std::sort(signed_atoms.begin(), signed_atoms.end());
  double total = 0.0;
  double mean = 0.0;
  std::vector<Atom> abs_atoms;
  for (const auto& [v, p] : signed_atoms) {
    if (p < 0.0) throw std::invalid_argument("atom probabilities must be >= 0");
    total += p;
    mean += v * p;
    abs_atoms.push_back({std::abs(v), p});
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("atom probabilities must sum to 1");

  bool symmetric = true;
  for (const auto& [v, p] : signed_atoms) {
    double mirror = 0.0;
    for (const auto& [w, q] : signed_atoms) {
      if (w == -v) mirror += q;
    }
    double self = 0.0;
    for (const auto& [w, q] : signed_atoms) {
      if (w == v) self += q;
    }
    if (std::abs(mirror - self) > 1e-15) symmetric = false;
  }

  std::vector<double> values, cumulative;
  double acc = 0.0;
  for (const auto& [v, p] : signed_atoms) {
    acc += p;
    values.push_back(v);
    cumulative.push_back(acc);
  }
  CustomDist d;
  d.tail = TailFunction::piecewise(std::move(abs_atoms));
  d.quantile = [values, cumulative](double u) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), values.size() - 1);
    return values[idx];
  };
  d.mean = symmetric ? 0.0 : mean;
  d.symmetric = symmetric;
  d.label = std::move(label);
  return d;
}

// ------------------------------------------------------------------- ArraySpec

ArraySpec ArraySpec::from_runs(RowLength k, std::function<std::vector<CellRun>(std::size_t)> runs, bool mean_zero,
                               RowDependence dependence) {
  if (!k || !runs) throw std::invalid_argument("array spec needs k and runs");
  ArraySpec a;
  a.k_ = std::move(k);
  a.runs_ = std::move(runs);
  a.mean_zero_ = mean_zero;
  a.dependence_ = dependence;
  return a;
}

ArraySpec ArraySpec::from_cells(RowLength k, std::function<DistSpec(std::size_t, std::size_t)> cell, bool mean_zero,
                                RowDependence dependence) {
  if (!k || !cell) throw std::invalid_argument("array spec needs k and cell");
  RowLength kk = k;
  auto runs = [kk, cell](std::size_t n) {
    std::vector<CellRun> out;
    const std::size_t kn = kk(n);
    out.reserve(kn);
    for (std::size_t i = 1; i <= kn; ++i) out.push_back({i, 1, cell(n, i)});
    return out;
  };
  return from_runs(std::move(k), runs, mean_zero, dependence);
}

ArraySpec ArraySpec::sequence(std::function<DistSpec(std::size_t)> x, bool mean_zero, RowDependence dependence) {
  if (!x) throw std::invalid_argument("sequence spec needs a term function");
  auto runs = [x](std::size_t n) {
    std::vector<CellRun> out;
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back({i, 1, x(i)});
    return out;
  };
  ArraySpec a = from_runs([](std::size_t n) { return n; }, runs, mean_zero, dependence);
  a.sequence_ = std::move(x);
  return a;
}

ArraySpec ArraySpec::identical(DistSpec dist, RowLength k, RowDependence dependence) {
  validate_dist(dist);
  if (!k) k = [](std::size_t n) { return n; };
  RowLength kk = k;
  auto runs = [kk, dist](std::size_t n) { return std::vector<CellRun>{{1, kk(n), dist}}; };
  return from_runs(std::move(k), runs, is_symmetric(dist), dependence);
}

std::size_t ArraySpec::k(std::size_t n) const {
  if (n == 0) throw std::out_of_range("row index must be >= 1");
  const std::size_t kn = k_(n);
  if (kn == 0) throw std::invalid_argument("row length k_n must be >= 1");
  return kn;
}

std::vector<CellRun> ArraySpec::row(std::size_t n) const {
  if (n == 0) throw std::out_of_range("row index must be >= 1");
  if (declared_rows_ && n > *declared_rows_) throw std::out_of_range("row beyond declared range");
  const std::size_t kn = k(n);
  std::vector<CellRun> runs = runs_(n);
  std::size_t next = 1;
  for (const CellRun& r : runs) {
    if (r.first != next || r.count == 0) throw std::invalid_argument("cell runs must tile 1..k_n");
    validate_dist(r.dist);
    if (mean_zero_) {
      if (const auto* c = std::get_if<CustomDist>(&r.dist)) {
        if (!c->symmetric && !(c->mean && std::abs(*c->mean) < 1e-12)) {
          throw std::invalid_argument("mean-zero array has a custom cell without declared zero mean");
        }
      }
    }
    next += r.count;
  }
  if (next != kn + 1) throw std::invalid_argument("cell runs must tile 1..k_n");
  return runs;
}

DistSpec ArraySpec::cell(std::size_t n, std::size_t i) const {
  if (sequence_) {
    if (i == 0 || i > n) throw std::out_of_range("cell index outside 1..k_n");
    return sequence_(i);
  }
  for (const CellRun& r : row(n)) {
    if (i >= r.first && i < r.first + r.count) return r.dist;
  }
  throw std::out_of_range("cell index outside 1..k_n");
}

DistSpec ArraySpec::sequence_term(std::size_t i) const {
  if (!sequence_) throw std::logic_error("array is not sequence-shaped");
  if (i == 0) throw std::out_of_range("sequence index must be >= 1");
  return sequence_(i);
}

ArraySpec ArraySpec::with_declared_rows(std::size_t rows) const {
  ArraySpec a = *this;
  a.declared_rows_ = rows;
  return a;
}

// ---------------------------------------------------------------- WeightScheme

WeightScheme WeightScheme::uniform(RowLength k) {
  if (!k) throw std::invalid_argument("weight scheme needs k");
  WeightScheme w;
  w.kind_ = Kind::uniform;
  RowLength kk = k;
  w.k_ = std::move(k);
  w.runs_ = [kk](std::size_t n) {
    const std::size_t kn = kk(n);
    return std::vector<WeightRun>{{1, kn, 1.0 / static_cast<double>(kn)}};
  };
  return w;
}

WeightScheme WeightScheme::explicit_runs(RowLength k, std::function<std::vector<WeightRun>(std::size_t)> a) {
  if (!k || !a) throw std::invalid_argument("weight scheme needs k and runs");
  WeightScheme w;
  w.kind_ = Kind::explicit_weights;
  w.k_ = std::move(k);
  w.runs_ = std::move(a);
  return w;
}

WeightScheme WeightScheme::from_c(RowLength k, std::function<std::vector<WeightRun>(std::size_t)> c, Kind flavor) {
  if (flavor != Kind::c_normalized_sum && flavor != Kind::c_normalized_squares) {
    throw std::invalid_argument("from_c needs a c-normalized flavor");
  }
  WeightScheme w = explicit_runs(std::move(k), std::move(c));
  w.kind_ = flavor;
  return w;
}

std::size_t WeightScheme::k(std::size_t n) const {
  if (n == 0) throw std::out_of_range("row index must be >= 1");
  return k_(n);
}

std::vector<WeightRun> WeightScheme::raw_row(std::size_t n) const {
  if (n == 0) throw std::out_of_range("row index must be >= 1");
  if (declared_rows_ && n > *declared_rows_) throw std::out_of_range("row beyond declared range");
  const std::size_t kn = k(n);
  std::vector<WeightRun> runs = runs_(n);
  std::size_t next = 1;
  for (const WeightRun& r : runs) {
    if (r.first != next || r.count == 0) throw std::invalid_argument("weight runs must tile 1..k_n");
    if (!(r.value >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    next += r.count;
  }
  if (next != kn + 1) throw std::invalid_argument("weight runs must tile 1..k_n");
  return runs;
}

double WeightScheme::normalizer(std::size_t n) const {
  if (kind_ != Kind::c_normalized_sum && kind_ != Kind::c_normalized_squares) return 1.0;
  double A = 0.0;
  for (const WeightRun& r : raw_row(n)) {
    const double v = kind_ == Kind::c_normalized_sum ? r.value : r.value * r.value;
    A += v * static_cast<double>(r.count);
  }
  return A;
}

std::vector<WeightRun> WeightScheme::row(std::size_t n) const {
  std::vector<WeightRun> runs = raw_row(n);
  if (kind_ == Kind::c_normalized_sum || kind_ == Kind::c_normalized_squares) {
    const double A = normalizer(n);
    if (!(A > 0.0)) throw std::domain_error("normalizer A_n must be positive");
    for (WeightRun& r : runs) {
      r.value = (kind_ == Kind::c_normalized_sum ? r.value : r.value * r.value) / A;
    }
  }
  return runs;
}

double WeightScheme::a(std::size_t n, std::size_t i) const {
  for (const WeightRun& r : row(n)) {
    if (i >= r.first && i < r.first + r.count) return r.value;
  }
  throw std::out_of_range("weight index outside 1..k_n");
}

double WeightScheme::row_weight_sum(std::size_t n) const {
  double s = 0.0;
  for (const WeightRun& r : row(n)) s += r.value * static_cast<double>(r.count);
  return s;
}

SupScan WeightScheme::c0(std::size_t n_sup) const {
  if (declared_rows_) n_sup = std::min(n_sup, *declared_rows_);
  SupScan s;
  s.scan_n = n_sup;
  for (std::size_t n = 1; n <= n_sup; ++n) {
    const double v = row_weight_sum(n);
    if (n == 1 || v > s.value) {
      s.value = v;
      s.argmax_n = n;
    }
  }
  s.at_edge = s.argmax_n == n_sup && n_sup > 1;
  if (!(s.value > 0.0) || !std::isfinite(s.value)) throw std::domain_error("C0 must lie in (0, inf)");
  return s;
}

bool WeightScheme::normalizer_growth_ok(double C, std::size_t n_sup) const {
  for (std::size_t n = 1; n <= n_sup; ++n) {
    const double A = normalizer(n);
    if (!(A > 0.0) || A > C * static_cast<double>(n)) return false;
  }
  return true;
}

WeightScheme WeightScheme::with_declared_rows(std::size_t rows) const {
  WeightScheme w = *this;
  w.declared_rows_ = rows;
  return w;
}

double row_weight_sum(const WeightScheme& w, std::size_t n) { return w.row_weight_sum(n); }

// --------------------------------------------------------- NormalizingSequence

NormalizingSequence NormalizingSequence::power(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("power normalization needs p > 0");
  NormalizingSequence b;
  b.b_ = [p](std::size_t n) { return std::pow(static_cast<double>(n), 1.0 / p); };
  b.extended_ = [p](long double k) { return std::pow(k, 1.0L / p); };
  b.tag_ = "n^(1/" + std::to_string(p) + ")";
  b.p_ = p;
  return b;
}

NormalizingSequence NormalizingSequence::power_with(double p, const SlowlyVaryingSpec& Ltilde, ConjugateForm form) {
  if (!(p > 0.0)) throw std::invalid_argument("power normalization needs p > 0");
  NormalizingSequence b;
  if (form == ConjugateForm::inner) {
    b.b_ = [p, Ltilde](std::size_t n) {
      const double r = std::pow(static_cast<double>(n), 1.0 / p);
      return r * Ltilde(r);
    };
    b.extended_ = [p, Ltilde](long double k) {
      const long double r = std::pow(k, 1.0L / p);
      return r * Ltilde(static_cast<double>(std::min<long double>(r, std::numeric_limits<double>::max())));
    };
    b.tag_ = "n^(1/p) Lt(n^(1/p)), p=" + std::to_string(p) + ", Lt=" + Ltilde.describe();
  } else {
    b.b_ = [p, Ltilde](std::size_t n) {
      const double x = static_cast<double>(n);
      return std::pow(x, 1.0 / p) * std::pow(Ltilde(x), 1.0 / p);
    };
    b.extended_ = [p, Ltilde](long double k) {
      const double kd = static_cast<double>(std::min<long double>(k, std::numeric_limits<double>::max()));
      return std::pow(k, 1.0L / p) * std::pow(static_cast<long double>(Ltilde(kd)), 1.0L / p);
    };
    b.tag_ = "n^(1/p) Lt(n)^(1/p), p=" + std::to_string(p) + ", Lt=" + Ltilde.describe();
  }
  b.p_ = p;
  return b;
}

NormalizingSequence NormalizingSequence::custom(std::function<double(std::size_t)> fn, std::string tag) {
  if (!fn) throw std::invalid_argument("custom normalization needs a callable");
  NormalizingSequence b;
  b.b_ = std::move(fn);
  b.tag_ = std::move(tag);
  return b;
}

double NormalizingSequence::operator()(std::size_t n) const {
  if (n == 0) return 0.0;
  return b_(n);
}

long double NormalizingSequence::at(long double k) const {
  if (k <= 0.0L) return 0.0L;
  if (extended_) return extended_(k);
  if (k > 9.0e18L) throw std::out_of_range("custom normalizing sequence queried beyond the integer range");
  return b_(static_cast<std::size_t>(std::llround(k)));
}

// -------------------------------------------------------------------- sampling

std::vector<double> sample_row(const ArraySpec& arr, std::size_t n, std::uint64_t seed, std::uint64_t replication) {
  StreamRng rng(seed, n, replication);
  const std::size_t kn = arr.k(n);
  std::vector<double> out;
  out.reserve(kn);

  auto draw = [&](const DistSpec& d, double u) {
    if (const auto* c = std::get_if<CustomDist>(&d); c && !c->quantile) {
      throw std::invalid_argument("sample_row: custom cell '" + c->label + "' has no quantile function");
    }
    return quantile(d, u);
  };

  if (std::holds_alternative<Independent>(arr.dependence())) {
    if (arr.is_sequence()) {
      for (std::size_t i = 1; i <= kn; ++i) out.push_back(draw(arr.sequence_term(i), rng.uniform()));
      return out;
    }
    for (const CellRun& r : arr.row(n)) {
      for (std::size_t j = 0; j < r.count; ++j) out.push_back(draw(r.dist, rng.uniform()));
    }
    return out;
  }

  const double rho = std::get<GaussianNA>(arr.dependence()).correlation;
  if (rho > 0.0 || rho < -0.5) {
    throw std::invalid_argument("gaussian NA rows need adjacent correlation in [-0.5, 0]");
  }
  // Z_i = (W_i + theta W_{i+1}) / sqrt(1 + theta^2) has corr(Z_i, Z_{i+1}) = rho.
  const double theta = rho == 0.0 ? 0.0 : (1.0 - std::sqrt(1.0 - 4.0 * rho * rho)) / (2.0 * rho);
  const double scale = 1.0 / std::sqrt(1.0 + theta * theta);
  std::normal_distribution<double> normal;
  std::vector<double> w(kn + 1);
  for (double& v : w) v = normal(rng);

  std::vector<CellRun> runs;
  if (!arr.is_sequence()) runs = arr.row(n);
  std::size_t run_idx = 0;
  for (std::size_t i = 1; i <= kn; ++i) {
    const double z = (w[i - 1] + theta * w[i]) * scale;
    double u = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    u = std::clamp(u, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
    if (arr.is_sequence()) {
      out.push_back(draw(arr.sequence_term(i), u));
    } else {
      while (i >= runs[run_idx].first + runs[run_idx].count) ++run_idx;
      out.push_back(draw(runs[run_idx].dist, u));
    }
  }
  return out;
}

// ----------------------------------------------------------------------- misc

bool decays(std::span<const double> values, const DecayRule& rule) {
  if (values.size() < rule.window || rule.window == 0) return false;
  const std::size_t start = values.size() - rule.window;
  for (std::size_t j = start; j < values.size(); ++j) {
    if (!(values[j] < rule.eps_lim)) return false;
    if (j > start && values[j] > values[j - 1]) return false;
  }
  return true;
}

std::vector<double> dyadic_grid(int j0, int j1) {
  std::vector<double> g;
  for (int j = j0; j <= j1; ++j) g.push_back(std::ldexp(1.0, j));
  return g;
}

}  // namespace sdlab
