#include "sdlab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sdlab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double envelope_slope(std::span<const double> v, int j0, std::size_t window) {
  if (window < 2 || v.size() < window) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t start = v.size() - window;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = start; k < v.size(); ++k) {
    const double j = static_cast<double>(j0) + static_cast<double>(k);
    if (j < 1.0 || !(v[k] > 0.0) || !std::isfinite(v[k])) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(j);
    const double y = std::log(j * v[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(window);
  const double den = m * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / den;
}

namespace {

std::string envelope_rule_text(const IntegralRule& r) {
  std::ostringstream os;
  os << "holds: a dyadic block < " << r.quad.block_tol << " at a reliable point; fails: slope of log(j b_j) vs log j >= "
     << r.flat_slope << " over the last " << r.fit_blocks << " blocks; otherwise inconclusive";
  return os.str();
}

ConditionVerdict integral_verdict(const Functional& G, double p, const SlowlyVaryingSpec& L, const IntegralRule& rule) {
  ConditionVerdict v;
  v.name = "chandra-ghosal integral";
  v.rule = envelope_rule_text(rule);
  if (p < 1.0 || p >= 2.0) v.note = "p outside [1, 2); evaluated anyway";

  Integrand f = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, p - 1.0) * std::pow(L(x), p) * G(static_cast<long double>(x));
  };
  BreakpointFn breaks = [&](double lo, double hi) { return G.jumps(lo, hi); };

  double total = integrate_segment(f, 0.0, 1.0, G.jumps(0.0, 1.0), rule.quad);
  std::vector<double> blocks;
  bool certified = false;
  for (int j = 0; j < rule.quad.max_blocks; ++j) {
    const double lo = std::ldexp(1.0, j);
    const double hi = std::ldexp(1.0, j + 1);
    const double b = integrate_segment(f, lo, hi, breaks(lo, hi), rule.quad);
    blocks.push_back(b);
    v.evidence_x.push_back(j);
    v.evidence.push_back(b);
    total += b;
    if (!std::isfinite(b)) break;
    if (b < rule.quad.block_tol && G.eval(lo).reliable()) {
      certified = true;
      break;
    }
  }
  v.value = total;
  if (certified) {
    v.verdict = Verdict::holds;
    return v;
  }
  v.value_finite = false;
  const double slope = envelope_slope(blocks, 0, rule.fit_blocks);
  if (!std::isfinite(blocks.back()) || (std::isfinite(slope) && slope >= rule.flat_slope)) {
    v.verdict = Verdict::fails;
  }
  std::ostringstream os;
  if (!v.note.empty()) os << v.note << "; ";
  os << "envelope slope " << slope << ", partial value " << total << " up to x = 2^" << blocks.size();
  v.note = os.str();
  return v;
}

std::size_t first_power_at_least(std::size_t n) {
  std::size_t k = 1;
  while (k < n) k <<= 1;
  return k;
}

ConditionVerdict regularity(const NormalizingSequence& b, std::size_t N, const PlateauRule& rule, bool squared,
                            std::string name) {
  if (N < 4) throw std::invalid_argument("b-regularity needs N >= 4");
  ConditionVerdict v;
  v.name = std::move(name);
  std::vector<double> ratio(N + 1, 0.0);
  long double sum = 0.0L;
  double prev_b = 0.0;
  bool monotone_b = true;
  for (std::size_t n = 1; n <= N; ++n) {
    const double bn = b(n);
    if (!(bn > 0.0)) throw std::domain_error("normalizing sequence must be positive");
    if (bn < prev_b) monotone_b = false;
    prev_b = bn;
    const long double nn = static_cast<long double>(n);
    const long double bb = squared ? static_cast<long double>(bn) * bn : bn;
    sum += bb / (nn * nn);
    ratio[n] = static_cast<double>(sum / (bb / nn));
  }
  const std::size_t half = N / 2;
  const double m1 = *std::max_element(ratio.begin() + 1, ratio.begin() + half + 1);
  const double m2 = *std::max_element(ratio.begin() + half + 1, ratio.end());
  bool increasing = true;
  for (std::size_t n = half + 1; n <= N; ++n) {
    if (!(ratio[n] > ratio[n - 1])) {
      increasing = false;
      break;
    }
  }
  v.value = std::max(m1, m2);
  if (m2 <= (1.0 + rule.tolerance) * m1) {
    v.verdict = Verdict::holds;
  } else if (increasing && ratio[N] > (1.0 + rule.tolerance) * ratio[half]) {
    v.verdict = Verdict::fails;
  }
  std::ostringstream os;
  os << "holds: max ratio over (N/2, N] <= " << 1.0 + rule.tolerance
     << " x max over [1, N/2]; fails: ratio strictly increasing over (N/2, N] with growth > " << rule.tolerance
     << "; N = " << N;
  v.rule = os.str();
  for (std::size_t n = 1; n <= N; n <<= 1) {
    v.evidence_x.push_back(static_cast<double>(n));
    v.evidence.push_back(ratio[n]);
  }
  if (first_power_at_least(N) != N) {
    v.evidence_x.push_back(static_cast<double>(N));
    v.evidence.push_back(ratio[N]);
  }
  if (!monotone_b) v.note = "b is not nondecreasing on [1, N]";
  return v;
}

}  // namespace

ConditionVerdict chandra_ghosal_integral(const Functional& G, double p, const SlowlyVaryingSpec& L,
                                         const IntegralRule& rule) {
  if (!(p > 0.0)) throw std::invalid_argument("chandra_ghosal_integral: p must be > 0");
  return integral_verdict(G, p, L, rule);
}

ConditionVerdict chandra_ghosal_integral(const TailFunction& G, double p, const SlowlyVaryingSpec& L,
                                         const IntegralRule& rule) {
  return chandra_ghosal_integral(Functional::from_tail(G), p, L, rule);
}

ConditionVerdict series_condition(const ArraySpec& arr, double p, std::size_t N, const IntegralRule& rule) {
  if (!arr.is_sequence()) throw std::invalid_argument("series_condition needs a sequence-shaped array");
  if (!(p > 0.0)) throw std::invalid_argument("series_condition: p must be > 0");
  if (N < 1) throw std::invalid_argument("series_condition: N must be >= 1");
  ConditionVerdict v;
  v.name = "series P(|X_n|^p > n)";
  v.rule = envelope_rule_text(rule) + " (blocks [2^j, 2^(j+1)) of the series)";

  std::vector<double> blocks;
  long double sum = 0.0L;
  long double block = 0.0L;
  std::size_t block_end = 2;  // exclusive
  for (std::size_t n = 1; n <= N; ++n) {
    const long double t = std::pow(static_cast<long double>(n), 1.0L / p);
    block += tail_prob(arr.sequence_term(n), t);
    if (n + 1 == block_end) {
      blocks.push_back(static_cast<double>(block));
      sum += block;
      block = 0.0L;
      block_end <<= 1;
      v.evidence_x.push_back(static_cast<double>(n));
      v.evidence.push_back(static_cast<double>(sum));
    }
  }
  if (block > 0.0L || v.evidence_x.empty() || v.evidence_x.back() != static_cast<double>(N)) {
    sum += block;
    v.evidence_x.push_back(static_cast<double>(N));
    v.evidence.push_back(static_cast<double>(sum));
  }
  v.value = static_cast<double>(sum);
  const double slope = envelope_slope(blocks, 0, rule.fit_blocks);
  if (!blocks.empty() && blocks.back() < rule.quad.block_tol) {
    v.verdict = Verdict::holds;
  } else if (std::isfinite(slope) && slope >= rule.flat_slope) {
    v.verdict = Verdict::fails;
    v.value_finite = false;
  }
  std::ostringstream os;
  os << "partial sum " << v.value << " at N = " << N << ", envelope slope " << slope;
  v.note = os.str();
  return v;
}

ConditionVerdict b_regularity_wlln(const NormalizingSequence& b, std::size_t N, const PlateauRule& rule) {
  return regularity(b, N, rule, false, "b-regularity sum b_i/i^2 = O(b_n/n)");
}

ConditionVerdict b_regularity_l2(const NormalizingSequence& b, std::size_t N, const PlateauRule& rule) {
  return regularity(b, N, rule, true, "b-regularity sum b_i^2/i^2 = O(b_n^2/n)");
}

ConditionVerdict vanishing_kG(const Functional& G, const NormalizingSequence& b, std::span<const double> k_grid,
                              const DecayRule& rule) {
  ConditionVerdict v;
  v.name = "k G(b_k) -> 0";
  std::ostringstream rs;
  rs << "holds: last " << rule.window << " values < " << rule.eps_lim
     << " and nonincreasing; fails: last values nondecreasing and >= " << rule.eps_lim << "; unreliable points give inconclusive";
  v.rule = rs.str();
  std::vector<bool> reliable;
  for (double k : k_grid) {
    const SupValue s = G.eval(b.at(k));
    v.evidence_x.push_back(k);
    v.evidence.push_back(static_cast<double>(static_cast<long double>(k) * s.value));
    reliable.push_back(s.reliable());
  }
  if (v.evidence.empty()) return v;
  v.value = v.evidence.back();
  const std::size_t w = std::min(rule.window, v.evidence.size());
  const std::size_t start = v.evidence.size() - w;
  bool tail_reliable = true;
  bool nondecreasing = true;
  bool above = true;
  for (std::size_t j = start; j < v.evidence.size(); ++j) {
    if (!reliable[j]) tail_reliable = false;
    if (j > start && v.evidence[j] < v.evidence[j - 1]) nondecreasing = false;
    if (v.evidence[j] < rule.eps_lim) above = false;
  }
  if (!tail_reliable) {
    v.note = "values near the end of the grid lie beyond the scanned rows";
  } else if (decays(v.evidence, rule)) {
    v.verdict = Verdict::holds;
  } else if (nondecreasing && above) {
    v.verdict = Verdict::fails;
  }
  return v;
}

}  // namespace sdlab
