#include "sdlab/svf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdlab {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Iterated clamped logs f_1..f_nu and their derivatives.
void iterated_logs(double x, int nu, std::vector<double>& f, std::vector<double>& df) {
  f.resize(nu);
  df.resize(nu);
  double arg = x;
  double darg = 1.0;
  for (int k = 0; k < nu; ++k) {
    f[k] = log_clamped(arg);
    df[k] = arg > 2.0 ? darg / (arg * kLn2) : 0.0;
    arg = f[k];
    darg = df[k];
  }
}

}  // namespace

double log_clamped(double x) { return std::log2(std::max(2.0, x)); }

double log_nu(double x, int nu) {
  if (nu < 1) throw std::invalid_argument("log_nu: nu must be >= 1");
  double prod = 1.0;
  double arg = x;
  for (int k = 0; k < nu; ++k) {
    arg = log_clamped(arg);
    prod *= arg;
  }
  return prod;
}

double log_nu_sq(double x, int nu) {
  if (nu < 1) throw std::invalid_argument("log_nu_sq: nu must be >= 1");
  double prod = 1.0;
  double arg = x;
  for (int k = 0; k < nu; ++k) {
    arg = log_clamped(arg);
    prod *= arg;
  }
  return prod * arg;
}

double log_nu_derivative(double x, int nu, bool squared_last) {
  if (nu < 1) throw std::invalid_argument("log_nu_derivative: nu must be >= 1");
  std::vector<double> f, df;
  iterated_logs(x, nu, f, df);
  std::vector<double> power(nu, 1.0);
  if (squared_last) power[nu - 1] = 2.0;
  double total = 0.0;
  for (int k = 0; k < nu; ++k) {
    double term = power[k] * std::pow(f[k], power[k] - 1.0) * df[k];
    for (int j = 0; j < nu; ++j) {
      if (j != k) term *= std::pow(f[j], power[j]);
    }
    total += term;
  }
  return total;
}

struct SlowlyVaryingSpec::Node {
  Family family = Family::constant_one;
  double gamma = 0.0;
  std::vector<SlowlyVaryingSpec> factors;
  std::function<double(double)> eval;
  std::function<double(double)> derivative;
  std::shared_ptr<const SlowlyVaryingSpec> conjugate;
  double smooth_from = 0.0;
  std::string label;
};

SlowlyVaryingSpec::SlowlyVaryingSpec(std::shared_ptr<const Node> node, double anchor)
    : node_(std::move(node)), anchor_(anchor) {}

SlowlyVaryingSpec SlowlyVaryingSpec::constant_one() {
  auto n = std::make_shared<Node>();
  n->family = Family::constant_one;
  return SlowlyVaryingSpec(n);
}

SlowlyVaryingSpec SlowlyVaryingSpec::log_power(double gamma) {
  auto n = std::make_shared<Node>();
  n->family = Family::log_power;
  n->gamma = gamma;
  n->smooth_from = 2.0;
  return SlowlyVaryingSpec(n);
}

SlowlyVaryingSpec SlowlyVaryingSpec::loglog_power(double gamma) {
  auto n = std::make_shared<Node>();
  n->family = Family::loglog_power;
  n->gamma = gamma;
  n->smooth_from = 4.0;
  return SlowlyVaryingSpec(n);
}

SlowlyVaryingSpec SlowlyVaryingSpec::product(std::vector<SlowlyVaryingSpec> factors) {
  auto n = std::make_shared<Node>();
  n->family = Family::product;
  for (const auto& f : factors) n->smooth_from = std::max(n->smooth_from, f.smooth_from());
  n->factors = std::move(factors);
  return SlowlyVaryingSpec(n);
}

SlowlyVaryingSpec SlowlyVaryingSpec::custom(std::function<double(double)> eval,
                                            std::function<double(double)> derivative,
                                            std::optional<SlowlyVaryingSpec> conjugate,
                                            double smooth_from, std::string label) {
  if (!eval) throw std::invalid_argument("custom slowly varying function needs eval");
  auto n = std::make_shared<Node>();
  n->family = Family::custom;
  n->eval = std::move(eval);
  n->derivative = std::move(derivative);
  if (conjugate) n->conjugate = std::make_shared<const SlowlyVaryingSpec>(*conjugate);
  n->smooth_from = smooth_from;
  n->label = std::move(label);
  return SlowlyVaryingSpec(n);
}

double SlowlyVaryingSpec::raw(double x) const {
  const Node& n = *node_;
  switch (n.family) {
    case Family::constant_one:
      return 1.0;
    case Family::log_power:
      return std::pow(log_clamped(x), n.gamma);
    case Family::loglog_power:
      return std::pow(log_clamped(log_clamped(x)), n.gamma);
    case Family::product: {
      double v = 1.0;
      for (const auto& f : n.factors) v *= f.raw(x);
      return v;
    }
    case Family::custom:
      return n.eval(x);
  }
  return 1.0;
}

double SlowlyVaryingSpec::raw_derivative(double x) const {
  const Node& n = *node_;
  switch (n.family) {
    case Family::constant_one:
      return 0.0;
    case Family::log_power: {
      const double f = log_clamped(x);
      const double df = x > 2.0 ? 1.0 / (x * kLn2) : 0.0;
      return n.gamma * std::pow(f, n.gamma - 1.0) * df;
    }
    case Family::loglog_power: {
      const double f1 = log_clamped(x);
      const double df1 = x > 2.0 ? 1.0 / (x * kLn2) : 0.0;
      const double f2 = log_clamped(f1);
      const double df2 = f1 > 2.0 ? df1 / (f1 * kLn2) : 0.0;
      return n.gamma * std::pow(f2, n.gamma - 1.0) * df2;
    }
    case Family::product: {
      double total = 0.0;
      for (std::size_t k = 0; k < n.factors.size(); ++k) {
        double term = n.factors[k].raw_derivative(x);
        for (std::size_t j = 0; j < n.factors.size(); ++j) {
          if (j != k) term *= n.factors[j].raw(x);
        }
        total += term;
      }
      return total;
    }
    case Family::custom: {
      if (n.derivative) return n.derivative(x);
      const double h = x * 1e-6;
      if (h == 0.0) return 0.0;
      return (n.eval(x + h) - n.eval(x - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

double SlowlyVaryingSpec::operator()(double x) const {
  if (anchor_ > 0.0 && x < anchor_) return raw(anchor_) * std::max(x, 0.0) / anchor_;
  return raw(x);
}

double SlowlyVaryingSpec::derivative(double x) const {
  if (anchor_ > 0.0 && x < anchor_) return raw(anchor_) / anchor_;
  return raw_derivative(x);
}

SlowlyVaryingSpec::Family SlowlyVaryingSpec::family() const { return node_->family; }
double SlowlyVaryingSpec::gamma() const { return node_->gamma; }
const std::vector<SlowlyVaryingSpec>& SlowlyVaryingSpec::factors() const { return node_->factors; }
double SlowlyVaryingSpec::anchor() const { return anchor_; }
double SlowlyVaryingSpec::smooth_from() const { return node_->smooth_from; }

std::string SlowlyVaryingSpec::describe() const {
  const Node& n = *node_;
  std::string out;
  switch (n.family) {
    case Family::constant_one:
      out = "1";
      break;
    case Family::log_power:
      out = "(log x)^" + std::to_string(n.gamma);
      break;
    case Family::loglog_power:
      out = "(log log x)^" + std::to_string(n.gamma);
      break;
    case Family::product:
      for (std::size_t k = 0; k < n.factors.size(); ++k) {
        if (k) out += " * ";
        out += n.factors[k].describe();
      }
      break;
    case Family::custom:
      out = n.label;
      break;
  }
  if (anchor_ > 0.0) out += " [regularized at " + std::to_string(anchor_) + "]";
  return out;
}

bool SlowlyVaryingSpec::has_conjugate() const {
  const Node& n = *node_;
  if (n.family == Family::custom) return n.conjugate != nullptr;
  if (n.family == Family::product) {
    return std::all_of(n.factors.begin(), n.factors.end(),
                       [](const SlowlyVaryingSpec& f) { return f.has_conjugate(); });
  }
  return true;
}

SlowlyVaryingSpec SlowlyVaryingSpec::conjugate() const {
  const Node& n = *node_;
  switch (n.family) {
    case Family::constant_one:
      return constant_one();
    case Family::log_power:
      return log_power(-n.gamma);
    case Family::loglog_power:
      return loglog_power(-n.gamma);
    case Family::product: {
      std::vector<SlowlyVaryingSpec> conj;
      conj.reserve(n.factors.size());
      for (const auto& f : n.factors) conj.push_back(f.conjugate());
      return product(std::move(conj));
    }
    case Family::custom:
      if (!n.conjugate) throw std::logic_error("custom slowly varying function has no declared conjugate");
      return *n.conjugate;
  }
  return constant_one();
}

SlowlyVaryingSpec SlowlyVaryingSpec::with_anchor(double a) const {
  if (a < 0.0) throw std::invalid_argument("regularization anchor must be >= 0");
  return SlowlyVaryingSpec(node_, a);
}

std::vector<double> conjugate_residual(const SlowlyVaryingSpec& L, std::span<const double> x_grid) {
  const SlowlyVaryingSpec conj = L.conjugate();
  std::vector<double> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) {
    if (x < L.anchor()) throw std::domain_error("conjugate_residual: grid point below anchor");
    const double lx = L(x);
    out.push_back(std::abs(lx * conj(x * lx) - 1.0));
  }
  return out;
}

SlowlyVaryingSpec regularize(const SlowlyVaryingSpec& L, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("regularize: alpha must be > 0");
  const SlowlyVaryingSpec base = L.with_anchor(0.0);
  // x^alpha L(x) increases where alpha + x L'(x)/L(x) > 0 and L(x) > 0.
  auto increasing_at = [&](double x) {
    const double v = base.raw(x);
    if (!(v > 0.0)) return false;
    return alpha + x * base.raw_derivative(x) / v > 0.0;
  };

  const double start = std::max(base.smooth_from(), 1e-6);
  const double stop = 1e12;
  constexpr int kPoints = 4000;
  const double ratio = std::pow(stop / start, 1.0 / (kPoints - 1));
  int last_fail = -1;
  double x = start;
  std::vector<double> grid(kPoints);
  for (int j = 0; j < kPoints; ++j) {
    grid[j] = x;
    if (!increasing_at(x)) last_fail = j;
    x *= ratio;
  }
  if (last_fail == kPoints - 1) {
    throw std::runtime_error("regularize: x^alpha L(x) not increasing anywhere below 1e12");
  }
  if (last_fail < 0) return base.with_anchor(base.smooth_from());

  double lo = grid[last_fail];
  double hi = grid[last_fail + 1];
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (increasing_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return base.with_anchor(hi);
}

double derivative_ratio(const SlowlyVaryingSpec& L, double x) {
  const double v = L(x);
  if (!(v > 0.0)) throw std::domain_error("derivative_ratio: L(x) must be positive");
  return x * L.derivative(x) / v;
}

}  // namespace sdlab
