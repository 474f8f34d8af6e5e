#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sdlab/fixtures.hpp"
#include "sdlab/moments.hpp"
#include "sdlab/simulate.hpp"

using namespace sdlab;

namespace {

UiOptions scan_rows(std::size_t n) {
  UiOptions o;
  o.n_sup = n;
  return o;
}

double magnitude(const DistSpec& d) { return max_magnitude(d); }

std::vector<double> expand(const std::vector<WeightRun>& runs, std::size_t k) {
  std::vector<double> out(k, 0.0);
  for (const auto& r : runs)
    for (std::size_t i = 0; i < r.count; ++i) out[r.first - 1 + i] = r.value;
  return out;
}

double brute_cesaro(const ArraySpec& arr, double x, std::size_t N) {
  double best = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    double s = 0.0;
    for (std::size_t i = 1; i <= arr.k(n); ++i) s += tail_prob(arr.cell(n, i), x);
    best = std::max(best, s / double(arr.k(n)));
  }
  return best;
}

}  // namespace

TEST_CASE("fixture catalogue") {
  const auto names = fixture_names();
  CHECK(names.size() == 4);
  for (const auto& n : names) CHECK_NOTHROW(load_fixture(n));
  CHECK_THROWS_AS(load_fixture("nope"), std::invalid_argument);
  CHECK_THROWS_AS(load_fixture("x2m-example", 2.0), std::invalid_argument);
  CHECK_THROWS_AS(load_fixture("x2m-example", 0.0), std::invalid_argument);
}

TEST_CASE("small-weights example rows and weights") {
  const Fixture f = load_fixture("example-2.1");
  const std::vector<double> row5{1, 1, 5, 5, 5};
  for (std::size_t i = 1; i <= 5; ++i) {
    CHECK(magnitude(f.array.cell(5, i)) == row5[i - 1]);
    CHECK(is_symmetric(f.array.cell(5, i)));
  }
  CHECK(f.weights.row_weight_sum(2) == doctest::Approx(1.25));
  CHECK(f.weights.a(2, 1) == 1.0);
  CHECK(f.weights.a(2, 2) == 0.25);
  const auto c0 = f.weights.c0();
  CHECK(c0.value == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(c0.value > 1.0);
  CHECK(c0.value <= 2.0);
  CHECK(*f.c0_closed == 1.25);
  for (double x : {0.3, 1.0, 1.5, 2.0, 3.0, 4.5, 10.0, 99.0, 400.0})
    CHECK(closed::example21_cesaro(x) == doctest::Approx(brute_cesaro(f.array, x, 1000)).epsilon(1e-14));
}

TEST_CASE("spike sequence") {
  const Fixture f1 = load_fixture("x2m-example", 1.0);
  CHECK(magnitude(f1.array.sequence_term(8)) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(magnitude(f1.array.sequence_term(7)) == 1.0);
  CHECK(closed::x2m_spike(3, 1.0) == doctest::Approx(8.0 / 3.0));
  const Fixture f = load_fixture("x2m-example");
  for (double x : {0.5, 1.0, 2.0, 5.0, 40.0, 300.0, 5000.0})
    CHECK(closed::x2m_cesaro(x, f.p) == doctest::Approx(brute_cesaro(f.array, x, 1 << 12)).epsilon(1e-14));
  // P(|X_n|^p > n) = 0 for every n.
  for (std::size_t n = 1; n <= 1 << 16; ++n) REQUIRE(tail_prob(f.array.sequence_term(n), std::pow(double(n), 1.0 / f.p)) == 0.0);
}

TEST_CASE("WLLN counterexample") {
  const Fixture f = load_fixture("wlln-counterexample");
  CHECK(f.p == 0.5);
  CHECK(expand(f.weights.raw_row(4), 4) == std::vector<double>{0, 0, 0, 4});
  for (double x : {0.5, 1.0, 1.5, 3.0, 20.0, 1000.0})
    CHECK(closed::wlln_cesaro(x, f.p) == doctest::Approx(brute_cesaro(f.array, x, 3000)).epsilon(1e-14));
  for (std::size_t n : {16u, 256u, 4096u}) {
    const auto row = sample_row(f.array, n, 1);
    const auto c = expand(f.weights.raw_row(n), n);
    const double stat = max_partial_sums(row, c) / f.b(n);
    CHECK(stat == doctest::Approx(double(n) / std::pow(std::log2(double(n)), 1.0 / f.p)).epsilon(1e-12));
  }
  for (const auto& [n, v] : f.expect.deterministic_statistic) {
    const auto row = sample_row(f.array, n, 2);
    CHECK(max_partial_sums(row, expand(f.weights.raw_row(n), n)) / f.b(n) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("closed-form UI sups agree with the scanner") {
  const Fixture w = load_fixture("wlln-counterexample");
  const std::vector<double> as{0.5, 1.0, 1.5, 3.0, 10.0, 50.0};
  auto T = MomentFunctionSpec::power_of(w.p);
  auto scan = ui_check(w.array, nullptr, T, as, scan_rows(4000));
  for (std::size_t j = 0; j < as.size(); ++j)
    if (scan.reliable[j]) CHECK(scan.values[j] == doctest::Approx(w.ui_cesaro_closed(as[j])).epsilon(1e-12));

  const Fixture x = load_fixture("x2m-example");
  auto xs = ui_check(x.array, nullptr, MomentFunctionSpec::power_of(x.p), as, scan_rows(1 << 14));
  for (std::size_t j = 0; j < as.size(); ++j)
    if (xs.reliable[j]) CHECK(xs.values[j] == doctest::Approx(x.ui_cesaro_closed(as[j])).epsilon(1e-9));

  const Fixture e = load_fixture("example-2.1");
  auto es = ui_check(e.array, &e.weights, MomentFunctionSpec::power_of(e.p), as, scan_rows(4000));
  for (std::size_t j = 0; j < as.size(); ++j)
    if (es.reliable[j]) CHECK(es.values[j] == doctest::Approx(e.ui_weighted_closed(as[j])).epsilon(1e-9));
}

TEST_CASE("bounded moment sups stay under the stated bounds") {
  for (double p : {0.3, 0.5, 0.9}) {
    const Fixture w = load_fixture("wlln-counterexample", p);
    auto m = bounded_moment_condition(w.array, nullptr, w.moment_g);
    CHECK(m.finite);
    CHECK(m.value <= 1.0 + 1.0 / p);
    const Fixture x = load_fixture("x2m-example", p);
    auto mx = bounded_moment_condition(x.array, nullptr, x.moment_g);
    CHECK(mx.finite);
    CHECK(mx.value <= 1.0 + 2.0 / p);
  }
  const Fixture e = load_fixture("example-4.1");
  auto me = bounded_moment_condition(e.array, nullptr, e.moment_g);
  CHECK(me.finite);
  CHECK_FALSE(me.at_edge);
}

TEST_CASE("log-weighted two-point sequence terms") {
  for (int nu : {1, 2}) {
    const Fixture f = load_fixture("example-4.1", 1.5, nu);
    for (std::size_t n : {1u, 2u, 3u, 100u, 65536u}) {
      const double t = tail_prob(f.array.sequence_term(n), std::pow(double(n), 1.0 / f.p));
      CHECK(t == doctest::Approx(1.0 / (double(n) * log_nu(double(n), nu))).epsilon(1e-14));
    }
  }
}
