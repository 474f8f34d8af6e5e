#include <cmath>
#include <vector>

#include "doctest.h"
#include "sdlab/conditions.hpp"
#include "sdlab/fixtures.hpp"

using namespace sdlab;

TEST_CASE("integral condition") {
  const auto L = SlowlyVaryingSpec::constant_one();
  SUBCASE("min(1, x^-2) at p = 1") {
    auto G = TailFunction::analytic([](long double x) { return double(std::min(1.0L, 1.0L / (x * x))); }, {}, {1.0});
    auto v = chandra_ghosal_integral(G, 1.0, L);
    CHECK(v.verdict == Verdict::holds);
    CHECK(v.value == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("compact support") {
    // int_0^3 x^{1/2} dx = 2 sqrt(27) / 3.
    auto v = chandra_ghosal_integral(tail_of(SymmetricTwoPoint{3.0, 1.0}), 1.5, L);
    CHECK(v.verdict == Verdict::holds);
    CHECK(v.value == doctest::Approx(2.0 * std::sqrt(27.0) / 3.0).epsilon(1e-9));
  }
  SUBCASE("harmonic envelope") {
    // x^{p-1} G = 1/x beyond 1: every dyadic block equals log 2.
    auto G = TailFunction::analytic([](long double x) { return double(std::min(1.0L, 1.0L / std::sqrt(x))); });
    auto v = chandra_ghosal_integral(G, 0.5, L);
    CHECK(v.verdict == Verdict::fails);
  }
  SUBCASE("spike sequence with p below one") {
    const Fixture f = load_fixture("x2m-example");
    auto v = chandra_ghosal_integral(*f.cesaro_closed, f.p, L);
    CHECK(v.verdict == Verdict::fails);
  }
}

TEST_CASE("envelope slope") {
  std::vector<double> harmonic, geometric;
  for (int j = 1; j <= 20; ++j) {
    harmonic.push_back(1.0 / j);
    geometric.push_back(std::ldexp(1.0, -j));
  }
  CHECK(envelope_slope(harmonic, 1, 10) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(envelope_slope(geometric, 1, 10) < -5.0);
  std::vector<double> with_zero{1.0, 0.0, 1.0};
  CHECK(std::isnan(envelope_slope(with_zero, 1, 3)));
}

TEST_CASE("series condition") {
  const Fixture x2m = load_fixture("x2m-example");
  auto s = series_condition(x2m.array, x2m.p, 1 << 20);
  CHECK(s.verdict == Verdict::holds);
  CHECK(s.value == 0.0);

  auto bounded = ArraySpec::sequence([](std::size_t) { return DistSpec{SymmetricPM1{}}; });
  auto b = series_condition(bounded, 1.0, 10000);
  CHECK(b.verdict == Verdict::holds);
  CHECK(b.value == 0.0);

  const Fixture e41 = load_fixture("example-4.1");
  auto d = series_condition(e41.array, e41.p);
  CHECK(d.verdict == Verdict::fails);
  double direct = 0.0;
  for (std::size_t n = 1; n <= 1000000; ++n) direct += 1.0 / (double(n) * std::max(1.0, std::log2(double(n))));
  CHECK(d.value == doctest::Approx(direct).epsilon(1e-10));
  CHECK(d.value > 3.0);

  auto rows = ArraySpec::identical(SymmetricPM1{});
  CHECK_THROWS(series_condition(rows, 1.0, 100));
}

TEST_CASE("normalizing sequence regularity") {
  auto n2 = b_regularity_wlln(NormalizingSequence::power(0.5));
  CHECK(n2.verdict == Verdict::holds);
  for (double r : n2.evidence) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));

  auto n1 = b_regularity_wlln(NormalizingSequence::power(1.0));
  CHECK(n1.verdict == Verdict::fails);
  // sum 1/i against 1.
  CHECK(n1.value == doctest::Approx(std::log(1e5) + 0.5772156649).epsilon(1e-4));

  auto n3 = b_regularity_wlln(NormalizingSequence::power(1.0 / 3.0));
  CHECK(n3.verdict == Verdict::holds);
  CHECK(n3.value == doctest::Approx(1.0));

  auto l1 = b_regularity_l2(NormalizingSequence::power(1.0));
  CHECK(l1.verdict == Verdict::holds);
  CHECK(l1.value == doctest::Approx(1.0));

  auto lh = b_regularity_l2(NormalizingSequence::power(2.0));
  CHECK(lh.verdict == Verdict::fails);

  auto l23 = b_regularity_l2(NormalizingSequence::power(1.5));
  CHECK(l23.verdict == Verdict::holds);
  CHECK(l23.value <= 3.0);
  CHECK(l23.value > 2.9);
}

TEST_CASE("vanishing k G(b_k)") {
  const std::vector<double> k = dyadic_grid(0, 60);
  for (double p : {0.5, 1.0, 1.5}) {
    auto G = Functional::from_tail(tail_of(ParetoTail{2.0 * p, 1.0}));
    auto v = vanishing_kG(G, NormalizingSequence::power(p), k);
    CHECK(v.verdict == Verdict::holds);
    for (std::size_t j = 0; j < k.size(); ++j) CHECK(v.evidence[j] == doctest::Approx(1.0 / k[j]).epsilon(1e-9));
  }

  const Fixture w = load_fixture("wlln-counterexample");
  auto f = vanishing_kG(*w.weighted_closed, w.b, w.k_grid);
  CHECK(f.verdict == Verdict::fails);

  const Fixture x = load_fixture("x2m-example");
  auto h = vanishing_kG(*x.cesaro_closed, x.b, x.k_grid);
  CHECK(h.verdict == Verdict::holds);
}
