#include <cmath>
#include <vector>

#include "doctest.h"
#include "sdlab/svf.hpp"

using namespace sdlab;

TEST_CASE("clamped iterated logs") {
  CHECK(log_nu(1.0, 1) == 1.0);
  CHECK(log_nu(16.0, 2) == 8.0);
  CHECK(log_nu(65536.0, 3) == 128.0);
  CHECK(log_nu_sq(16.0, 2) == 16.0);
  CHECK(log_nu_sq(16.0, 1) == 16.0);
  for (double x : {0.0, 0.5, 1.0, 2.0}) {
    for (int nu = 1; nu <= 4; ++nu) {
      CHECK(log_nu(x, nu) == 1.0);
      CHECK(log_nu_sq(x, nu) == 1.0);
    }
  }
  CHECK(log_clamped(1e-300) == 1.0);
  CHECK(log_clamped(1024.0) == 10.0);
}

TEST_CASE("log_nu derivative matches a central difference") {
  for (int nu = 1; nu <= 3; ++nu) {
    for (double x : {100.0, 1e4, 1e8}) {
      for (bool sq : {false, true}) {
        const double h = x * 1e-6;
        auto f = [&](double t) { return sq ? log_nu_sq(t, nu) : log_nu(t, nu); };
        const double fd = (f(x + h) - f(x - h)) / (2 * h);
        CHECK(log_nu_derivative(x, nu, sq) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("conjugate residual") {
  const std::vector<double> xs{std::ldexp(1.0, 20), std::ldexp(1.0, 400)};
  auto c = conjugate_residual(SlowlyVaryingSpec::constant_one(), xs);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);

  auto r = conjugate_residual(SlowlyVaryingSpec::log_power(1.0), xs);
  CHECK(r[0] < 0.25);
  CHECK(r[1] < 0.03);
  CHECK(r[1] < r[0]);
  // log2 x = k, conjugate 1/log2: residual = log2 k / (k + log2 k).
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double k = std::log2(xs[i]);
    CHECK(r[i] == doctest::Approx(std::log2(k) / (k + std::log2(k))).epsilon(1e-12));
  }
}

TEST_CASE("conjugates of the built-in families shrink the residual") {
  const std::vector<double> xs{std::ldexp(1.0, 30), std::ldexp(1.0, 300)};
  for (const auto& L : {SlowlyVaryingSpec::log_power(-1.0), SlowlyVaryingSpec::log_power(0.5),
                        SlowlyVaryingSpec::loglog_power(1.0),
                        SlowlyVaryingSpec::product({SlowlyVaryingSpec::log_power(1.0),
                                                    SlowlyVaryingSpec::loglog_power(1.0)})}) {
    auto r = conjugate_residual(L, xs);
    CHECK(r[1] < r[0]);
    CHECK(r[1] < 0.05);
  }
}

TEST_CASE("regularization") {
  SUBCASE("constant needs no splice") {
    auto L1 = regularize(SlowlyVaryingSpec::constant_one(), 1.0);
    CHECK(L1.anchor() == 0.0);
    CHECK(L1(5.0) == 1.0);
  }
  SUBCASE("x log x is increasing from 2") {
    auto L1 = regularize(SlowlyVaryingSpec::log_power(1.0), 1.0);
    CHECK(L1.anchor() <= 2.0);
    CHECK(L1(0.0) == 0.0);
  }
  SUBCASE("x^0.5 / log x") {
    const auto L = SlowlyVaryingSpec::log_power(-1.0);
    auto L1 = regularize(L, 0.5);
    const double a = L1.anchor();
    // d/dx [x^0.5 / log2 x] = 0 at x = e^2.
    CHECK(a >= std::exp(2.0) * 0.999);
    CHECK(a < 100.0);
    double prev = -1.0;
    for (double x = 1e-3; x < 1e9; x *= 1.05) {
      const double v = std::sqrt(x) * L1(x);
      CHECK(v > prev);
      prev = v;
    }
    CHECK(L1(2 * a) == L(2 * a));
  }
}

TEST_CASE("derivative ratio") {
  CHECK(derivative_ratio(SlowlyVaryingSpec::constant_one(), 10.0) == 0.0);
  const auto L = SlowlyVaryingSpec::log_power(1.0);
  CHECK(derivative_ratio(L, 1024.0) == doctest::Approx(1.0 / (10.0 * std::log(2.0))).epsilon(1e-6));
  double prev = 1e9;
  for (int k = 3; k <= 60; ++k) {
    const double r = derivative_ratio(L, std::ldexp(1.0, k));
    CHECK(r < 0.5);
    CHECK(r < prev);
    prev = r;
  }
}

// L(lx)/L(x) -> 1 along x = 2^k for every family; for log2 x the deviation is
// exactly log2(l)/k, so only gamma with |gamma| log2(10)/60 < 0.05 meets the
// 0.05 gate at k = 60.
TEST_CASE("slow variation of the built-in families") {
  const std::vector<SlowlyVaryingSpec> families{
      SlowlyVaryingSpec::constant_one(),
      SlowlyVaryingSpec::log_power(0.5),
      SlowlyVaryingSpec::log_power(-0.5),
      SlowlyVaryingSpec::loglog_power(1.0),
      SlowlyVaryingSpec::loglog_power(-1.0),
      SlowlyVaryingSpec::product({SlowlyVaryingSpec::log_power(0.5), SlowlyVaryingSpec::loglog_power(-1.0)})};
  for (const auto& L : families) {
    for (double lam : {0.5, 2.0, 10.0}) {
      auto dev = [&](int k) {
        const double x = std::ldexp(1.0, k);
        return std::abs(L(lam * x) / L(x) - 1.0);
      };
      CHECK(dev(60) <= dev(30));
      CHECK(dev(60) < 0.05);
    }
  }
  const auto L = SlowlyVaryingSpec::log_power(1.0);
  for (double lam : {0.5, 2.0, 10.0}) {
    const double dev = std::abs(L(lam * std::ldexp(1.0, 60)) / L(std::ldexp(1.0, 60)) - 1.0);
    CHECK(dev == doctest::Approx(std::abs(std::log2(lam)) / 60.0).epsilon(1e-9));
  }
}
