#pragma once

// The four worked examples as executable arrays with their closed forms and
// expected verdicts.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdlab/conditions.hpp"
#include "sdlab/core.hpp"
#include "sdlab/domination.hpp"
#include "sdlab/moments.hpp"

namespace sdlab {

struct FixtureExpectations {
  std::optional<double> c0;
  std::optional<bool> cesaro_domination_valid;
  std::optional<bool> weighted_domination_valid;
  std::optional<double> cesaro_G_floor;  // G(x) >= floor for x >= 1
  std::optional<bool> ui_cesaro_decays;
  std::optional<bool> ui_weighted_decays;
  std::optional<Verdict> chandra_ghosal;
  std::optional<Verdict> series;
  std::optional<double> series_sum;
  std::optional<Verdict> kG;           // Cesaro G
  std::optional<Verdict> kG_weighted;  // G-hat
  std::optional<bool> bounded_moment_finite;
  std::optional<double> bounded_moment_bound;
  std::optional<bool> wlln_holds;
  // n -> deterministic value of max_j |sum c X| / b_n
  std::vector<std::pair<std::size_t, double>> deterministic_statistic;
};

struct Fixture {
  std::string name;
  double p = 1.0;
  int nu = 1;
  ArraySpec array;
  WeightScheme weights;  // the example's weights (uniform for Cesaro-only fixtures)
  NormalizingSequence b;
  std::optional<Functional> cesaro_closed;
  std::optional<Functional> weighted_closed;
  std::optional<double> c0_closed;
  // sup_n sum a E(|X|^p 1(|X|^p > a)) as a function of a.
  std::function<double(long double)> ui_cesaro_closed;
  std::function<double(long double)> ui_weighted_closed;
  MomentFunctionSpec moment_g;  // g of the bounded-moment hypothesis
  // Grids used for limit decisions on closed forms (log2 of the argument for
  // ui_log2_grid).
  std::vector<double> limit_grid;
  std::vector<double> ui_log2_grid;
  std::vector<double> k_grid;
  FixtureExpectations expect;
};

std::vector<std::string> fixture_names();
/// Throws std::invalid_argument for unknown names or p outside (0, 2).
Fixture load_fixture(const std::string& name, std::optional<double> p = std::nullopt, int nu = 1);

// Closed forms, exposed for testing.
namespace closed {
double example21_cesaro(long double x);
double example21_weighted(long double x);
double example21_weighted_ui(long double a, double q);
double wlln_cesaro(long double x, double p);
double wlln_cesaro_ui(long double a);
double x2m_cesaro(long double x, double p);
double x2m_cesaro_ui(long double a);
double wlln_magnitude(std::size_t n, double p);
double x2m_spike(std::size_t m, double p);
}  // namespace closed

}  // namespace sdlab
