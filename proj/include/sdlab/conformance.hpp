#pragma once

// Named condition checks shared by the CLI and the fixture conformance
// suite.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdlab/spec_json.hpp"

namespace sdlab {

struct CheckOutcome {
  std::string condition;
  std::string result;  // verdict, "valid"/"invalid", "decays"/"does-not-decay", "finite"/"infinite"
  std::optional<std::string> expected;
  bool matches = true;
  nlohmann::json detail;
};

std::vector<std::string> condition_names();

/// Runs one named condition. Fixtures use their closed forms and attach
/// expectations. Throws std::invalid_argument for unknown names.
CheckOutcome run_check(const LoadedSpec& spec, const std::string& condition, std::size_t n_sup = kDefaultScanRows);

struct ConformanceResult {
  std::string fixture;
  std::string check;
  bool passed = false;
  std::string detail;
};

struct ConformanceOptions {
  std::size_t n_sup = kDefaultScanRows;
  std::size_t wlln_reps = 400;
  unsigned threads = 0;
  // "fixture:key" -> replacement expected value (c0, bounded_moment_bound, series_sum, G_floor)
  std::map<std::string, double> overrides;
};

std::vector<ConformanceResult> verify_fixture(const std::string& name, const ConformanceOptions& opt = {});

}  // namespace sdlab
