#pragma once

// Loading arrays, weights, slowly varying functions and normalizing
// sequences from JSON documents or named fixture generators.

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sdlab/core.hpp"
#include "sdlab/fixtures.hpp"
#include "sdlab/svf.hpp"

namespace sdlab {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedSpec {
  std::string name;
  std::optional<Fixture> fixture;
  ArraySpec array;
  WeightScheme weights;
  double p = 1.0;
  int nu = 1;
  SlowlyVaryingSpec L = SlowlyVaryingSpec::constant_one();
  NormalizingSequence b = NormalizingSequence::power(1.0);
};

DistSpec parse_dist(const nlohmann::json& j);
SlowlyVaryingSpec parse_svf(const nlohmann::json& j);

/// Throws SpecError on malformed input.
LoadedSpec parse_spec(const nlohmann::json& j);
LoadedSpec load_spec_file(const std::string& path);
LoadedSpec spec_from_fixture(const std::string& name, std::optional<double> p = std::nullopt, int nu = 1);

}  // namespace sdlab
