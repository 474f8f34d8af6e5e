#include <stdexcept>

#include "doctest.h"
#include "sdlab/conformance.hpp"
#include "sdlab/spec_json.hpp"

using namespace sdlab;
using nlohmann::json;

TEST_CASE("distribution documents") {
  CHECK(tail_prob(parse_dist(json{{"kind", "pm1"}}), 0.5) == 1.0);
  CHECK(tail_prob(parse_dist(json{{"kind", "zero"}}), 0.0) == 0.0);
  CHECK(tail_prob(parse_dist(json{{"kind", "two-point"}, {"magnitude", 5.0}, {"prob", 0.2}}), 1.0) == 0.2);
  CHECK(tail_prob(parse_dist(json{{"kind", "pareto"}, {"alpha", 2.0}, {"cutoff", 1.0}}), 10.0) ==
        doctest::Approx(0.01));
  const auto d = parse_dist(json::parse(R"({"kind": "discrete", "atoms": [[-1, 0.25], [0, 0.5], [3, 0.25]]})"));
  CHECK(tail_prob(d, 2.0) == 0.25);
  CHECK_THROWS_AS(parse_dist(json{{"kind", "cauchy"}}), SpecError);
  CHECK_THROWS_AS(parse_dist(json{{"kind", "two-point"}, {"magnitude", 1.0}, {"prob", 1.5}}), SpecError);
  CHECK_THROWS_AS(parse_dist(json::parse(R"({"kind": "discrete", "atoms": [[1, 0.5]]})")), SpecError);
}

TEST_CASE("slowly varying documents") {
  CHECK(parse_svf(json{{"family", "constant"}})(1e6) == 1.0);
  CHECK(parse_svf(json{{"family", "log-power"}, {"gamma", 1.0}})(1024.0) == doctest::Approx(10.0));
  const auto prod = parse_svf(json::parse(
      R"({"family": "product", "factors": [{"family": "log-power", "gamma": 1}, {"family": "loglog-power", "gamma": 1}]})"));
  CHECK(prod(65536.0) == doctest::Approx(16.0 * 4.0));
  CHECK_THROWS_AS(parse_svf(json{{"family", "bessel"}}), SpecError);
}

TEST_CASE("array documents") {
  const auto s = load_spec_file(SDLAB_TEST_DATA "/pareto_rows.json");
  CHECK(s.name == "pareto-rows");
  CHECK(*s.array.declared_rows() == 200);
  CHECK(tail_prob(s.array.cell(1, 1), 0.5) == 1.0);
  CHECK(tail_prob(s.array.cell(2, 2), 3.0) == 0.5);
  CHECK(tail_prob(s.array.cell(3, 1), 10.0) == doctest::Approx(1e-3));
  CHECK(s.weights.is_uniform());
  CHECK_THROWS_AS(load_spec_file(SDLAB_TEST_DATA "/malformed.json"), SpecError);
  CHECK_THROWS_AS(load_spec_file(SDLAB_TEST_DATA "/missing_rows.json"), SpecError);
  CHECK_THROWS_AS(load_spec_file(SDLAB_TEST_DATA "/does_not_exist.json"), SpecError);

  const json explicit_w = json::parse(R"({
    "rows": 3, "default": {"kind": "pm1"},
    "weights": {"kind": "explicit", "default": 0.5, "entries": [{"n": 2, "i": 1, "value": 2.0}]}
  })");
  const auto e = parse_spec(explicit_w);
  CHECK(e.weights.a(2, 1) == 2.0);
  CHECK(e.weights.a(2, 2) == 0.5);

  const json c_w = json::parse(R"({
    "rows": 5, "default": {"kind": "pm1"},
    "weights": {"kind": "c-normalized", "flavor": "squares", "default": 0.0, "entries": [{"n": 3, "i": 3, "value": 3.0}, {"n": 3, "i": 1, "value": 4.0}]}
  })");
  const auto c = parse_spec(c_w);
  CHECK(c.weights.a(3, 1) == doctest::Approx(16.0 / 25.0));

  CHECK_THROWS_AS(parse_spec(json::parse(R"({"rows": 3, "cells": [{"n": 1, "i": 1, "dist": {"kind": "pm1"}}]})")), SpecError);
  CHECK_THROWS_AS(parse_spec(json::parse(R"({"rows": 3, "default": {"kind": "pm1"}, "cells": [{"n": 1, "i": 2, "dist": {"kind": "pm1"}}]})")), SpecError);
  CHECK_THROWS_AS(parse_spec(json::parse(R"({"rows": 3, "default": {"kind": "pm1"}, "dependence": {"kind": "gaussian-na", "correlation": 0.3}})")), SpecError);

  const auto b = parse_spec(json::parse(R"({"rows": 3, "default": {"kind": "pm1"}, "p": 0.5, "normalizing": {"kind": "power"}})"));
  CHECK(b.b(3) == doctest::Approx(9.0));
}

TEST_CASE("fixture documents and named checks") {
  const auto g = load_spec_file(SDLAB_TEST_DATA "/x2m_generator.json");
  REQUIRE(g.fixture.has_value());
  CHECK(g.fixture->name == "x2m-example");

  auto kG = run_check(g, "kG");
  CHECK(kG.result == "holds");
  CHECK(kG.matches);
  auto cg = run_check(g, "chandra-ghosal");
  CHECK(cg.result == "fails");
  CHECK(cg.matches);

  const auto e = spec_from_fixture("example-2.1");
  auto d = run_check(e, "cesaro-domination");
  CHECK(d.result == "invalid");
  CHECK(d.matches);
  CHECK_THROWS_AS(run_check(e, "nope"), std::invalid_argument);

  const auto s = load_spec_file(SDLAB_TEST_DATA "/pareto_rows.json");
  auto bm = run_check(s, "bounded-moment", 200);
  CHECK(bm.result == "finite");
  CHECK_FALSE(bm.expected.has_value());
}

TEST_CASE("conformance suite detects a tampered expectation") {
  ConformanceOptions opt;
  opt.overrides["example-2.1:c0"] = 1.3;
  bool found = false;
  for (const auto& r : verify_fixture("example-2.1", opt)) {
    if (r.check == "c0") {
      CHECK_FALSE(r.passed);
      found = true;
    } else {
      CHECK(r.passed);
    }
  }
  CHECK(found);
}
