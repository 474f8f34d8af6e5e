#include "sdlab/spec_json.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace sdlab {

using nlohmann::json;

namespace {

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SpecError(where + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SpecError(where + ": bad \"" + key + "\": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

using Key = std::pair<std::size_t, std::size_t>;

std::map<Key, double> parse_entries(const json& w, const char* what) {
  std::map<Key, double> out;
  if (!w.contains("entries")) return out;
  if (!w["entries"].is_array()) throw SpecError(std::string(what) + ": \"entries\" must be an array");
  for (const json& e : w["entries"]) {
    out[{get<std::size_t>(e, "n", what), get<std::size_t>(e, "i", what)}] = get<double>(e, "value", what);
  }
  return out;
}

RowLength parse_k(const json& j) {
  if (!j.contains("k") || (j["k"].is_string() && j["k"] == "n")) return [](std::size_t n) { return n; };
  const json& k = j["k"];
  if (k.is_number_unsigned() || k.is_number_integer()) {
    const long long c = k.get<long long>();
    if (c < 1) throw SpecError("spec: constant row length must be >= 1");
    return [c](std::size_t) { return static_cast<std::size_t>(c); };
  }
  if (k.is_array()) {
    std::vector<std::size_t> ks;
    for (const json& v : k) {
      if (!v.is_number_integer() || v.get<long long>() < 1) throw SpecError("spec: row lengths must be integers >= 1");
      ks.push_back(v.get<std::size_t>());
    }
    return [ks](std::size_t n) {
      if (n == 0 || n > ks.size()) throw std::out_of_range("row beyond the declared row lengths");
      return ks[n - 1];
    };
  }
  throw SpecError("spec: \"k\" must be \"n\", an integer or an array");
}

WeightScheme parse_weights(const json& j, const RowLength& k) {
  if (!j.contains("weights")) return WeightScheme::uniform(k);
  const json& w = j["weights"];
  const std::string kind = get<std::string>(w, "kind", "weights");
  if (kind == "uniform") return WeightScheme::uniform(k);
  const double fallback = get_or<double>(w, "default", 0.0, "weights");
  const auto entries = parse_entries(w, "weights");
  for (const auto& [key, v] : entries) {
    if (!(v >= 0.0)) throw SpecError("weights: entries must be nonnegative");
  }
  auto runs = [k, entries, fallback](std::size_t n) {
    std::vector<WeightRun> out;
    for (std::size_t i = 1; i <= k(n); ++i) {
      auto it = entries.find({n, i});
      out.push_back({i, 1, it == entries.end() ? fallback : it->second});
    }
    return out;
  };
  if (kind == "explicit") return WeightScheme::explicit_runs(k, runs);
  if (kind == "c-normalized") {
    const std::string flavor = get_or<std::string>(w, "flavor", "sum", "weights");
    if (flavor == "sum") return WeightScheme::from_c(k, runs, WeightScheme::Kind::c_normalized_sum);
    if (flavor == "squares") return WeightScheme::from_c(k, runs, WeightScheme::Kind::c_normalized_squares);
    throw SpecError("weights: flavor must be \"sum\" or \"squares\"");
  }
  throw SpecError("weights: unknown kind \"" + kind + "\"");
}

RowDependence parse_dependence(const json& j) {
  if (!j.contains("dependence")) return Independent{};
  const json& d = j["dependence"];
  const std::string kind = get<std::string>(d, "kind", "dependence");
  if (kind == "independent") return Independent{};
  if (kind == "gaussian-na") {
    const double rho = get<double>(d, "correlation", "dependence");
    if (rho > 0.0 || rho < -0.5) throw SpecError("dependence: correlation must lie in [-0.5, 0]");
    return GaussianNA{rho};
  }
  throw SpecError("dependence: unknown kind \"" + kind + "\"");
}

NormalizingSequence parse_normalizing(const json& j, double p, const SlowlyVaryingSpec& L) {
  if (!j.contains("normalizing")) return NormalizingSequence::power(p);
  const json& b = j["normalizing"];
  const std::string kind = get<std::string>(b, "kind", "normalizing");
  const double bp = get_or<double>(b, "p", p, "normalizing");
  if (kind == "power") return NormalizingSequence::power(bp);
  if (kind == "power-with-conjugate") {
    const std::string form = get_or<std::string>(b, "form", "inner", "normalizing");
    const auto f = form == "outer" ? NormalizingSequence::ConjugateForm::outer : NormalizingSequence::ConjugateForm::inner;
    return NormalizingSequence::power_with(bp, L.conjugate(), f);
  }
  if (kind == "explicit") {
    std::vector<double> v = get<std::vector<double>>(b, "values", "normalizing");
    if (v.empty()) throw SpecError("normalizing: empty value list");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0) || (i > 0 && v[i] < v[i - 1])) throw SpecError("normalizing: values must be positive and nondecreasing");
    }
    return NormalizingSequence::custom(
        [v](std::size_t n) {
          if (n > v.size()) throw std::out_of_range("normalizing sequence queried beyond its values");
          return v[n - 1];
        },
        "explicit");
  }
  throw SpecError("normalizing: unknown kind \"" + kind + "\"");
}

}  // namespace

DistSpec parse_dist(const json& j) {
  if (!j.is_object()) throw SpecError("dist: expected an object");
  const std::string kind = get<std::string>(j, "kind", "dist");
  if (kind == "pm1") return SymmetricPM1{};
  if (kind == "zero") return point_mass_zero();
  if (kind == "two-point") {
    const double m = get<double>(j, "magnitude", "dist");
    const double q = get_or<double>(j, "prob", 1.0, "dist");
    if (!(m > 0.0) || !(q > 0.0 && q <= 1.0)) throw SpecError("dist: two-point needs magnitude > 0 and prob in (0, 1]");
    return SymmetricTwoPoint{m, q};
  }
  if (kind == "pareto") {
    const double a = get<double>(j, "alpha", "dist");
    const double c = get_or<double>(j, "cutoff", 1.0, "dist");
    if (!(a > 0.0) || !(c >= 1.0)) throw SpecError("dist: pareto needs alpha > 0 and cutoff >= 1");
    return ParetoTail{a, c};
  }
  if (kind == "discrete") {
    std::vector<std::pair<double, double>> atoms;
    for (const json& a : get<json>(j, "atoms", "dist")) {
      if (!a.is_array() || a.size() != 2) throw SpecError("dist: atoms are [value, prob] pairs");
      atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
    try {
      return discrete_dist(std::move(atoms), get_or<std::string>(j, "label", "discrete", "dist"));
    } catch (const std::invalid_argument& e) {
      throw SpecError(std::string("dist: ") + e.what());
    }
  }
  throw SpecError("dist: unknown kind \"" + kind + "\"");
}

SlowlyVaryingSpec parse_svf(const json& j) {
  const std::string family = get<std::string>(j, "family", "svf");
  if (family == "constant") return SlowlyVaryingSpec::constant_one();
  if (family == "log-power") return SlowlyVaryingSpec::log_power(get<double>(j, "gamma", "svf"));
  if (family == "loglog-power") return SlowlyVaryingSpec::loglog_power(get<double>(j, "gamma", "svf"));
  if (family == "product") {
    std::vector<SlowlyVaryingSpec> fs;
    for (const json& f : get<json>(j, "factors", "svf")) fs.push_back(parse_svf(f));
    return SlowlyVaryingSpec::product(std::move(fs));
  }
  throw SpecError("svf: unknown family \"" + family + "\"");
}

LoadedSpec spec_from_fixture(const std::string& name, std::optional<double> p, int nu) {
  LoadedSpec s;
  try {
    s.fixture = load_fixture(name, p, nu);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  s.name = name;
  s.array = s.fixture->array;
  s.weights = s.fixture->weights;
  s.p = s.fixture->p;
  s.nu = nu;
  s.b = s.fixture->b;
  return s;
}

LoadedSpec parse_spec(const json& j) {
  if (!j.is_object()) throw SpecError("spec: top level must be an object");
  const std::optional<double> p = j.contains("p") ? std::optional<double>(get<double>(j, "p", "spec")) : std::nullopt;
  const int nu = get_or<int>(j, "nu", 1, "spec");
  for (const char* key : {"fixture", "generator"}) {
    if (j.contains(key)) {
      LoadedSpec s = spec_from_fixture(get<std::string>(j, key, "spec"), p, nu);
      if (j.contains("svf")) s.L = parse_svf(j["svf"]);
      return s;
    }
  }

  LoadedSpec s;
  s.name = get_or<std::string>(j, "name", "spec", "spec");
  s.p = p.value_or(1.0);
  s.nu = nu;
  if (!(s.p > 0.0)) throw SpecError("spec: p must be > 0");
  if (j.contains("svf")) s.L = parse_svf(j["svf"]);
  const std::size_t rows = get<std::size_t>(j, "rows", "spec");
  if (rows < 1) throw SpecError("spec: rows must be >= 1");
  const RowLength k = parse_k(j);
  const bool mean_zero = get_or<bool>(j, "mean_zero", true, "spec");

  std::optional<DistSpec> fallback;
  if (j.contains("default")) fallback = parse_dist(j["default"]);
  std::map<Key, DistSpec> cells;
  if (j.contains("cells")) {
    if (!j["cells"].is_array()) throw SpecError("spec: \"cells\" must be an array");
    for (const json& c : j["cells"]) {
      const std::size_t n = get<std::size_t>(c, "n", "cell");
      const std::size_t i = get<std::size_t>(c, "i", "cell");
      if (n < 1 || n > rows) throw SpecError("cell: row index out of range");
      if (i < 1 || i > k(n)) throw SpecError("cell: column index out of range");
      cells.emplace(Key{n, i}, parse_dist(get<json>(c, "dist", "cell")));
    }
  }
  if (!fallback) {
    for (std::size_t n = 1; n <= rows; ++n) {
      for (std::size_t i = 1; i <= k(n); ++i) {
        if (!cells.count({n, i})) {
          std::ostringstream os;
          os << "spec: cell (" << n << ", " << i << ") has no distribution and there is no \"default\"";
          throw SpecError(os.str());
        }
      }
    }
  }
  auto cell = [cells, fallback](std::size_t n, std::size_t i) -> DistSpec {
    auto it = cells.find({n, i});
    if (it != cells.end()) return it->second;
    return *fallback;
  };
  try {
    s.array = ArraySpec::from_cells(k, cell, mean_zero, parse_dependence(j)).with_declared_rows(rows);
    s.weights = parse_weights(j, k).with_declared_rows(rows);
    s.b = parse_normalizing(j, s.p, s.L);
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("spec: ") + e.what());
  }
  return s;
}

LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SpecError("parse error in '" + path + "': " + e.what());
  }
  return parse_spec(j);
}

}  // namespace sdlab
