#include "sdlab/serialize.hpp"

#include <cmath>

namespace sdlab {

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

json to_json(const DominationReport& r) {
  json j;
  j["functional"] = r.functional;
  j["grid"] = numbers(r.grid);
  j["values"] = numbers(r.values);
  j["argmax_n"] = r.argmax;
  j["reliable"] = r.reliable;
  j["valid"] = r.valid;
  j["reason"] = r.reason;
  j["rule"] = r.rule;
  j["c0"] = number(r.c0);
  j["scan_n"] = r.scan_n;
  j["closed_form"] = r.closed_form;
  j["limit_estimate"] = number(r.limit_estimate);
  if (r.hypothesis_holds) {
    j["hypothesis_holds"] = *r.hypothesis_holds;
    j["max_violation"] = number(r.max_violation);
    if (r.violation_at) j["violation_at"] = number(*r.violation_at);
    if (r.identity_error) j["identity_error"] = number(*r.identity_error);
  }
  return j;
}

json to_json(const ConditionVerdict& v) {
  json j;
  j["name"] = v.name;
  j["verdict"] = to_string(v.verdict);
  j["rule"] = v.rule;
  j["value"] = number(v.value);
  j["value_finite"] = v.value_finite;
  j["evidence_x"] = numbers(v.evidence_x);
  j["evidence"] = numbers(v.evidence);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json to_json(const UiReport& r) {
  json j;
  j["grid"] = numbers(r.grid);
  j["values"] = numbers(r.values);
  j["argmax_n"] = r.argmax;
  j["reliable"] = r.reliable;
  j["scan_n"] = r.scan_n;
  j["closed_form"] = r.closed_form;
  j["decays"] = r.decays;
  j["rule"] = r.rule;
  return j;
}

json to_json(const MomentSup& m) {
  return json{{"value", number(m.value)}, {"argmax_n", m.argmax_n}, {"scan_n", m.scan_n},
              {"at_edge", m.at_edge}, {"finite", m.finite}};
}

json to_json(const SimReport& r) {
  json j;
  j["mode"] = r.mode;
  j["seed"] = r.seed;
  j["reps"] = r.reps;
  j["normalization"] = r.normalization;
  json cells = json::array();
  for (const SimCell& c : r.cells) {
    cells.push_back({{"n", c.n}, {"epsilon", number(c.eps)}, {"p_hat", number(c.p_hat)}, {"se", number(c.se)},
                     {"R", c.reps}, {"seed", c.seed}});
  }
  j["cells"] = cells;
  json rows = json::array();
  for (const SimRow& w : r.rows) {
    rows.push_back({{"n", w.n}, {"b_n", number(w.b_n)}, {"mean_ratio", number(w.mean_ratio)}});
  }
  j["rows"] = rows;
  if (!r.series.empty()) {
    json s = json::array();
    for (const SeriesPoint& p : r.series) {
      s.push_back({{"n", p.n}, {"epsilon", number(p.eps)}, {"block", number(p.block)}, {"partial", number(p.partial)}});
    }
    j["series"] = s;
  }
  if (!r.diagnostics.empty()) {
    json d = json::array();
    for (const auto& [eps, text] : r.diagnostics) d.push_back({{"epsilon", number(eps)}, {"value", text}});
    j["diagnostics"] = d;
    if (r.mode == "slln-path") j["diagnostic_kind"] = "proxy: fraction of paths with tail-sup < epsilon at the largest n";
  }
  if (!r.exceedances.empty()) {
    json e = json::array();
    for (const ExceedanceBlock& b : r.exceedances) {
      e.push_back({{"lo", b.lo}, {"hi", b.hi}, {"observed", number(b.observed)}, {"expected", number(b.expected)},
                   {"se", number(b.se)}});
    }
    j["exceedances"] = e;
  }
  return j;
}

json to_json(const TruncatedBounds& b) {
  return json{{"r", number(b.r)},           {"x", number(b.x)},           {"lhs_le", number(b.lhs_le)},
              {"rhs_le", number(b.rhs_le)}, {"lhs_gt", number(b.lhs_gt)}, {"rhs_gt", number(b.rhs_gt)}};
}

}  // namespace sdlab
