#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qift/certify.hpp"
#include "qift/field.hpp"
#include "qift/newton.hpp"
#include "qift/roots.hpp"
#include "qift/verify.hpp"

namespace qift {

using json = nlohmann::json;

/// Reals with infinities spelled "+inf" / "-inf".
inline json real_json(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

inline json log_json(const LogDistance& d) {
  json j;
  j["value"] = real_json(d.value);
  if (d.valuation && *d.valuation < Padic::kInfinity) j["valuation"] = *d.valuation;
  return j;
}

struct ReportOptions {
  int digits_shown = 8;
};

template <ValuedField F>
json scalar_json(const F& fld, const typename F::Scalar& x, const ReportOptions& o = {}) {
  if constexpr (std::same_as<F, PadicField>) {
    json j;
    j["digits"] = x.to_digits(o.digits_shown);
    if (!x.is_zero()) j["valuation"] = x.valuation();
    if (!x.is_exact_zero()) j["absprec"] = x.absprec();
    return j;
  } else if constexpr (std::same_as<F, ComplexField>) {
    return json{{"re", real_json(x.real())}, {"im", real_json(x.imag())}};
  } else {
    (void)fld;
    return real_json(x);
  }
}

template <ValuedField F>
json vector_json(const F& fld, const Vector<F>& v, const ReportOptions& o = {}) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar_json(fld, x, o));
  return a;
}

inline json bundle_json(const ConstantBundle& b, const std::string& field_name) {
  json j;
  j["field"] = field_name;
  j["archimedean"] = b.archimedean;
  j["dim"] = b.dim;
  j["box"] = {{"b1", real_json(b.box.b1)}, {"b2", real_json(b.box.b2)}};
  j["constants"] = {
      {"C_Jbd", real_json(b.C_Jbd)},     {"C_key", real_json(b.C_key)},         {"C_tayJ", real_json(b.C_tayJ)},
      {"C_tayf", real_json(b.C_tayf)},   {"epsilon", real_json(b.epsilon)},     {"eta", real_json(b.eta)},
      {"tau", real_json(b.tau)},         {"C1_basin", real_json(b.C1_basin)},   {"C2_lipschitz", real_json(b.C2_lipschitz)},
  };
  j["provenance"] = b.provenance;
  if (b.archimedean) {
    const auto a = check_admissible(b);
    j["admissibility"] = {{"jacobian_stays_nonzero", a.jacobian_stays_nonzero},
                          {"residual_contracts", a.residual_contracts},
                          {"iterates_in_box", a.iterates_in_box},
                          {"tau_below_one", a.tau_below_one}};
  }
  if (b.log_p_C1) j["log_p_C1"] = *b.log_p_C1;
  return j;
}

inline json checks_json(const IterationChecks& c) {
  return {{"in_basin", c.in_basin},
          {"jacobian_stable", c.jacobian_stable},
          {"residual_decayed", c.residual_decayed},
          {"ball_contained", c.ball_contained}};
}

template <ValuedField F>
json solve_json(const F& fld, const SolveOutcome<F>& out, const ReportOptions& o = {}) {
  json j;
  j["status"] = to_string(out.status);
  j["iterations"] = out.iterations;
  j["max_iters"] = out.max_iters;
  j["certified"] = out.certified;
  j["field"] = fld.name();
  json per = json::array();
  for (const auto& r : out.trace.records) {
    json e;
    e["i"] = r.index;
    e["residual_log"] = log_json(r.residual_log);
    e["jacobian_log"] = log_json(r.jacobian_log);
    if (r.step_log) e["step_log"] = log_json(*r.step_log);
    if (r.schedule) e["c_i"] = real_json(*r.schedule);
    e["checks"] = checks_json(r.checks);
    per.push_back(e);
  }
  j["per_iteration"] = per;
  json fin;
  fin["Q"] = out.Q ? vector_json(fld, *out.Q, o) : json(nullptr);
  fin["bound_lhs"] = real_json(out.bound_lhs);
  fin["bound_rhs"] = real_json(out.bound_rhs);
  fin["satisfied"] = out.satisfied;
  if (out.bound_tolerance > 0) fin["bound_tolerance"] = real_json(out.bound_tolerance);
  if (out.certified_absprec) fin["certified_absprec"] = *out.certified_absprec;
  j["final"] = fin;
  if (out.violation_step) j["violation_step"] = *out.violation_step;
  if (!out.violation.empty()) j["violation"] = out.violation;
  if (!out.message.empty()) j["message"] = out.message;
  return j;
}

template <ValuedField F>
json roots_json(const UniPoly<F>& g, const std::vector<RootWithMultiplicity<F>>& roots, const ReportOptions& o = {}) {
  json j;
  j["field"] = g.field().name();
  j["polynomial"] = g.to_string();
  json a = json::array();
  int total = 0;
  for (const auto& r : roots) {
    a.push_back({{"root", scalar_json(g.field(), r.root, o)}, {"multiplicity", r.multiplicity}});
    total += r.multiplicity;
  }
  j["roots"] = a;
  j["multiplicity_total"] = total;
  j["degree"] = g.degree();
  return j;
}

template <ValuedField F>
json shift_json(const F& fld, const RootShiftResult<F>& r, const ReportOptions& o = {}) {
  json j;
  j["field"] = fld.name();
  j["beta"] = scalar_json(fld, r.beta, o);
  j["mode"] = to_string(r.mode);
  j["bound_lhs"] = real_json(r.bound_lhs);
  j["bound_rhs"] = real_json(r.bound_rhs);
  j["constant"] = real_json(r.constant);
  j["distance"] = real_json(r.distance);
  j["D"] = real_json(r.D);
  j["theta"] = real_json(r.theta);
  j["iterations"] = r.iterations;
  j["satisfied"] = r.satisfied;
  if (r.krasner_margin) {
    j["krasner_margin"] = real_json(*r.krasner_margin);
    j["rational"] = r.rational;
  }
  return j;
}

inline json case_json(const InequalityReport& r) {
  return {{"name", r.name},   {"lhs", real_json(r.lhs)}, {"rhs", real_json(r.rhs)}, {"slack", real_json(r.slack)},
          {"holds", r.holds}, {"exact", r.exact},        {"context", r.context}};
}

inline json suite_json(const SuiteResult& s) {
  json cases = json::array();
  for (const auto& c : s.cases) cases.push_back(case_json(c));
  json j{{"suite", s.suite}, {"cases", cases}, {"all_pass", s.all_pass}};
  if (!s.first_failure.empty()) j["first_failure"] = s.first_failure;
  return j;
}

inline json suites_json(const std::vector<SuiteResult>& all) {
  json a = json::array();
  for (const auto& s : all) a.push_back(suite_json(s));
  return {{"suites", a}, {"all_pass", all_pass(all)}};
}

// --- schema validation ------------------------------------------------------------

namespace detail {

inline bool is_real(const json& j) {
  return j.is_number() || (j.is_string() && (j == "+inf" || j == "-inf" || j == "nan"));
}

struct SchemaCheck {
  std::optional<std::string> error;

  void require(const json& j, const std::string& key, bool (*pred)(const json&), const std::string& what) {
    if (error) return;
    if (!j.is_object() || !j.contains(key)) error = "missing key '" + key + "'";
    else if (!pred(j.at(key))) error = "key '" + key + "' is not " + what;
  }
};

inline bool is_bool(const json& j) { return j.is_boolean(); }
inline bool is_int(const json& j) { return j.is_number_integer(); }
inline bool is_str(const json& j) { return j.is_string(); }
inline bool is_arr(const json& j) { return j.is_array(); }
inline bool is_obj(const json& j) { return j.is_object(); }

}  // namespace detail

/// nullopt when the solve report is well formed, else the first problem found.
inline std::optional<std::string> validate_solve_json(const json& j) {
  detail::SchemaCheck c;
  c.require(j, "status", detail::is_str, "a string");
  c.require(j, "iterations", detail::is_int, "an integer");
  c.require(j, "per_iteration", detail::is_arr, "an array");
  c.require(j, "final", detail::is_obj, "an object");
  if (c.error) return c.error;
  for (const auto& e : j["per_iteration"]) {
    c.require(e, "i", detail::is_int, "an integer");
    c.require(e, "residual_log", detail::is_obj, "an object");
    c.require(e, "jacobian_log", detail::is_obj, "an object");
    c.require(e, "checks", detail::is_obj, "an object");
    if (c.error) return c.error;
    c.require(e["residual_log"], "value", detail::is_real, "a real");
    for (const char* k : {"in_basin", "jacobian_stable", "residual_decayed", "ball_contained"})
      c.require(e["checks"], k, detail::is_bool, "a boolean");
  }
  const auto& f = j["final"];
  c.require(f, "bound_lhs", detail::is_real, "a real");
  c.require(f, "bound_rhs", detail::is_real, "a real");
  c.require(f, "satisfied", detail::is_bool, "a boolean");
  if (!c.error && !f.contains("Q")) c.error = "missing key 'Q'";
  if (!c.error && !(f["Q"].is_null() || f["Q"].is_array())) c.error = "key 'Q' is not an array or null";
  return c.error;
}

inline std::optional<std::string> validate_suite_json(const json& j) {
  detail::SchemaCheck c;
  c.require(j, "suite", detail::is_str, "a string");
  c.require(j, "cases", detail::is_arr, "an array");
  c.require(j, "all_pass", detail::is_bool, "a boolean");
  if (c.error) return c.error;
  for (const auto& e : j["cases"]) {
    c.require(e, "name", detail::is_str, "a string");
    c.require(e, "lhs", detail::is_real, "a real");
    c.require(e, "rhs", detail::is_real, "a real");
    c.require(e, "slack", detail::is_real, "a real");
    c.require(e, "holds", detail::is_bool, "a boolean");
    c.require(e, "context", detail::is_str, "a string");
    if (c.error) return c.error;
  }
  return std::nullopt;
}

inline std::optional<std::string> validate_suites_json(const json& j) {
  detail::SchemaCheck c;
  c.require(j, "suites", detail::is_arr, "an array");
  c.require(j, "all_pass", detail::is_bool, "a boolean");
  if (c.error) return c.error;
  for (const auto& s : j["suites"])
    if (auto e = validate_suite_json(s)) return e;
  return std::nullopt;
}

inline std::optional<std::string> validate_bundle_json(const json& j) {
  detail::SchemaCheck c;
  c.require(j, "field", detail::is_str, "a string");
  c.require(j, "box", detail::is_obj, "an object");
  c.require(j, "constants", detail::is_obj, "an object");
  c.require(j, "provenance", detail::is_obj, "an object");
  if (c.error) return c.error;
  for (const char* k : {"C_Jbd", "C_key", "C_tayJ", "C_tayf", "epsilon", "eta", "tau", "C1_basin", "C2_lipschitz"}) {
    c.require(j["constants"], k, detail::is_real, "a real");
    c.require(j["provenance"], k, detail::is_str, "a string");
  }
  return c.error;
}

inline std::optional<std::string> validate_roots_json(const json& j) {
  detail::SchemaCheck c;
  c.require(j, "field", detail::is_str, "a string");
  c.require(j, "polynomial", detail::is_str, "a string");
  c.require(j, "roots", detail::is_arr, "an array");
  if (c.error) return c.error;
  for (const auto& r : j["roots"]) {
    c.require(r, "multiplicity", detail::is_int, "an integer");
    if (!c.error && !r.contains("root")) c.error = "missing key 'root'";
  }
  return c.error;
}

}  // namespace qift
