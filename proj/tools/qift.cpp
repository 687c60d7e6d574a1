// Command-line front end: solve, roots, certify and verify with JSON reports.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "qift/qift.hpp"
#include "qift/report.hpp"

namespace {

using namespace qift;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

const char* kFieldGrammar = "field  := real | complex | padic:<p>[:<digits>]\n";

struct Common {
  std::string field = "real";
  std::string out;
  int digits_shown = 8;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int emit(const Common& c, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      std::cerr << "cannot write " << c.out << "\n";
      return kExitFailed;
    }
    f << text;
  }
  return kExitOk;
}

json error_json(const Error& e) { return {{"error", to_string(e.code())}, {"message", e.what()}}; }

// Smallest box radius holding the point: 1 or more over R and C; a power of p over Q_p.
template <ValuedField F>
double default_radius(const F& fld, const Vector<F>& P) {
  const double n = std::max(1.0, sup_norm(fld, P));
  if constexpr (F::archimedean) {
    return n;
  } else {
    double r = 1.0;
    while (r < n) r *= fld.p;
    return r;
  }
}

struct SolveArgs {
  std::string map, point, target;
  std::optional<double> b1, b2;
  double epsilon = 0.5;
  int max_iters = 0;
  bool no_basin = false;
};

template <ValuedField F>
int run_solve(const F& fld, const Common& c, const SolveArgs& a) {
  PolyMap<F> phi;
  Vector<F> P, q;
  try {
    phi = parse_map(fld, a.map);
    P = parse_vector(fld, a.point);
    q = parse_vector(fld, a.target);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const double r = default_radius(fld, P);
  const double b1 = a.b1.value_or(r);
  const double b2 = a.b2.value_or(F::archimedean ? 2.0 * b1 : b1);
  const auto bundle = certify(phi, Box{b1, b2}, a.epsilon);
  SolveOptions opts;
  opts.max_iters = a.max_iters;
  opts.enforce_basin = !a.no_basin;
  const auto out = solve(phi, P, q, bundle, opts);
  json j = solve_json(fld, out, ReportOptions{c.digits_shown});
  j["bundle"] = bundle_json(bundle, fld.name());
  j["map"] = parse_map(a.map).to_string();
  const int rc = emit(c, j);
  return rc != kExitOk ? rc : (out.solved() ? kExitOk : kExitFailed);
}

struct CertifyArgs {
  std::string map;
  double b1 = 1.0, b2 = 2.0;
  double epsilon = 0.5;
};

template <ValuedField F>
int run_certify(const F& fld, const Common& c, const CertifyArgs& a) {
  PolyMap<F> phi;
  try {
    phi = parse_map(fld, a.map);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto bundle = certify(phi, Box{a.b1, a.b2}, a.epsilon);
  json j = bundle_json(bundle, fld.name());
  j["map"] = parse_map(a.map).to_string();
  return emit(c, j);
}

struct RootsArgs {
  std::string poly, from, alpha, mode = "II";
  std::optional<double> D;
};

template <ValuedField F>
int run_roots(const F& fld, const Common& c, const RootsArgs& a) {
  UniPoly<F> g, f;
  typename F::Scalar alpha{};
  const ShiftMode mode = a.mode == "I" ? ShiftMode::VersionI_exponent_n_minus_1 : ShiftMode::VersionII_exponent_1;
  try {
    g = parse_unipoly(fld, a.poly);
    if (!a.from.empty()) {
      f = parse_unipoly(fld, a.from);
      alpha = parse_scalar(fld, a.alpha);
    }
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (a.from.empty()) {
    json j = roots_json(g, all_roots(g), ReportOptions{c.digits_shown});
    j["polynomial"] = parse_unipoly(a.poly).to_string();
    return emit(c, j);
  }
  json j = shift_json(fld, shift_root(f, g, alpha, mode, a.D), ReportOptions{c.digits_shown});
  j["f"] = parse_unipoly(a.from).to_string();
  j["g"] = parse_unipoly(a.poly).to_string();
  const int rc = emit(c, j);
  return rc != kExitOk ? rc : (j["satisfied"].get<bool>() ? kExitOk : kExitFailed);
}

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 1;
  std::uint32_t p = 3, pv = 3, pw = 5;
  int m = 2, n = 2;
  double kappa = 1.5;
  std::string alpha = "3", beta = "5";
};

mpq_class parse_rational(const std::string& s) {
  try {
    mpq_class q(s, 10);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw UsageError("not a rational number: " + s);
  }
}

int run_verify(const Common& c, const VerifyArgs& a) {
  if (a.suite == "squaring-product") {
    const auto r = run_example_squaring_product(a.p, a.m, a.kappa);
    SuiteResult s{"squaring-product", {}, true, {}};
    s.cases.push_back(r.distribution);
    std::string ctx = "p=" + std::to_string(a.p) + " m=" + std::to_string(a.m);
    s.cases.push_back(detail::approx_report("ratio", std::abs(r.ratio - a.kappa), 2.0 / a.m, ctx));
    detail::finalize(s);
    json j = suite_json(s);
    j["ratio"] = r.ratio;
    j["delta_V"] = real_json(r.delta_V);
    j["delta_W"] = real_json(r.delta_W);
    j["equality_violated"] = r.equality_violated;
    const int rc = emit(c, j);
    return rc != kExitOk ? rc : (s.all_pass ? kExitOk : kExitFailed);
  }
  if (a.suite == "place-dependence") {
    const auto r = run_example_place_dependence(a.pv, a.pw, parse_rational(a.alpha), parse_rational(a.beta), a.n);
    const bool pass = r.sign_at_v != r.sign_at_w;
    json j{{"suite", "place-dependence"},
           {"Q", r.Q},
           {"sign_at_v", r.sign_at_v},
           {"sign_at_w", r.sign_at_w},
           {"margin_v", real_json(r.margin_v)},
           {"margin_w", real_json(r.margin_w)},
           {"solver_agrees", r.solver_agrees},
           {"all_pass", pass}};
    const int rc = emit(c, j);
    return rc != kExitOk ? rc : (pass ? kExitOk : kExitFailed);
  }
  std::vector<SuiteResult> results;
  const VerifyOptions opts;
  if (a.suite == "all") results = run_all(a.seed, opts);
  else if (a.suite == "distribution") results = {suite_distribution(a.seed, opts.distribution_instances)};
  else if (a.suite == "distribution-equality") results = {suite_distribution_equality(a.seed, opts.distribution_instances)};
  else if (a.suite == "separation") results = {suite_separation(a.seed, opts.separation_instances, std::nullopt)};
  else if (a.suite == "taylor") results = {suite_taylor(a.seed, opts.taylor_instances)};
  else if (a.suite == "symbolic") results = {suite_symbolic()};
  else throw UsageError("unknown suite: " + a.suite);
  const int rc = emit(c, suites_json(results));
  return rc != kExitOk ? rc : (all_pass(results) ? kExitOk : kExitFailed);
}

template <class Fn>
int with_field(const Common& c, Fn&& fn) {
  FieldSpec spec;
  try {
    spec = parse_field_spec(c.field);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return std::visit([&](const auto& fld) { return fn(fld); }, spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified Newton iteration and root transport over R, C and Q_p"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--field", common.field, "real | complex | padic:<p>[:<digits>]");
    sub->add_option("--out", common.out, "write the JSON report here instead of stdout");
    sub->add_option("--digits", common.digits_shown, "p-adic digits shown per scalar")->check(CLI::PositiveNumber);
  };

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Newton iteration from P toward a preimage of q");
  add_common(solve_cmd);
  solve_cmd->add_option("--map", sa.map, "components separated by ';'")->required();
  solve_cmd->add_option("--point", sa.point, "starting point P, comma separated")->required();
  solve_cmd->add_option("--target", sa.target, "target q, comma separated")->required();
  solve_cmd->add_option("--b1", sa.b1, "inner box radius");
  solve_cmd->add_option("--b2", sa.b2, "outer box radius");
  solve_cmd->add_option("--epsilon", sa.epsilon, "schedule exponent in (0, 1)");
  solve_cmd->add_option("--max-iters", sa.max_iters, "iteration cap (0: field default)");
  solve_cmd->add_flag("--no-basin", sa.no_basin, "iterate even outside the certified basin (uncertified)");

  CertifyArgs ca;
  auto* certify_cmd = app.add_subcommand("certify", "constants of the iteration on a box");
  add_common(certify_cmd);
  certify_cmd->add_option("--map", ca.map, "components separated by ';'")->required();
  certify_cmd->add_option("--b1", ca.b1, "inner box radius");
  certify_cmd->add_option("--b2", ca.b2, "outer box radius");
  certify_cmd->add_option("--epsilon", ca.epsilon, "schedule exponent in (0, 1)");

  RootsArgs ra;
  auto* roots_cmd = app.add_subcommand("roots", "roots of g, or transport of a root alpha of f to g");
  add_common(roots_cmd);
  roots_cmd->add_option("--poly", ra.poly, "g in t")->required();
  roots_cmd->add_option("--from", ra.from, "monic f in t with f(alpha) = 0");
  roots_cmd->add_option("--alpha", ra.alpha, "root of f");
  roots_cmd->add_option("--mode", ra.mode, "I or II")->check(CLI::IsMember({"I", "II"}));
  roots_cmd->add_option("--D", ra.D, "declared bound on the Gauss norms of f and g");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "inequality and counterexample suites");
  add_common(verify_cmd);
  verify_cmd->add_option("--suite", va.suite,
                         "all | distribution | distribution-equality | separation | taylor | symbolic | "
                         "squaring-product | place-dependence");
  verify_cmd->add_option("--seed", va.seed, "random seed");
  verify_cmd->add_option("--p", va.p, "prime for squaring-product");
  verify_cmd->add_option("--m", va.m, "exponent m for squaring-product")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--kappa", va.kappa, "kappa in [1, 2] for squaring-product");
  verify_cmd->add_option("--pv", va.pv, "first prime for place-dependence");
  verify_cmd->add_option("--pw", va.pw, "second prime for place-dependence");
  verify_cmd->add_option("--alpha", va.alpha, "alpha for place-dependence");
  verify_cmd->add_option("--beta", va.beta, "beta for place-dependence");
  verify_cmd->add_option("--n", va.n, "exponent n for place-dependence")->check(CLI::PositiveNumber);

  auto usage = [&](const std::string& msg) {
    std::cerr << "error: " << msg << "\n\n" << app.help() << "\n" << kFieldGrammar << kMapGrammar << "\n";
    return kExitUsage;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << "\n" << kFieldGrammar << kMapGrammar << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return usage(e.what());
  }

  try {
    if (*solve_cmd) return with_field(common, [&](const auto& f) { return run_solve(f, common, sa); });
    if (*certify_cmd) return with_field(common, [&](const auto& f) { return run_certify(f, common, ca); });
    if (*roots_cmd) {
      if (!ra.from.empty() && ra.alpha.empty()) throw UsageError("--from needs --alpha");
      return with_field(common, [&](const auto& f) { return run_roots(f, common, ra); });
    }
    if (*verify_cmd) return run_verify(common, va);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const Error& e) {
    emit(common, error_json(e));
    return kExitFailed;
  }
  return usage("no command");
}
