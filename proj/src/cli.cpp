#include "iwalab/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "iwalab/arithmetic_data.hpp"
#include "iwalab/errors.hpp"
#include "iwalab/json_io.hpp"
#include "iwalab/module_engine.hpp"
#include "iwalab/specialize.hpp"

namespace iwalab {

namespace {

struct Options {
  int N = 8;
  int D = 64;
  std::optional<int> D1, D2;
  int M = 6;
  std::optional<long> p;
  int jobs = 0;
  std::string format = "json";
  bool timestamps = false;

  // Subcommand arguments.
  std::string module, series, curve, field, lfun, csv, bundle, golden, checker, cls, kind;
  std::string sign, lambdas;
  int n = 0, n0 = 0, n1 = 3, m = 0, s = 1, radius = 1, mu_correction = 0;
  bool heegner = false;

  int d1() const { return D1.value_or(D); }
  int d2() const { return D2.value_or(D); }
  Header header() const { return Header{p, N, d1(), d2(), M}; }
};

// IWALAB_PRECISION="N=10,D=96,M=8" (keys N, D, D1, D2, M).
void apply_env(Options& o) {
  const char* env = std::getenv("IWALAB_PRECISION");
  if (!env) return;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::InputError, "IWALAB_PRECISION: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    int value = 0;
    try {
      value = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::InputError, "IWALAB_PRECISION: bad value in '" + item + "'");
    }
    if (key == "N") o.N = value;
    else if (key == "D") o.D = value;
    else if (key == "D1") o.D1 = value;
    else if (key == "D2") o.D2 = value;
    else if (key == "M") o.M = value;
    else fail(ErrorCode::InputError, "IWALAB_PRECISION: unknown key '" + key + "'");
  }
}

void validate(const Options& o) {
  if (o.N < 1) fail(ErrorCode::InputError, "--N must be >= 1");
  if (o.d1() < 0 || o.d2() < 0) fail(ErrorCode::InputError, "truncations must be >= 0");
  if (o.M < 1) fail(ErrorCode::InputError, "--M must be >= 1");
  if (o.jobs < 0) fail(ErrorCode::InputError, "--jobs must be >= 0");
  if (o.format != "json" && o.format != "text") fail(ErrorCode::InputError, "--format is json or text");
}

Json precision_of(long p, int N, int D1, int D2, std::optional<int> M) {
  return {{"p", p}, {"N", N}, {"D1", D1}, {"D2", D2}, {"M", M ? Json(*M) : Json(nullptr)}};
}

Json precision_of(const ElementaryModule2& mod, std::optional<int> M) {
  return precision_of(mod.ctx->prime(), mod.ctx->precision(), mod.D1, mod.D2, M);
}

void render_text(const Json& j, std::ostream& out, const std::string& indent) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured()) {
        out << indent << k << ":\n";
        render_text(v, out, indent + "  ");
      } else {
        out << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    const bool flat = std::none_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); });
    if (flat) {
      out << indent << j.dump() << "\n";
      return;
    }
    for (const auto& v : j) {
      out << indent << "-\n";
      render_text(v, out, indent + "  ");
    }
  } else {
    out << indent << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void render_verdict_text(const Json& v, std::ostream& out) {
  out << v["checker"].get<std::string>() << "  p=" << v["p"].dump();
  if (!v["sign"].is_null()) out << "  sign=" << v["sign"].get<std::string>();
  out << "\n";
  for (const auto& h : v["hypotheses"]) {
    out << "  [" << h["status"].get<std::string>() << "] " << h["name"].get<std::string>() << " ("
        << h["citation"].get<std::string>() << ")";
    if (!h["detail"].get<std::string>().empty()) out << ": " << h["detail"].get<std::string>();
    out << "\n";
  }
  for (const auto& c : v["conclusions"]) {
    out << "  => " << c["statement"].get<std::string>() << " (" << c["citation"].get<std::string>()
        << ")\n";
  }
  if (v["conclusions"].empty()) out << "  no conclusion: not every hypothesis passed\n";
  for (const auto& n : v["notes"]) out << "  note: " << n.get<std::string>() << "\n";
}

void emit(const Options& o, Json j, std::ostream& out) {
  if (o.timestamps) {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    j["generated_at"] = buf;
  }
  if (o.format == "json") {
    out << j.dump(2) << "\n";
    return;
  }
  if (j.contains("verdicts")) {
    for (const auto& [k, v] : j.items()) {
      if (k != "verdicts" && !v.is_structured()) out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
    for (const auto& v : j["verdicts"]) render_verdict_text(v, out);
    return;
  }
  render_text(j, out, "");
}

long require_p(const Options& o, const char* cmd) {
  if (!o.p) fail(ErrorCode::MissingField, std::string(cmd) + " needs --p");
  return *o.p;
}

ElementaryModule2 load_module2(const Options& o) {
  if (o.module.empty()) fail(ErrorCode::MissingField, "--module is required");
  const Json j = read_json_file(o.module);
  if (is_one_variable(j)) fail(ErrorCode::InputError, o.module + ": expected a two-variable module");
  return module2_from_json(j, o.header());
}

P1Class load_class(const Options& o, long p) {
  if (o.cls.empty()) fail(ErrorCode::MissingField, "--class is required");
  return class_from_string(o.cls, p, o.M);
}

int cmd_prep(const Options& o, std::ostream& out) {
  if (o.series.empty()) fail(ErrorCode::MissingField, "--series is required");
  const Json j = read_json_file(o.series);
  if (j.contains("grid") || j.contains("D1") || j.contains("upsilon")) {
    const Series2 f = series2_from_json(j, o.header());
    const WeierstrassT2 w = weierstrass_T2(f);
    emit(o,
         {{"mu", w.mu},
          {"degree", w.degree},
          {"distinguished", to_json(w.distinguished)},
          {"unit", to_json(w.unit)},
          {"precision", precision_of(f.prime(), f.precision(), f.d1(), f.d2(), std::nullopt)}},
         out);
    return kExitOk;
  }
  Header h = o.header();
  const Series1 f = series1_from_json(j, h);
  Json r = to_json(weierstrass(f));
  r["precision"] = precision_of(f.prime(), f.precision(), f.truncation(), f.truncation(), std::nullopt);
  emit(o, r, out);
  return kExitOk;
}

int cmd_invariants(const Options& o, std::ostream& out) {
  if (o.module.empty()) fail(ErrorCode::MissingField, "--module is required");
  const Json j = read_json_file(o.module);
  if (is_one_variable(j)) {
    const ElementaryModule1 M = module1_from_json(j, o.header());
    Json r = to_json(M.invariants());
    r["precision"] = precision_of(M.ctx->prime(), M.ctx->precision(), M.D, M.D, std::nullopt);
    emit(o, r, out);
    return kExitOk;
  }
  const ElementaryModule2 M = module2_from_json(j, o.header());
  const Invariants2 inv = invariants_2var(M);
  Json r{{"mu_G", inv.mu_G}, {"g_bar", to_json(inv.g_bar)}, {"precision", precision_of(M, std::nullopt)}};
  if (M.pseudo_null_bound) r["pseudo_null_bound"] = *M.pseudo_null_bound;
  emit(o, r, out);
  return kExitOk;
}

int cmd_special(const Options& o, std::ostream& out) {
  const long p = require_p(o, "special-polys");
  const ContextPtr ctx = PadicContext::make(p, o.N);
  const int D = o.d1();
  Series1 f(ctx, D);
  if (o.kind == "phi") {
    f = phi(ctx, D, o.n);
  } else if (o.kind == "omega") {
    f = omega_pm(ctx, D, o.n, parse_sign(o.sign.empty() ? "+" : o.sign));
  } else if (o.kind == "nu") {
    f = nu(ctx, D, o.m, o.n);
  } else {
    fail(ErrorCode::InputError, "--kind must be phi, omega or nu");
  }
  Json r = to_json(f);
  r["kind"] = o.kind;
  r["precision"] = precision_of(p, o.N, D, D, std::nullopt);
  emit(o, r, out);
  return kExitOk;
}

int cmd_monsky(const Options& o, std::ostream& out) {
  const ElementaryModule2 M = load_module2(o);
  const P1Class c = load_class(o, M.ctx->prime());
  const Invariants2 inv = invariants_2var(M);
  const int v = monsky_valuation(inv.g_bar, c);
  emit(o,
       {{"v_upsilon", v},
        {"mhg_g_criterion", v == 0 ? "HOLDS" : "FAILS"},
        {"class", to_json(c)},
        {"precision", precision_of(M, c.M)}},
       out);
  return kExitOk;
}

int cmd_specialize(const Options& o, std::ostream& out) {
  if (!o.series.empty()) {
    const Json j = read_json_file(o.series);
    const Series2 f = series2_from_json(j, o.header());
    const P1Class c = load_class(o, f.prime());
    const Specialization s = specialize(f, c, o.n);
    const InvariantPair raw = s.raw();
    long pn = 1;
    for (int i = 0; i < o.n; ++i) pn *= f.prime();
    emit(o,
         {{"series", to_json(s.series)},
          {"p_exponent", s.p_exponent},
          {"n", o.n},
          {"mu_raw", raw.mu},
          {"lambda", raw.lambda},
          {"mu_over_pn", raw.mu % pn == 0 ? Json(raw.mu / pn) : Json(nullptr)},
          {"class", to_json(c)},
          {"precision", precision_of(f.prime(), f.precision(), f.d1(), f.d2(), c.M)}},
         out);
    return kExitOk;
  }
  const ElementaryModule2 M = load_module2(o);
  const P1Class c = load_class(o, M.ctx->prime());
  Json r = to_json(coinvariant_invariants(M, c, o.n));
  r["n"] = o.n;
  r["class"] = to_json(c);
  r["precision"] = precision_of(M, c.M);
  emit(o, r, out);
  return kExitOk;
}

int cmd_growth(const Options& o, std::ostream& out) {
  const ElementaryModule2 M = load_module2(o);
  const P1Class c = load_class(o, M.ctx->prime());
  Json r = to_json(growth_scan(M, c, o.n0, o.n1));
  r["class"] = to_json(c);
  r["precision"] = precision_of(M, c.M);
  emit(o, r, out);
  return kExitOk;
}

int cmd_mhg(const Options& o, std::ostream& out) {
  const ElementaryModule2 M = load_module2(o);
  const P1Class c = load_class(o, M.ctx->prime());
  const MhgReport rep = mhg_check(M, c, o.n0, o.n1, o.radius, o.mu_correction);
  Json r = to_json(rep);
  r["class"] = to_json(c);
  r["precision"] = precision_of(M, c.M);
  if (M.pseudo_null_bound) r["pseudo_null_bound"] = *M.pseudo_null_bound;
  emit(o, r, out);
  return rep.g.outcome == Outcome::Inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_rank_s(const Options& o, std::ostream& out) {
  if (o.module.empty()) fail(ErrorCode::MissingField, "--module is required");
  const ElementaryModule1 M = module1_from_json(read_json_file(o.module), o.header());
  emit(o,
       {{"rank_s", rank_s(M, o.s)},
        {"s", o.s},
        {"precision", precision_of(M.ctx->prime(), M.ctx->precision(), M.D, M.D, std::nullopt)}},
       out);
  return kExitOk;
}

int cmd_rank_bound(const Options& o, std::ostream& out) {
  std::vector<int> ls;
  std::stringstream ss(o.lambdas);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      ls.push_back(std::stoi(item));
    } catch (const std::exception&) {
      fail(ErrorCode::InputError, "--lambdas must be four integers");
    }
  }
  const RankBound rb = rank_bound(ls, o.heegner);
  Json precision = precision_of(0, o.N, o.d1(), o.d2(), std::nullopt);
  precision["p"] = o.p ? Json(*o.p) : Json(nullptr);
  emit(o,
       {{"lower", rb.lower},
        {"upper", rb.upper},
        {"lambdas", ls},
        {"heegner", o.heegner},
        {"precision", precision}},
       out);
  return kExitOk;
}

int verdict_exit(const std::vector<Verdict>& vs) {
  const bool ok = std::all_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.all_pass(); });
  return ok ? kExitOk : kExitFails;
}

int cmd_check_curve(const Options& o, std::ostream& out) {
  if (!o.csv.empty()) {
    std::ifstream in(o.csv);
    if (!in) fail(ErrorCode::InputError, "cannot open '" + o.csv + "'");
    std::vector<Bundle> bundles = bundles_from_csv(in);
    for (auto& b : bundles) {
      if (b.checker.empty()) b.checker = o.checker;
      if (b.checker.empty()) fail(ErrorCode::MissingField, "csv row without checker; pass --checker");
      if (b.signs.empty() && checker_uses_sign(b.checker)) b.signs = {parse_sign(o.sign.empty() ? "+" : o.sign)};
    }
    std::vector<std::vector<Verdict>> results(bundles.size());
    std::vector<std::string> errors(bundles.size());
    const long count = static_cast<long>(bundles.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      try {
        results[i] = run_bundle(bundles[i]);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (!errors[i].empty()) fail(ErrorCode::InputError, bundles[i].name + ": " + errors[i]);
    }
    Json reports = Json::array();
    int code = kExitOk;
    for (std::size_t i = 0; i < bundles.size(); ++i) {
      reports.push_back(bundle_report(bundles[i], results[i]));
      code = std::max(code, verdict_exit(results[i]));
    }
    if (o.format == "text") {
      for (const auto& r : reports) emit(o, r, out);
    } else {
      emit(o, {{"reports", reports}}, out);
    }
    return code;
  }
  if (o.curve.empty() || o.field.empty()) fail(ErrorCode::MissingField, "--curve and --field are required");
  Bundle b;
  b.checker = o.checker;
  b.p = require_p(o, "check-curve");
  b.curve = curve_from_json(read_json_file(o.curve));
  b.field = field_from_json(read_json_file(o.field));
  if (!o.lfun.empty()) b.lfunction = lfunction_from_json(read_json_file(o.lfun));
  if (checker_uses_sign(b.checker)) {
    if (o.sign.empty()) {
      b.signs = {Sign::Plus, Sign::Minus};
    } else {
      b.signs = {parse_sign(o.sign)};
    }
  }
  const auto vs = run_bundle(b);
  emit(o, bundle_report(b, vs), out);
  return verdict_exit(vs);
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.bundle.empty()) fail(ErrorCode::MissingField, "--bundle is required");
  const Bundle b = bundle_from_json(read_json_file(o.bundle));
  const auto vs = run_bundle(b);
  const Json report = bundle_report(b, vs);
  emit(o, report, out);
  if (!o.golden.empty()) {
    const Json golden = read_json_file(o.golden);
    if (golden != report) {
      err << "verdict differs from golden file " << o.golden << "\n";
      return kExitFails;
    }
  }
  return verdict_exit(vs);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Iwasawa-theoretic invariant engine and hypothesis checkers", "iwalab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--N", o.N, "p-adic precision (default 8)");
  app.add_option("--D", o.D, "truncation degree for both variables (default 64)");
  app.add_option("--D1", o.D1, "T1 truncation");
  app.add_option("--D2", o.D2, "T2 truncation");
  app.add_option("--M", o.M, "class precision (default 6)");
  app.add_option("--p", o.p, "prime, for inputs without a header");
  app.add_option("--jobs", o.jobs, "OpenMP threads (0 = runtime default)");
  app.add_option("--format", o.format, "json or text");
  app.add_flag("--timestamps", o.timestamps, "add a generated_at field");

  auto* prep = app.add_subcommand("prep", "Weierstrass preparation of a series");
  prep->add_option("--series", o.series)->required();
  auto* invariants = app.add_subcommand("invariants", "mu/lambda or (mu_G, g_bar) of a module");
  invariants->add_option("--module", o.module)->required();
  auto* special = app.add_subcommand("special-polys", "Phi_n, omega_n^{+-}, nu_{m,n}");
  special->add_option("--kind", o.kind)->required();
  special->add_option("--n", o.n)->required();
  special->add_option("--m", o.m);
  special->add_option("--sign", o.sign);
  auto* monsky = app.add_subcommand("monsky", "Upsilon-adic valuation of g_bar");
  monsky->add_option("--module", o.module)->required();
  monsky->add_option("--class", o.cls)->required();
  auto* restrict_cmd = app.add_subcommand("specialize", "restriction to a line at level n");
  restrict_cmd->add_option("--module", o.module);
  restrict_cmd->add_option("--series", o.series);
  restrict_cmd->add_option("--class", o.cls)->required();
  restrict_cmd->add_option("--n", o.n);
  auto* growth = app.add_subcommand("growth", "mu_n, lambda_n over levels and the growth fit");
  growth->add_option("--module", o.module)->required();
  growth->add_option("--class", o.cls)->required();
  growth->add_option("--n0", o.n0);
  growth->add_option("--n1", o.n1);
  auto* mhg = app.add_subcommand("mhg", "M_H(G) criteria (d), (e), (g), (h)");
  mhg->add_option("--module", o.module)->required();
  mhg->add_option("--class", o.cls)->required();
  mhg->add_option("--n0", o.n0);
  mhg->add_option("--n1", o.n1);
  mhg->add_option("--radius", o.radius);
  mhg->add_option("--mu-correction", o.mu_correction);
  auto* rs = app.add_subcommand("rank-s", "v_p |X / nu_{2s,s}|");
  rs->add_option("--module", o.module)->required();
  rs->add_option("--s", o.s)->required();
  auto* rb = app.add_subcommand("rank-bound", "bound from four lambda invariants");
  rb->add_option("--lambdas", o.lambdas)->required();
  rb->add_flag("--heegner", o.heegner);
  auto* cc = app.add_subcommand("check-curve", "evaluate a hypothesis checker on records");
  cc->add_option("--curve", o.curve);
  cc->add_option("--field", o.field);
  cc->add_option("--lfun", o.lfun);
  cc->add_option("--csv", o.csv);
  cc->add_option("--checker", o.checker);
  cc->add_option("--sign", o.sign);
  auto* ve = app.add_subcommand("verify-example", "replay a bundle, optionally against a golden file");
  ve->add_option("--bundle", o.bundle)->required();
  ve->add_option("--golden", o.golden);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const Options flags = o;
    apply_env(o);
    // Explicit flags win over the environment.
    if (app.count("--N")) o.N = flags.N;
    if (app.count("--D")) o.D = flags.D;
    if (app.count("--D1")) o.D1 = flags.D1;
    if (app.count("--D2")) o.D2 = flags.D2;
    if (app.count("--M")) o.M = flags.M;
    validate(o);
    if (o.jobs > 0) omp_set_num_threads(o.jobs);
    if (cc->parsed() && o.csv.empty() && o.checker.empty()) {
      fail(ErrorCode::MissingField, "--checker is required");
    }

    if (prep->parsed()) return cmd_prep(o, out);
    if (invariants->parsed()) return cmd_invariants(o, out);
    if (special->parsed()) return cmd_special(o, out);
    if (monsky->parsed()) return cmd_monsky(o, out);
    if (restrict_cmd->parsed()) return cmd_specialize(o, out);
    if (growth->parsed()) return cmd_growth(o, out);
    if (mhg->parsed()) return cmd_mhg(o, out);
    if (rs->parsed()) return cmd_rank_s(o, out);
    if (rb->parsed()) return cmd_rank_bound(o, out);
    if (cc->parsed()) return cmd_check_curve(o, out);
    if (ve->parsed()) return cmd_verify(o, out, err);
  } catch (const Error& e) {
    err << "iwalab: " << e.what() << "\n";
    return e.code() == ErrorCode::PrecisionInconclusive ? kExitInconclusive : kExitInput;
  } catch (const Json::exception& e) {
    err << "iwalab: malformed input: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace iwalab
