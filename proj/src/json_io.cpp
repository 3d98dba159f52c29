#include "iwalab/json_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "iwalab/errors.hpp"

namespace iwalab {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) {
    fail(ErrorCode::MissingField, where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

template <class T>
std::optional<T> get_opt(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

template <class T>
Json opt(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

// Integers may be given as JSON numbers or decimal strings.
mpz_class to_mpz(const Json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) {
    mpz_class x;
    if (x.set_str(j.get<std::string>(), 10) != 0) {
      fail(ErrorCode::InputError, "not a decimal integer: '" + j.get<std::string>() + "'");
    }
    return x;
  }
  fail(ErrorCode::InputError, "expected an integer, got " + j.dump());
}

ContextPtr context_of(const Json& j, const Header& h, const std::string& where) {
  const std::optional<long> p = j.contains("p") ? std::optional<long>(j.at("p").get<long>()) : h.p;
  const std::optional<int> N = j.contains("N") ? std::optional<int>(j.at("N").get<int>()) : h.N;
  if (!p) fail(ErrorCode::MissingField, where + ": missing field 'p'");
  if (!N) fail(ErrorCode::MissingField, where + ": missing field 'N'");
  return PadicContext::make(*p, *N);
}

}  // namespace

Json to_json(const Series1& f) {
  Json c = Json::array();
  for (const auto& x : f.coeffs()) c.push_back(x.get_str());
  return {{"p", f.prime()}, {"N", f.precision()}, {"D", f.truncation()}, {"coeffs", c}};
}

Json to_json(const Series2& f) {
  Json grid = Json::array();
  for (int i = 0; i <= f.d1(); ++i) {
    Json row = Json::array();
    for (int j = 0; j <= f.d2(); ++j) row.push_back(f.at(i, j).get_str());
    grid.push_back(row);
  }
  return {{"p", f.prime()}, {"N", f.precision()}, {"D1", f.d1()}, {"D2", f.d2()}, {"grid", grid}};
}

Json to_json(const P1Class& c) { return {{"a", c.a.get_str()}, {"b", c.b.get_str()}, {"M", c.M}}; }

Json to_json(const InvariantPair& x) { return {{"mu", x.mu}, {"lambda", x.lambda}}; }

Json to_json(const WeierstrassData& w) {
  return {{"mu", w.mu},
          {"lambda", w.lambda},
          {"distinguished", to_json(w.distinguished)},
          {"unit", to_json(w.unit)}};
}

Json to_json(const ElementaryModule1& M) {
  Json fs = Json::array();
  for (const auto& f : M.f_parts) fs.push_back({{"series", to_json(f.series)}, {"mult", f.mult}});
  return {{"variables", 1},
          {"p", M.ctx->prime()},
          {"N", M.ctx->precision()},
          {"D", M.D},
          {"p_parts", M.p_parts},
          {"f_parts", fs}};
}

Json to_json(const ElementaryModule2& M) {
  Json fs = Json::array();
  for (const auto& f : M.f_parts) {
    fs.push_back({{"series", to_json(f.series)}, {"mult", f.mult}, {"irreducible", f.irreducible}});
  }
  return {{"p", M.ctx->prime()},
          {"N", M.ctx->precision()},
          {"D1", M.D1},
          {"D2", M.D2},
          {"p_parts", M.p_parts},
          {"f_parts", fs},
          {"pseudo_null_bound", opt(M.pseudo_null_bound)}};
}

Json to_json(const GrowthReport& g) {
  return {{"n0", g.n0},
          {"n1", g.n1},
          {"mu_seq", g.mu_seq},
          {"lambda_seq", g.lambda_seq},
          {"mu_G", g.mu_G},
          {"m1", g.m1},
          {"c", g.c},
          {"l", opt(g.l)},
          {"lambda_stable", g.lambda_stable},
          {"monsky_m1", g.monsky_m1},
          {"m1_matches", g.m1_matches}};
}

Json to_json(const MhgReport& r) {
  auto crit = [](const CriterionResult& c) {
    return Json{{"outcome", outcome_name(c.outcome)}, {"note", c.note}};
  };
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"n", l.n}, {"mu_n", opt(l.mu_n)}, {"expected", l.expected}});
  }
  Json radii = Json::array();
  for (const auto& s : r.radii) {
    radii.push_back({{"radius", s.radius},
                     {"admissible", s.admissible},
                     {"constant", s.constant},
                     {"max_lambda", opt(s.max_lambda)},
                     {"lifts_beyond_radius", s.lifts_beyond_radius}});
  }
  return {{"criteria", {{"d", crit(r.d)}, {"e", crit(r.e)}, {"g", crit(r.g)}, {"h", crit(r.h)}}},
          {"mu_G", r.mu_G},
          {"mu_H", opt(r.mu_H)},
          {"mu_correction", r.mu_correction},
          {"mu_correction_user_supplied", r.mu_correction != 0},
          {"v_upsilon", opt(r.v_upsilon)},
          {"levels", levels},
          {"radii", radii},
          {"consistent", r.consistent},
          {"verdict", outcome_name(r.verdict)}};
}

Json to_json(const ScanEntry& e) {
  return {{"class", to_json(e.cls)},
          {"invariants", e.inv ? to_json(*e.inv) : Json(nullptr)},
          {"error", e.error ? Json(std::string(error_name(*e.error))) : Json(nullptr)},
          {"message", e.message}};
}

Json to_json(const CurveRecord& c) {
  Json bad = Json::array();
  for (const auto& b : c.bad_primes) {
    bad.push_back({{"q", b.q},
                   {"reduction", reduction_name(b.reduction)},
                   {"kodaira", b.kodaira},
                   {"tamagawa", b.tamagawa},
                   {"tamagawa_K", b.tamagawa_K},
                   {"conductor_exponent", opt(b.conductor_exponent)},
                   {"ramified_in_torsion_field", opt(b.ramified_in_torsion_field)}});
  }
  return {{"label", c.label},
          {"conductor", c.conductor},
          {"bad_primes", bad},
          {"galois_image_full", opt(c.galois_image_full)},
          {"heegner_indivisible_at_p_place", opt(c.heegner_indivisible_at_p_place)},
          {"supersingular_at_p", opt(c.supersingular_at_p)},
          {"provenance", c.provenance}};
}

Json to_json(const FieldRecord& f) {
  Json s = Json::object();
  for (const auto& [q, t] : f.splitting) s[std::to_string(q)] = splitting_name(t);
  return {{"disc", f.disc},
          {"class_number", f.class_number},
          {"p_splits", opt(f.p_splits)},
          {"splitting", s},
          {"provenance", f.provenance}};
}

Json to_json(const LfunctionRecord& l) {
  return {{"mu_plus_E", opt(l.curve.mu_plus)},
          {"mu_minus_E", opt(l.curve.mu_minus)},
          {"lambda_plus_E", opt(l.curve.lambda_plus)},
          {"lambda_minus_E", opt(l.curve.lambda_minus)},
          {"mu_plus_twist", opt(l.twist.mu_plus)},
          {"mu_minus_twist", opt(l.twist.mu_minus)},
          {"lambda_plus_twist", opt(l.twist.lambda_plus)},
          {"lambda_minus_twist", opt(l.twist.lambda_minus)},
          {"provenance", l.provenance}};
}

Json to_json(const Verdict& v) {
  Json hs = Json::array();
  for (const auto& h : v.hypotheses) {
    hs.push_back({{"name", h.name},
                  {"citation", h.citation},
                  {"status", status_name(h.status)},
                  {"detail", h.detail}});
  }
  Json cs = Json::array();
  for (const auto& c : v.conclusions) {
    cs.push_back({{"statement", c.statement}, {"citation", c.citation}, {"consumes", c.consumes}});
  }
  return {{"checker", v.checker},
          {"p", v.p},
          {"sign", v.sign ? Json(sign_name(*v.sign)) : Json(nullptr)},
          {"hypotheses", hs},
          {"conclusions", cs},
          {"notes", v.notes},
          {"all_pass", v.all_pass()},
          {"inputs_digest", v.inputs_digest}};
}

Series1 series1_from_json(const Json& j, const Header& h) {
  const ContextPtr ctx = context_of(j, h, "series");
  if (j.contains("coeffs")) {
    const Json& c = j.at("coeffs");
    const int D = get_or<int>(j, "D", static_cast<int>(c.size()) - 1);
    if (static_cast<int>(c.size()) > D + 1) fail(ErrorCode::InputError, "series: more coefficients than D+1");
    std::vector<mpz_class> v(D + 1);
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = ctx->reduced(to_mpz(c[i]));
    return Series1(ctx, D, std::move(v));
  }
  const int D = get_or<int>(j, "D", h.D1);
  Series1 s(ctx, D);
  for (const Json& t : need(j, "terms", "series")) {
    const int i = t.at(0).get<int>();
    if (i < 0 || i > D) fail(ErrorCode::InputError, "series: term degree outside 0..D");
    s.set(i, ctx->reduced(s[i] + to_mpz(t.at(1))));
  }
  return s;
}

Series2 series2_from_json(const Json& j, const Header& h) {
  const ContextPtr ctx = context_of(j, h, "series2");
  const int D1 = get_or<int>(j, "D1", h.D1), D2 = get_or<int>(j, "D2", h.D2);
  if (j.contains("upsilon")) {
    const Json& u = j.at("upsilon");
    const P1Class c = P1Class::make(ctx->prime(), to_mpz(need(u, "a", "upsilon")),
                                    to_mpz(need(u, "b", "upsilon")), get_or<int>(u, "M", h.M));
    return upsilon(c, get_or<int>(u, "n", 0), ctx, D1, D2).series;
  }
  Series2 s(ctx, D1, D2);
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    if (static_cast<int>(g.size()) > D1 + 1) fail(ErrorCode::InputError, "series2: more rows than D1+1");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (static_cast<int>(g[i].size()) > D2 + 1) {
        fail(ErrorCode::InputError, "series2: row longer than D2+1");
      }
      for (std::size_t k = 0; k < g[i].size(); ++k) {
        s.set(static_cast<int>(i), static_cast<int>(k), ctx->reduced(to_mpz(g[i][k])));
      }
    }
    return s;
  }
  for (const Json& t : need(j, "terms", "series2")) {
    const int a = t.at(0).get<int>(), b = t.at(1).get<int>();
    if (a < 0 || a > D1 || b < 0 || b > D2) fail(ErrorCode::InputError, "series2: term outside the grid");
    s.set(a, b, ctx->reduced(s.at(a, b) + to_mpz(t.at(2))));
  }
  return s;
}

P1Class class_from_json(const Json& j, long p, const Header& h) {
  return P1Class::make(p, to_mpz(need(j, "a", "class")), to_mpz(need(j, "b", "class")),
                       get_or<int>(j, "M", h.M));
}

P1Class class_from_string(const std::string& s, long p, int M) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) fail(ErrorCode::InputError, "class must be given as a,b");
  mpz_class a, b;
  if (a.set_str(s.substr(0, comma), 10) != 0 || b.set_str(s.substr(comma + 1), 10) != 0) {
    fail(ErrorCode::InputError, "class coordinates must be integers: '" + s + "'");
  }
  return P1Class::make(p, a, b, M);
}

bool is_one_variable(const Json& j) { return get_or<int>(j, "variables", 2) == 1; }

ElementaryModule1 module1_from_json(const Json& j, const Header& h) {
  const ContextPtr ctx = context_of(j, h, "module");
  Header sh = h;
  sh.p = ctx->prime();
  sh.N = ctx->precision();
  sh.D1 = get_or<int>(j, "D", h.D1);
  ElementaryModule1 M{ctx, sh.D1, get_or<std::vector<int>>(j, "p_parts", {}), {}};
  for (int m : M.p_parts) {
    if (m < 1) fail(ErrorCode::InputError, "p_parts exponents must be >= 1");
  }
  if (j.contains("f_parts")) {
    for (const Json& f : j.at("f_parts")) {
      FPart1 part{series1_from_json(need(f, "series", "f_parts"), sh), get_or<int>(f, "mult", 1)};
      if (part.mult < 1) fail(ErrorCode::InputError, "multiplicity must be >= 1");
      if (part.series.truncation() != M.D) part.series = part.series.with_truncation(M.D);
      M.f_parts.push_back(std::move(part));
    }
  }
  if (M.p_parts.empty() && M.f_parts.empty()) fail(ErrorCode::ZeroModule, "module has no summands");
  return M;
}

ElementaryModule2 module2_from_json(const Json& j, const Header& h) {
  const ContextPtr ctx = context_of(j, h, "module");
  Header sh = h;
  sh.p = ctx->prime();
  sh.N = ctx->precision();
  sh.D1 = get_or<int>(j, "D1", h.D1);
  sh.D2 = get_or<int>(j, "D2", h.D2);
  ElementaryModule2 M{ctx, sh.D1, sh.D2, get_or<std::vector<int>>(j, "p_parts", {}), {},
                      get_opt<long>(j, "pseudo_null_bound")};
  if (j.contains("f_parts")) {
    for (const Json& f : j.at("f_parts")) {
      Series2 s = series2_from_json(need(f, "series", "f_parts"), sh);
      if (s.d1() != M.D1 || s.d2() != M.D2) s = s.with_truncation(M.D1, M.D2);
      if (s.precision() != ctx->precision()) s = s.with_context(ctx);
      M.f_parts.push_back(FPart2{std::move(s), get_or<int>(f, "mult", 1),
                                 get_or<bool>(f, "irreducible", false)});
    }
  }
  if (M.p_parts.empty() && M.f_parts.empty()) fail(ErrorCode::ZeroModule, "module has no summands");
  M.validate();
  return M;
}

CurveRecord curve_from_json(const Json& j) {
  CurveRecord c;
  c.label = need(j, "label", "curve").get<std::string>();
  const std::string where = "curve " + c.label;
  c.conductor = need(j, "conductor", where).get<long>();
  for (const Json& b : need(j, "bad_primes", where)) {
    BadPrime e;
    e.q = need(b, "q", where + " bad prime").get<long>();
    const std::string w = where + " q=" + std::to_string(e.q);
    e.reduction = parse_reduction(need(b, "reduction", w).get<std::string>());
    e.kodaira = need(b, "kodaira", w).get<std::string>();
    e.tamagawa = need(b, "tamagawa", w).get<long>();
    e.tamagawa_K = get_or<std::vector<long>>(b, "tamagawa_K", {});
    e.conductor_exponent = get_opt<int>(b, "conductor_exponent");
    e.ramified_in_torsion_field = get_opt<bool>(b, "ramified_in_torsion_field");
    c.bad_primes.push_back(std::move(e));
  }
  c.galois_image_full = get_opt<bool>(j, "galois_image_full");
  c.heegner_indivisible_at_p_place = get_opt<bool>(j, "heegner_indivisible_at_p_place");
  c.supersingular_at_p = get_opt<bool>(j, "supersingular_at_p");
  c.provenance = get_or<std::string>(j, "provenance", "");
  return c;
}

FieldRecord field_from_json(const Json& j) {
  FieldRecord f;
  f.disc = need(j, "disc", "field").get<long>();
  f.class_number = need(j, "class_number", "field").get<long>();
  f.p_splits = get_opt<bool>(j, "p_splits");
  if (j.contains("splitting")) {
    for (const auto& [q, s] : j.at("splitting").items()) {
      f.splitting[std::stol(q)] = parse_splitting(s.get<std::string>());
    }
  }
  f.provenance = get_or<std::string>(j, "provenance", "");
  return f;
}

LfunctionRecord lfunction_from_json(const Json& j) {
  LfunctionRecord l;
  l.curve = {get_opt<int>(j, "mu_plus_E"), get_opt<int>(j, "mu_minus_E"),
             get_opt<int>(j, "lambda_plus_E"), get_opt<int>(j, "lambda_minus_E")};
  l.twist = {get_opt<int>(j, "mu_plus_twist"), get_opt<int>(j, "mu_minus_twist"),
             get_opt<int>(j, "lambda_plus_twist"), get_opt<int>(j, "lambda_minus_twist")};
  l.provenance = get_or<std::string>(j, "provenance", "");
  l.validate();
  return l;
}

Bundle bundle_from_json(const Json& j) {
  Bundle b;
  b.name = get_or<std::string>(j, "name", "");
  b.checker = need(j, "checker", "bundle").get<std::string>();
  b.p = need(j, "p", "bundle").get<long>();
  for (const auto& s : get_or<std::vector<std::string>>(j, "signs", {})) b.signs.push_back(parse_sign(s));
  b.curve = curve_from_json(need(j, "curve", "bundle"));
  b.field = field_from_json(need(j, "field", "bundle"));
  if (j.contains("lfunction")) b.lfunction = lfunction_from_json(j.at("lfunction"));
  if (checker_uses_sign(b.checker) && b.signs.empty()) {
    fail(ErrorCode::MissingField, "bundle: checker " + b.checker + " needs 'signs'");
  }
  return b;
}

std::vector<Verdict> run_bundle(const Bundle& b) {
  std::vector<Verdict> out;
  if (b.signs.empty()) {
    out.push_back(run_checker(b.checker, b.curve, b.field, b.lfunction, b.p, std::nullopt));
  }
  for (Sign s : b.signs) out.push_back(run_checker(b.checker, b.curve, b.field, b.lfunction, b.p, s));
  return out;
}

Json bundle_report(const Bundle& b, const std::vector<Verdict>& verdicts) {
  Json vs = Json::array();
  for (const auto& v : verdicts) vs.push_back(to_json(v));
  return {{"bundle", b.name}, {"checker", b.checker}, {"label", b.curve.label},
          {"disc", b.field.disc}, {"p", b.p}, {"verdicts", vs}};
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<bool> parse_bool(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(ErrorCode::InputError, "csv: not a boolean: '" + s + "'");
}

std::optional<int> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) fail(ErrorCode::InputError, "csv: not an integer: '" + s + "'");
  return v;
}

}  // namespace

std::vector<Bundle> bundles_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::InputError, "csv: empty input");
  const std::vector<std::string> head = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < head.size(); ++i) col[head[i]] = i;
  for (const char* req : {"label", "p", "disc", "h_K", "q", "reduction", "kodaira", "c_q", "splitting"}) {
    if (!col.count(req)) fail(ErrorCode::MissingField, std::string("csv: missing column '") + req + "'");
  }
  std::vector<Bundle> out;
  std::map<std::string, std::size_t> index;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    auto cell = [&](const std::string& name) -> std::string {
      const auto it = col.find(name);
      if (it == col.end() || it->second >= cells.size()) return "";
      return cells[it->second];
    };
    const std::string key = cell("label") + "|" + cell("p") + "|" + cell("disc");
    if (!index.count(key)) {
      index[key] = out.size();
      Bundle b;
      b.name = cell("label") + "_" + cell("disc") + "_p" + cell("p");
      b.checker = cell("checker");
      b.p = std::stol(cell("p"));
      for (const auto& s : split_list(cell("signs"))) b.signs.push_back(parse_sign(s));
      b.curve.label = cell("label");
      b.curve.galois_image_full = parse_bool(cell("galois_image_full"));
      b.curve.heegner_indivisible_at_p_place = parse_bool(cell("heegner_indivisible"));
      b.curve.supersingular_at_p = parse_bool(cell("supersingular"));
      b.curve.provenance = "csv row " + std::to_string(row);
      b.field.disc = std::stol(cell("disc"));
      b.field.class_number = std::stol(cell("h_K"));
      b.field.p_splits = parse_bool(cell("p_splits"));
      b.field.provenance = b.curve.provenance;
      b.lfunction.curve = {parse_int(cell("mu_plus_E")), parse_int(cell("mu_minus_E")),
                           parse_int(cell("lambda_plus_E")), parse_int(cell("lambda_minus_E"))};
      b.lfunction.twist = {parse_int(cell("mu_plus_twist")), parse_int(cell("mu_minus_twist")),
                           parse_int(cell("lambda_plus_twist")), parse_int(cell("lambda_minus_twist"))};
      b.lfunction.provenance = b.curve.provenance;
      out.push_back(std::move(b));
    }
    Bundle& b = out[index[key]];
    BadPrime e;
    e.q = std::stol(cell("q"));
    e.reduction = parse_reduction(cell("reduction"));
    e.kodaira = cell("kodaira");
    e.tamagawa = std::stol(cell("c_q"));
    for (const auto& c : split_list(cell("c_v"))) e.tamagawa_K.push_back(std::stol(c));
    e.conductor_exponent = parse_int(cell("f_q"));
    b.curve.bad_primes.push_back(e);
    b.field.splitting[e.q] = parse_splitting(cell("splitting"));
    const auto N = parse_int(cell("conductor"));
    if (N) {
      b.curve.conductor = *N;
    } else {
      const int f = e.conductor_exponent.value_or(
          e.reduction == Reduction::SplitMult || e.reduction == Reduction::NonsplitMult ? 1 : 2);
      b.curve.conductor = (b.curve.conductor == 0 ? 1 : b.curve.conductor);
      for (int i = 0; i < f; ++i) b.curve.conductor *= e.q;
    }
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InputError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::InputError, "'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace iwalab
