#include "iwalab/arithmetic_data.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "iwalab/errors.hpp"
#include "iwalab/json_io.hpp"
#include "iwalab/module_engine.hpp"

namespace iwalab {

const char* reduction_name(Reduction r) {
  switch (r) {
    case Reduction::Good: return "good";
    case Reduction::SplitMult: return "split-mult";
    case Reduction::NonsplitMult: return "nonsplit-mult";
    case Reduction::Additive: return "additive";
  }
  return "good";
}

const char* splitting_name(Splitting s) {
  switch (s) {
    case Splitting::Split: return "split";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
  }
  return "split";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Unknown: return "unknown";
  }
  return "unknown";
}

const char* sign_name(Sign s) { return s == Sign::Plus ? "+" : "-"; }

Reduction parse_reduction(const std::string& s) {
  if (s == "good") return Reduction::Good;
  if (s == "split-mult") return Reduction::SplitMult;
  if (s == "nonsplit-mult") return Reduction::NonsplitMult;
  if (s == "additive") return Reduction::Additive;
  fail(ErrorCode::InputError, "unknown reduction type '" + s + "'");
}

Splitting parse_splitting(const std::string& s) {
  if (s == "split") return Splitting::Split;
  if (s == "inert") return Splitting::Inert;
  if (s == "ramified") return Splitting::Ramified;
  fail(ErrorCode::InputError, "unknown splitting type '" + s + "'");
}

Sign parse_sign(const std::string& s) {
  if (s == "+" || s == "plus") return Sign::Plus;
  if (s == "-" || s == "minus") return Sign::Minus;
  fail(ErrorCode::InputError, "sign must be + or -, got '" + s + "'");
}

Kodaira Kodaira::parse(const std::string& s) {
  using F = Family;
  static const std::pair<const char*, F> fixed[] = {
      {"II", F::II},         {"III", F::III},         {"IV", F::IV},
      {"II*", F::IIStar},    {"III*", F::IIIStar},    {"IV*", F::IVStar}};
  for (const auto& [name, fam] : fixed) {
    if (s == name) return Kodaira{fam, 0};
  }
  auto bad = [&] { fail(ErrorCode::MalformedKodaira, "cannot parse Kodaira symbol '" + s + "'"); };
  if (s.size() < 2 || s[0] != 'I') bad();
  std::string rest = s.substr(1);
  bool star = false;
  if (rest.front() == '*') {
    star = true;
    rest.erase(0, 1);
  } else if (rest.back() == '*') {
    star = true;
    rest.pop_back();
  }
  if (rest.empty() || rest.size() > 6 ||
      !std::all_of(rest.begin(), rest.end(), [](unsigned char c) { return std::isdigit(c); })) {
    bad();
  }
  return Kodaira{star ? F::IStar : F::I, std::stoi(rest)};
}

std::string Kodaira::str() const {
  switch (family) {
    case Family::I: return "I" + std::to_string(n);
    case Family::IStar: return "I" + std::to_string(n) + "*";
    case Family::II: return "II";
    case Family::III: return "III";
    case Family::IV: return "IV";
    case Family::IIStar: return "II*";
    case Family::IIIStar: return "III*";
    case Family::IVStar: return "IV*";
  }
  return "I0";
}

std::vector<long> BadPrime::local_tamagawa(Splitting s) const {
  if (!tamagawa_K.empty()) return tamagawa_K;
  if (s == Splitting::Split) return {tamagawa, tamagawa};
  return {tamagawa};
}

void CurveRecord::validate() const {
  if (conductor < 1) fail(ErrorCode::InputError, label + ": conductor must be positive");
  bool all_exponents = true;
  long product = 1;
  for (const auto& b : bad_primes) {
    const std::string where = label + ", q=" + std::to_string(b.q);
    if (b.q < 2 || conductor % b.q != 0) fail(ErrorCode::InputError, where + ": q does not divide N");
    if (b.reduction == Reduction::Good) fail(ErrorCode::InputError, where + ": bad prime with good reduction");
    if (b.tamagawa < 1) fail(ErrorCode::InputError, where + ": Tamagawa number < 1");
    for (long c : b.tamagawa_K) {
      if (c < 1) fail(ErrorCode::InputError, where + ": Tamagawa number < 1");
    }
    const Kodaira k = Kodaira::parse(b.kodaira);
    const bool mult = b.reduction == Reduction::SplitMult || b.reduction == Reduction::NonsplitMult;
    if (mult != (k.family == Kodaira::Family::I && k.n > 0)) {
      fail(ErrorCode::InputError, where + ": reduction type disagrees with Kodaira symbol " + b.kodaira);
    }
    if (b.conductor_exponent) {
      const int f = *b.conductor_exponent;
      if ((mult && f != 1) || (!mult && f < 2)) {
        fail(ErrorCode::InputError, where + ": conductor exponent inconsistent with reduction");
      }
      for (int i = 0; i < f; ++i) product *= b.q;
    } else {
      all_exponents = false;
    }
  }
  if (all_exponents && product != conductor) {
    fail(ErrorCode::InputError, label + ": conductor " + std::to_string(conductor) +
                                    " differs from the product over bad primes " +
                                    std::to_string(product));
  }
}

void FieldRecord::validate() const {
  if (disc >= 0) fail(ErrorCode::InputError, "field discriminant must be negative");
  if (class_number < 1) fail(ErrorCode::InputError, "class number must be >= 1");
}

void LfunctionRecord::validate() const {
  for (const SignedInvariants* s : {&curve, &twist}) {
    for (const auto& v : {s->mu_plus, s->mu_minus, s->lambda_plus, s->lambda_minus}) {
      if (v && *v < 0) fail(ErrorCode::InputError, "L-function invariants must be >= 0");
    }
  }
}

bool Verdict::all_pass() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const HypothesisResult& h) { return h.status == Status::Pass; });
}

KidaResult kida_check(const BadPrime& entry, Splitting splitting, long p) {
  if (splitting == Splitting::Ramified) {
    fail(ErrorCode::InputError, "q=" + std::to_string(entry.q) + " ramifies in K");
  }
  const Kodaira k = Kodaira::parse(entry.kodaira);
  KidaResult r;
  r.a = k.family == Kodaira::Family::I && k.n > 0 && k.n % p == 0;
  r.rational_fallback = entry.tamagawa_K.empty();
  const auto cv = entry.local_tamagawa(splitting);
  r.c = std::all_of(cv.begin(), cv.end(), [&](long c) { return c % p == 0; });
  if (entry.ramified_in_torsion_field) r.b = !*entry.ramified_in_torsion_field;
  r.consistent = r.a == r.c && (!r.b || *r.b == r.a);
  return r;
}

namespace {

int vp_long(long x, long p) {
  int v = 0;
  while (x != 0 && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace

std::optional<int> omega_mu_contribution(const BadPrime& entry, bool splits_completely,
                                         const FieldRecord& field, long p) {
  if (!splits_completely) return 0;
  if (entry.reduction == Reduction::Good || entry.reduction == Reduction::Additive) return 0;
  const auto it = field.splitting.find(entry.q);
  const std::optional<Splitting> s =
      it == field.splitting.end() ? std::nullopt : std::optional<Splitting>(it->second);
  const bool covered = entry.reduction == Reduction::SplitMult ||
                       (entry.reduction == Reduction::NonsplitMult && s == Splitting::Inert);
  if (!covered) return std::nullopt;
  return vp_long(entry.local_tamagawa(s.value_or(Splitting::Inert)).front(), p);
}

namespace {

struct Context {
  const CurveRecord& curve;
  const FieldRecord& field;
  long p;
  std::string prefix;  // checker name used in citations
  Verdict v;

  HypothesisResult& add(const std::string& name, const std::string& letter, Status s,
                        std::string detail) {
    v.hypotheses.push_back({name, prefix + " hypothesis " + letter, s, std::move(detail)});
    return v.hypotheses.back();
  }

  void conclude(const std::string& statement, const std::string& tag) {
    if (!v.all_pass()) return;
    std::vector<std::string> names;
    for (const auto& h : v.hypotheses) names.push_back(h.name);
    v.conclusions.push_back({statement, prefix + " conclusion " + tag, std::move(names)});
  }

  Splitting split_of(long q) const { return field.splitting.at(q); }

  std::vector<const BadPrime*> primes_with(Splitting s) const {
    std::vector<const BadPrime*> out;
    for (const auto& b : curve.bad_primes) {
      if (split_of(b.q) == s) out.push_back(&b);
    }
    return out;
  }

  bool has_ramified() const { return !primes_with(Splitting::Ramified).empty(); }

  std::vector<long> cv(const BadPrime& b) {
    if (b.tamagawa_K.empty()) {
      v.notes.push_back("c_v at q=" + std::to_string(b.q) +
                        " taken from the rational c_q (lower confidence)");
    }
    return b.local_tamagawa(split_of(b.q));
  }
};

std::string join_primes(const std::vector<const BadPrime*>& ps) {
  std::string s;
  for (const auto* b : ps) s += (s.empty() ? "" : "*") + std::to_string(b->q);
  return s.empty() ? "1" : s;
}

Status from_bool(std::optional<bool> b) {
  if (!b) return Status::Unknown;
  return *b ? Status::Pass : Status::Fail;
}

int exponent_of(const BadPrime& b) {
  if (b.conductor_exponent) return *b.conductor_exponent;
  return b.reduction == Reduction::SplitMult || b.reduction == Reduction::NonsplitMult ? 1 : 2;
}

void require_fields(const CurveRecord& curve, const FieldRecord& field, long p, bool need_p) {
  std::vector<std::string> missing;
  for (const auto& b : curve.bad_primes) {
    if (!field.splitting.count(b.q)) missing.push_back("field.splitting[" + std::to_string(b.q) + "]");
  }
  if (need_p && !field.p_splits) missing.push_back("field.p_splits (p=" + std::to_string(p) + ")");
  if (!missing.empty()) {
    std::string msg = "missing data:";
    for (const auto& m : missing) msg += " " + m;
    fail(ErrorCode::MissingField, msg);
  }
  curve.validate();
  field.validate();
  if (p < 5) fail(ErrorCode::InputError, "p must be a prime >= 5");
}

void finish(Context& cx, const LfunctionRecord* lfun) {
  std::vector<std::string> seen;
  for (auto& n : cx.v.notes) {
    if (std::find(seen.begin(), seen.end(), n) == seen.end()) seen.push_back(n);
  }
  cx.v.notes = std::move(seen);
  const Json in{{"checker", cx.v.checker},
                {"curve", to_json(cx.curve)},
                {"field", to_json(cx.field)},
                {"lfunction", lfun ? to_json(*lfun) : Json(nullptr)},
                {"p", cx.p},
                {"sign", cx.v.sign ? Json(sign_name(*cx.v.sign)) : Json(nullptr)}};
  cx.v.inputs_digest = sha256_hex(in.dump());
}

void record_checks(Context& cx) {
  for (const auto& b : cx.curve.bad_primes) {
    const Splitting s = cx.split_of(b.q);
    if (s == Splitting::Ramified) continue;
    const KidaResult k = kida_check(b, s, cx.p);
    if (!k.consistent) {
      cx.v.notes.push_back("record inconsistency at q=" + std::to_string(b.q) + ": Kodaira " +
                           b.kodaira + (k.a ? " has" : " lacks") + " p | n but c_v" +
                           (k.c ? " is" : " is not") + " divisible by p");
    }
  }
}

void sign_preconditions(Context& cx) {
  cx.add("p_splits_in_K", "(standing)", from_bool(cx.field.p_splits), "p = " + std::to_string(cx.p));
  cx.add("supersingular_at_p", "(standing)", from_bool(cx.curve.supersingular_at_p), "");
}

void common_bc(Context& cx) {
  cx.add("p_nmid_class_number", "(b)",
         cx.field.class_number % cx.p != 0 ? Status::Pass : Status::Fail,
         "h_K = " + std::to_string(cx.field.class_number));
  cx.add("galois_image_full", "(c)", from_bool(cx.curve.galois_image_full), "");
}

void mu_zero(Context& cx, const LfunctionRecord& lf, Sign s, const std::string& letter) {
  const auto a = lf.curve.mu(s), b = lf.twist.mu(s);
  Status st = Status::Unknown;
  if ((a && *a != 0) || (b && *b != 0)) st = Status::Fail;
  else if (a && b) st = Status::Pass;
  auto show = [](std::optional<int> x) { return x ? std::to_string(*x) : std::string("null"); };
  cx.add(std::string("mu_zero_") + (s == Sign::Plus ? "plus" : "minus"), letter, st,
         "mu(E) = " + show(a) + ", mu(E^K) = " + show(b));
}

// N^- squarefree with the requested parity of prime factors.
void nminus_parity(Context& cx, bool odd) {
  const auto inert = cx.primes_with(Splitting::Inert);
  const std::string name = odd ? "nminus_squarefree_odd" : "nminus_squarefree_even";
  if (cx.has_ramified()) {
    cx.add(name, "(a)", Status::Unknown, "a bad prime ramifies in K; N^+ N^- undefined");
    return;
  }
  const bool squarefree =
      std::all_of(inert.begin(), inert.end(), [](const BadPrime* b) { return exponent_of(*b) == 1; });
  const bool parity = (inert.size() % 2 == 1) == odd;
  cx.add(name, "(a)", squarefree && parity ? Status::Pass : Status::Fail,
         "N^- = " + join_primes(inert) + (squarefree ? "" : " (not squarefree)"));
}

}  // namespace

Verdict check_anticyclotomic_failure(const CurveRecord& curve, const FieldRecord& field,
                                     const LfunctionRecord& lfun, long p, Sign sign) {
  require_fields(curve, field, p, true);
  lfun.validate();
  Context cx{curve, field, p, "anticyclotomic-failure", {}};
  cx.v.checker = "anticyclotomic-failure";
  cx.v.p = p;
  cx.v.sign = sign;
  sign_preconditions(cx);
  nminus_parity(cx, true);
  common_bc(cx);

  const auto inert = cx.primes_with(Splitting::Inert);
  Status d = cx.has_ramified() ? Status::Unknown : Status::Pass;
  std::string dd;
  for (const auto* b : inert) {
    const long r = b->q % p;
    if (r != 1 && r != p - 1) continue;
    const long c = cx.cv(*b).front();
    dd += (dd.empty() ? "" : "; ") + ("q=" + std::to_string(b->q) + ": c_v=" + std::to_string(c));
    if (c % p == 0) d = Status::Fail;
  }
  cx.add("nminus_congruent_primes_tamagawa", "(d)", d,
         dd.empty() ? "no q | N^- with q = +-1 mod p" : dd);

  Status e = Status::Fail;
  std::string ed;
  for (const auto* b : inert) {
    const bool mult = b->reduction == Reduction::SplitMult || b->reduction == Reduction::NonsplitMult;
    const long c = cx.cv(*b).front();
    if (mult && c % p == 0) {
      e = Status::Pass;
      ed = "q=" + std::to_string(b->q) + ": " + b->kodaira + ", c_v=" + std::to_string(c);
      break;
    }
  }
  if (e == Status::Fail && cx.has_ramified()) e = Status::Unknown;
  cx.add("nminus_multiplicative_p_divides_tamagawa", "(e)", e,
         ed.empty() ? "no multiplicative q | N^- with p | c_v" : ed);
  mu_zero(cx, lfun, sign, "(f)");

  const std::string s = sign_name(sign);
  cx.conclude("H_ac lies in H_s^{" + s + "*}; X^{Gr," + s + s +
                  "}(E/K_inf)_f is not finitely generated over Lambda(H_ac): M_H(G) fails for H_ac",
              "(1)");
  cx.conclude("if X^{Gr}(E/K_inf)_f is finitely generated over Lambda(H_ac) then "
              "mu_{G/H_ac}(T_Lambda([F_{Lambda_2}(X^{Gr}(E/K_inf))]_{H_ac})) > 0",
              "(2)");
  record_checks(cx);
  finish(cx, &lfun);
  return cx.v;
}

Verdict check_split_pair_failure(const CurveRecord& curve, const FieldRecord& field,
                                 const LfunctionRecord& lfun, long p, Sign sign) {
  require_fields(curve, field, p, true);
  lfun.validate();
  Context cx{curve, field, p, "split-pair-failure", {}};
  cx.v.checker = "split-pair-failure";
  cx.v.p = p;
  cx.v.sign = sign;
  sign_preconditions(cx);
  nminus_parity(cx, false);
  common_bc(cx);

  Status d = cx.has_ramified() ? Status::Unknown : Status::Fail;
  std::string dd = "no split-multiplicative q | N^+ with p | c_v at both primes";
  for (const auto* b : cx.primes_with(Splitting::Split)) {
    if (b->reduction != Reduction::SplitMult) continue;
    const auto cv = cx.cv(*b);
    if (cv.size() == 2 && cv[0] % p == 0 && cv[1] % p == 0) {
      d = Status::Pass;
      dd = "q=" + std::to_string(b->q) + ": " + b->kodaira + ", c_v=" + std::to_string(cv[0]) +
           "," + std::to_string(cv[1]);
      break;
    }
  }
  cx.add("nplus_split_multiplicative_both_primes", "(d)", d, dd);
  mu_zero(cx, lfun, sign, "(e)");

  const auto a = lfun.curve.lambda(sign), b = lfun.twist.lambda(sign);
  Status f = Status::Unknown;
  if (a && b) f = *a + *b <= 2 ? Status::Pass : Status::Fail;
  auto show = [](std::optional<int> x) { return x ? std::to_string(*x) : std::string("null"); };
  cx.add(std::string("lambda_sum_at_most_2_") + (sign == Sign::Plus ? "plus" : "minus"), "(f)", f,
         "lambda(E) + lambda(E^K) = " + show(a) + " + " + show(b));

  const std::string s = sign_name(sign);
  cx.conclude("there are distinct H_1, H_2 in H_s^{" + s + "*} with X^{Gr," + s + s +
                  "}(E/K_inf)_f not finitely generated over Lambda(H_i): M_H(G) fails for both",
              "(1)");
  cx.conclude("for i = 1, 2: if X^{Gr}(E/K_inf)_f is finitely generated over Lambda(H_i) then "
              "mu_{G/H_i}(T_Lambda([F_{Lambda_2}(X^{Gr}(E/K_inf))]_{H_i})) > 0",
              "(2)");
  record_checks(cx);
  finish(cx, &lfun);
  return cx.v;
}

namespace {

void rational_tamagawa(Context& cx, const std::string& letter) {
  long prod = 1;
  std::string where;
  for (const auto& b : cx.curve.bad_primes) {
    prod *= b.tamagawa;
    if (b.tamagawa % cx.p == 0) where += " q=" + std::to_string(b.q);
  }
  cx.add("p_nmid_tamagawa_product", letter, where.empty() ? Status::Pass : Status::Fail,
         "prod c_q = " + std::to_string(prod) + (where.empty() ? "" : "; p | c_q at" + where));
}

}  // namespace

Verdict check_free_structure(const CurveRecord& curve, const FieldRecord& field, long p) {
  require_fields(curve, field, p, false);
  Context cx{curve, field, p, "free-structure", {}};
  cx.v.checker = "free-structure";
  cx.v.p = p;
  const auto split = cx.primes_with(Splitting::Split);
  cx.add("heegner_hypothesis", "(standing)",
         split.size() == curve.bad_primes.size() ? Status::Pass : Status::Fail,
         "split bad primes: " + join_primes(split));
  cx.add("heegner_point_indivisible", "(a)", from_bool(curve.heegner_indivisible_at_p_place), "");
  rational_tamagawa(cx, "(b)");
  std::string bad;
  for (const auto& b : curve.bad_primes) {
    const bool mult = b.reduction == Reduction::SplitMult || b.reduction == Reduction::NonsplitMult;
    if (mult && b.q % p == 1) bad += " " + std::to_string(b.q);
  }
  cx.add("multiplicative_primes_not_1_mod_p", "(c)", bad.empty() ? Status::Pass : Status::Fail,
         bad.empty() ? "" : "l = 1 mod p at" + bad);
  cx.conclude("X(E/K_inf) is free of rank 2 over Lambda_2", "(1)");
  cx.conclude("Y(E/K_inf^H) is finite for every H in H^{**}; the finiteness conjecture for "
              "Y holds",
              "(2)");
  cx.conclude("the companion conjecture on X(E/K_inf) holds", "(3)");
  record_checks(cx);
  finish(cx, nullptr);
  return cx.v;
}

Verdict check_rank_bound(const CurveRecord& curve, const FieldRecord& field,
                         const LfunctionRecord& lfun, long p) {
  require_fields(curve, field, p, true);
  lfun.validate();
  Context cx{curve, field, p, "rank-bound", {}};
  cx.v.checker = "rank-bound";
  cx.v.p = p;
  cx.add("supersingular_at_p", "(standing)", from_bool(curve.supersingular_at_p), "");
  const auto split = cx.primes_with(Splitting::Split);
  const bool all_split = split.size() == curve.bad_primes.size() && field.p_splits.value_or(false);
  cx.add("pN_primes_split", "(a)", all_split ? Status::Pass : Status::Fail,
         "split: " + join_primes(split) + (field.p_splits.value_or(false) ? ", p" : ""));
  common_bc(cx);
  cx.add("heegner_point_indivisible", "(d)", from_bool(curve.heegner_indivisible_at_p_place), "");
  rational_tamagawa(cx, "(e)");
  for (Sign s : {Sign::Plus, Sign::Minus}) {
    const auto a = lfun.curve.lambda(s), b = lfun.twist.lambda(s);
    Status f = Status::Unknown;
    if (a && b) f = *a + *b == 1 ? Status::Pass : Status::Fail;
    auto show = [](std::optional<int> x) { return x ? std::to_string(*x) : std::string("null"); };
    cx.add(std::string("lambda_sum_one_") + (s == Sign::Plus ? "plus" : "minus"), "(f)", f,
           "lambda(E) + lambda(E^K) = " + show(a) + " + " + show(b));
  }
  mu_zero(cx, lfun, Sign::Plus, "(g)");
  mu_zero(cx, lfun, Sign::Minus, "(g)");
  if (cx.v.all_pass()) {
    const RankBound rb = rank_bound({1, 1, 1, 1}, true);
    cx.conclude("t <= " + std::to_string(rb.upper) +
                    ": at most that many Z_p-extensions of K carry unbounded rank of E",
                "(bound)");
  }
  record_checks(cx);
  finish(cx, &lfun);
  return cx.v;
}

const std::vector<std::string>& checker_names() {
  static const std::vector<std::string> names{"anticyclotomic-failure", "split-pair-failure",
                                              "free-structure", "rank-bound"};
  return names;
}

bool checker_uses_sign(const std::string& checker) {
  return checker == "anticyclotomic-failure" || checker == "split-pair-failure";
}

Verdict run_checker(const std::string& checker, const CurveRecord& curve, const FieldRecord& field,
                    const LfunctionRecord& lfun, long p, std::optional<Sign> sign) {
  if (checker_uses_sign(checker) && !sign) {
    fail(ErrorCode::MissingField, "checker " + checker + " needs a sign");
  }
  Verdict v;
  if (checker == "anticyclotomic-failure") {
    v = check_anticyclotomic_failure(curve, field, lfun, p, *sign);
  } else if (checker == "split-pair-failure") {
    v = check_split_pair_failure(curve, field, lfun, p, *sign);
  } else if (checker == "free-structure") {
    v = check_free_structure(curve, field, p);
  } else if (checker == "rank-bound") {
    v = check_rank_bound(curve, field, lfun, p);
  } else {
    fail(ErrorCode::InputError, "unknown checker '" + checker + "'");
  }
  return v;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace iwalab
