#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "iwalab/arithmetic_data.hpp"
#include "iwalab/errors.hpp"
#include "iwalab/json_io.hpp"

using namespace iwalab;

namespace {

const std::string kData = IWALAB_DATA_DIR;

Bundle load(const std::string& name) {
  return bundle_from_json(read_json_file(kData + "/bundles/" + name + ".json"));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an iwalab::Error");
  return ErrorCode::InputError;
}

const HypothesisResult& hyp(const Verdict& v, const std::string& name) {
  const auto it = std::find_if(v.hypotheses.begin(), v.hypotheses.end(),
                               [&](const HypothesisResult& h) { return h.name == name; });
  REQUIRE(it != v.hypotheses.end());
  return *it;
}

BadPrime bad(long q, Reduction r, const std::string& kod, long c, std::vector<long> cK = {}) {
  BadPrime b;
  b.q = q;
  b.reduction = r;
  b.kodaira = kod;
  b.tamagawa = c;
  b.tamagawa_K = std::move(cK);
  return b;
}

const std::vector<std::string> kBundles{"522g1_Q-35_p11", "522g1_Q-83_p11", "542a1_Q-3_p7",
                                        "615b1_Q-17_p7",  "21a1_Q-5_p23",   "34a1_Q-15_p23",
                                        "44a1_Q-7_p29"};

}  // namespace

TEST_CASE("Kodaira parsing") {
  CHECK(Kodaira::parse("I14").n == 14);
  CHECK(Kodaira::parse("I0*").family == Kodaira::Family::IStar);
  CHECK(Kodaira::parse("IV*").family == Kodaira::Family::IVStar);
  CHECK(Kodaira::parse("III").str() == "III");
  CHECK(code_of([] { Kodaira::parse("V"); }) == ErrorCode::MalformedKodaira);
  CHECK(code_of([] { Kodaira::parse("Ix"); }) == ErrorCode::MalformedKodaira);
}

TEST_CASE("kida_check examples") {
  // I14 with c_v = 14 at p = 7: p | n and p | c_v.
  const auto k1 = kida_check(bad(2, Reduction::SplitMult, "I14", 14, {14}), Splitting::Inert, 7);
  CHECK(k1.a);
  CHECK(k1.c);
  CHECK(k1.consistent);
  CHECK_FALSE(k1.rational_fallback);
  // I3 at p = 7: neither side.
  const auto k2 = kida_check(bad(3, Reduction::SplitMult, "I3", 3, {3, 3}), Splitting::Split, 7);
  CHECK_FALSE(k2.a);
  CHECK_FALSE(k2.c);
  CHECK(k2.consistent);
  // I7 recorded with c = 2: a split-multiplicative I7 must have c = 7.
  const auto k3 = kida_check(bad(5, Reduction::SplitMult, "I7", 2), Splitting::Split, 7);
  CHECK(k3.a);
  CHECK_FALSE(k3.c);
  CHECK_FALSE(k3.consistent);
  CHECK(k3.rational_fallback);
  // Supplied ramification data must agree as well.
  BadPrime b = bad(2, Reduction::SplitMult, "I14", 14, {14});
  b.ramified_in_torsion_field = true;
  CHECK_FALSE(kida_check(b, Splitting::Inert, 7).consistent);
  CHECK(code_of([] { kida_check(bad(2, Reduction::SplitMult, "I7", 7), Splitting::Ramified, 7); }) ==
        ErrorCode::InputError);
}

TEST_CASE("omega_mu_contribution examples") {
  FieldRecord f;
  f.disc = -20;
  f.class_number = 2;
  f.splitting = {{3, Splitting::Split}, {5, Splitting::Inert}, {11, Splitting::Inert}};
  CHECK(omega_mu_contribution(bad(3, Reduction::Good, "I0", 1), true, f, 7) == 0);
  CHECK(omega_mu_contribution(bad(3, Reduction::SplitMult, "I49", 49, {49, 49}), true, f, 7) == 2);
  CHECK(omega_mu_contribution(bad(3, Reduction::SplitMult, "I49", 49, {49, 49}), false, f, 7) == 0);
  CHECK(omega_mu_contribution(bad(5, Reduction::NonsplitMult, "I7", 1, {7}), true, f, 7) == 1);
  CHECK(omega_mu_contribution(bad(11, Reduction::Additive, "III", 2), true, f, 7) == 0);
  // Non-split multiplicative at a split prime: not covered.
  CHECK_FALSE(omega_mu_contribution(bad(3, Reduction::NonsplitMult, "I2", 2), true, f, 7).has_value());
}

TEST_CASE("golden bundles pass every hypothesis and conclude") {
  for (const auto& name : kBundles) {
    CAPTURE(name);
    const Bundle b = load(name);
    const auto vs = run_bundle(b);
    REQUIRE(vs.size() == std::max<std::size_t>(1, b.signs.size()));
    for (const auto& v : vs) {
      CHECK(v.all_pass());
      CHECK_FALSE(v.conclusions.empty());
      CHECK(v.inputs_digest.size() == 64);
    }
  }
  const auto ac = run_bundle(load("522g1_Q-35_p11"));
  CHECK(ac[0].conclusions[0].statement.find("not finitely generated over Lambda(H_ac)") !=
        std::string::npos);
  const auto sp = run_bundle(load("615b1_Q-17_p7"));
  CHECK(sp[0].checker == "split-pair-failure");
  const auto rb = run_bundle(load("44a1_Q-7_p29"));
  CHECK(rb[0].conclusions[0].statement.rfind("t <= 3", 0) == 0);
}

TEST_CASE("golden files are byte-identical to fresh reports") {
  for (const auto& name : kBundles) {
    CAPTURE(name);
    const Bundle b = load(name);
    std::ifstream in(kData + "/golden/" + name + ".verdict.json");
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == bundle_report(b, run_bundle(b)).dump(2) + "\n");
  }
}

TEST_CASE("golden records are Kida-consistent") {
  for (const auto& name : kBundles) {
    CAPTURE(name);
    const Bundle b = load(name);
    for (const auto& e : b.curve.bad_primes) {
      const Splitting s = b.field.splitting.at(e.q);
      if (s == Splitting::Ramified) continue;
      CHECK(kida_check(e, s, b.p).consistent);
    }
    for (const auto& v : run_bundle(b)) {
      for (const auto& n : v.notes) CHECK(n.find("inconsistency") == std::string::npos);
    }
  }
}

TEST_CASE("anticyclotomic-failure gates") {
  Bundle b = load("542a1_Q-3_p7");
  SUBCASE("twist mu = 1 fails (f)") {
    b.lfunction.twist.mu_plus = 1;
    const Verdict v = check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus);
    CHECK(hyp(v, "mu_zero_plus").status == Status::Fail);
    CHECK(v.conclusions.empty());
    // The other sign is untouched.
    CHECK(check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Minus).all_pass());
  }
  SUBCASE("unknown mu leaves (f) unknown") {
    b.lfunction.twist.mu_plus.reset();
    const Verdict v = check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus);
    CHECK(hyp(v, "mu_zero_plus").status == Status::Unknown);
    CHECK(v.conclusions.empty());
  }
  SUBCASE("p | h_K fails (b)") {
    b.field.class_number = 7;
    const Verdict v = check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus);
    CHECK(hyp(v, "p_nmid_class_number").status == Status::Fail);
    CHECK(v.conclusions.empty());
  }
  SUBCASE("even N^- fails (a)") {
    b.field.splitting.at(271) = Splitting::Inert;
    const Verdict v = check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus);
    CHECK(hyp(v, "nminus_squarefree_odd").status == Status::Fail);
  }
  SUBCASE("p not dividing c_v at the inert prime fails (e)") {
    b.curve.bad_primes[0].kodaira = "I2";
    b.curve.bad_primes[0].tamagawa = 2;
    b.curve.bad_primes[0].tamagawa_K = {2};
    const Verdict v = check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus);
    CHECK(hyp(v, "nminus_multiplicative_p_divides_tamagawa").status == Status::Fail);
  }
  SUBCASE("ramified bad prime makes (a) unknown") {
    b.field.splitting.at(271) = Splitting::Ramified;
    const Verdict v = check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus);
    CHECK(hyp(v, "nminus_squarefree_odd").status == Status::Unknown);
    CHECK(v.conclusions.empty());
  }
  SUBCASE("missing splitting data throws MissingField") {
    b.field.splitting.erase(271);
    CHECK(code_of([&] { check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus); }) ==
          ErrorCode::MissingField);
  }
  SUBCASE("missing p_splits throws MissingField") {
    b.field.p_splits.reset();
    CHECK(code_of([&] { check_anticyclotomic_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus); }) ==
          ErrorCode::MissingField);
  }
}

TEST_CASE("split-pair-failure gates") {
  Bundle b = load("615b1_Q-17_p7");
  SUBCASE("lambda sum 3 fails (f)") {
    b.lfunction.twist.lambda_minus = 2;
    const Verdict v = check_split_pair_failure(b.curve, b.field, b.lfunction, b.p, Sign::Minus);
    CHECK(hyp(v, "lambda_sum_at_most_2_minus").status == Status::Fail);
    CHECK(v.conclusions.empty());
  }
  SUBCASE("p dividing c_v at only one prime fails (d)") {
    b.curve.bad_primes[0].tamagawa_K = {7, 1};
    const Verdict v = check_split_pair_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus);
    CHECK(hyp(v, "nplus_split_multiplicative_both_primes").status == Status::Fail);
  }
  SUBCASE("rational fallback is noted") {
    b.curve.bad_primes[0].tamagawa_K.clear();
    const Verdict v = check_split_pair_failure(b.curve, b.field, b.lfunction, b.p, Sign::Plus);
    CHECK(hyp(v, "nplus_split_multiplicative_both_primes").status == Status::Pass);
    const bool noted = std::any_of(v.notes.begin(), v.notes.end(), [](const std::string& n) {
      return n.find("lower confidence") != std::string::npos;
    });
    CHECK(noted);
  }
}

TEST_CASE("free-structure gates") {
  Bundle b = load("44a1_Q-7_p29");
  CHECK(check_free_structure(b.curve, b.field, b.p).all_pass());
  SUBCASE("p | c_q fails (b)") {
    b.curve.bad_primes[0].tamagawa = 29;
    b.curve.bad_primes[0].kodaira = "IV*";
    const Verdict v = check_free_structure(b.curve, b.field, b.p);
    CHECK(hyp(v, "p_nmid_tamagawa_product").status == Status::Fail);
    CHECK(v.conclusions.empty());
  }
  SUBCASE("multiplicative prime 1 mod p fails (c)") {
    const Verdict v = check_free_structure(b.curve, b.field, 5);
    CHECK(hyp(v, "multiplicative_primes_not_1_mod_p").status == Status::Fail);
  }
  SUBCASE("inert bad prime fails the Heegner hypothesis") {
    b.field.splitting.at(11) = Splitting::Inert;
    CHECK(hyp(check_free_structure(b.curve, b.field, b.p), "heegner_hypothesis").status == Status::Fail);
  }
}

TEST_CASE("rank-bound gates") {
  Bundle b = load("21a1_Q-5_p23");
  b.lfunction.curve.lambda_plus = 1;
  const Verdict v = check_rank_bound(b.curve, b.field, b.lfunction, b.p);
  CHECK(hyp(v, "lambda_sum_one_plus").status == Status::Fail);
  CHECK(v.conclusions.empty());
}

TEST_CASE("soundness: conclusions only when every hypothesis passes") {
  std::mt19937_64 rng(0x5eed);
  auto coin = [&] { return std::uniform_int_distribution<int>(0, 3)(rng) == 0; };
  int concluded = 0, gated = 0;
  for (int iter = 0; iter < 400; ++iter) {
    Bundle b = load(kBundles[iter % kBundles.size()]);
    if (coin()) b.field.class_number *= b.p;
    if (coin()) b.curve.galois_image_full = false;
    if (coin()) b.curve.supersingular_at_p.reset();
    if (coin()) b.lfunction.curve.mu_plus = 1;
    if (coin()) b.lfunction.twist.lambda_minus = 3;
    if (coin()) b.curve.heegner_indivisible_at_p_place = false;
    if (coin() && b.curve.bad_primes.front().reduction != Reduction::Additive) {
      auto& e = b.curve.bad_primes.front();
      e.tamagawa_K.assign(e.tamagawa_K.size(), 1);
      e.tamagawa = 1;
      e.kodaira = "I1";
    }
    for (const auto& v : run_bundle(b)) {
      if (v.all_pass()) {
        CHECK_FALSE(v.conclusions.empty());
        ++concluded;
      } else {
        CHECK(v.conclusions.empty());
        ++gated;
      }
      for (const auto& c : v.conclusions) CHECK(c.consumes.size() == v.hypotheses.size());
    }
  }
  CHECK(concluded > 20);
  CHECK(gated > 20);
}

TEST_CASE("determinism and digest sensitivity") {
  const Bundle b = load("522g1_Q-35_p11");
  const auto v1 = run_bundle(b), v2 = run_bundle(b);
  CHECK(bundle_report(b, v1).dump() == bundle_report(b, v2).dump());
  CHECK(v1[0].inputs_digest != v1[1].inputs_digest);  // sign is an input
  Bundle c = b;
  c.field.class_number = 4;
  CHECK(run_bundle(c)[0].inputs_digest != v1[0].inputs_digest);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("CSV adapter matches the JSON bundle") {
  std::istringstream csv(
      "label,p,disc,h_K,q,reduction,kodaira,c_q,c_v,f_q,splitting,checker,signs,galois_image_full,"
      "supersingular,p_splits,mu_plus_E,mu_minus_E,lambda_plus_E,lambda_minus_E,mu_plus_twist,"
      "mu_minus_twist,lambda_plus_twist,lambda_minus_twist\n"
      "615b1,7,-68,4,3,split-mult,I7,7,7;7,1,split,split-pair-failure,+;-,true,true,true,0,0,1,1,0,0,0,0\n"
      "615b1,7,-68,4,5,nonsplit-mult,I4,2,4,1,inert,split-pair-failure,+;-,true,true,true,0,0,1,1,0,0,0,0\n"
      "615b1,7,-68,4,41,split-mult,I1,1,1,1,inert,split-pair-failure,+;-,true,true,true,0,0,1,1,0,0,0,0\n");
  const auto bundles = bundles_from_csv(csv);
  REQUIRE(bundles.size() == 1);
  CHECK(bundles[0].curve.conductor == 615);
  const auto from_csv = run_bundle(bundles[0]);
  const auto from_json = run_bundle(load("615b1_Q-17_p7"));
  REQUIRE(from_csv.size() == from_json.size());
  for (std::size_t i = 0; i < from_csv.size(); ++i) {
    REQUIRE(from_csv[i].hypotheses.size() == from_json[i].hypotheses.size());
    for (std::size_t k = 0; k < from_csv[i].hypotheses.size(); ++k) {
      CHECK(from_csv[i].hypotheses[k].status == from_json[i].hypotheses[k].status);
    }
    CHECK(from_csv[i].conclusions.size() == from_json[i].conclusions.size());
  }
  std::istringstream missing("label,p,disc,q\n");
  CHECK(code_of([&] { bundles_from_csv(missing); }) == ErrorCode::MissingField);
}

TEST_CASE("run_checker argument errors") {
  const Bundle b = load("522g1_Q-35_p11");
  CHECK(code_of([&] { run_checker("anticyclotomic-failure", b.curve, b.field, b.lfunction, b.p, std::nullopt); }) ==
        ErrorCode::MissingField);
  CHECK(code_of([&] { run_checker("nope", b.curve, b.field, b.lfunction, b.p, Sign::Plus); }) ==
        ErrorCode::InputError);
  CHECK(code_of([&] { run_checker("anticyclotomic-failure", b.curve, b.field, b.lfunction, 3, Sign::Plus); }) ==
        ErrorCode::InputError);
}
