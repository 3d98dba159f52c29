#include <algorithm>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "iwalab/errors.hpp"
#include "iwalab/module_engine.hpp"
#include "oracles.hpp"

using namespace iwalab;
using namespace iwalab::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InputError;
}

P1Class cls(long p, long a, long b, int M = 6) { return P1Class::make(p, a, b, M); }

ElementaryModule2 module2(const ContextPtr& ctx, int D, std::vector<int> p_parts,
                          std::vector<Series2> fs = {}) {
  ElementaryModule2 M{ctx, D, D, std::move(p_parts), {}, std::nullopt};
  for (auto& f : fs) M.f_parts.push_back(FPart2{std::move(f), 1, false});
  return M;
}

Series2 t1(const ContextPtr& ctx, int D) { return Series2::monomial(ctx, D, D, 1, 0); }
Series2 t2(const ContextPtr& ctx, int D) { return Series2::monomial(ctx, D, D, 0, 1); }

}  // namespace

TEST_CASE("invariants_2var examples") {
  auto ctx = PadicContext::make(5, 6);
  const int D = 8;
  Invariants2 inv = invariants_2var(module2(ctx, D, {2, 1}));
  CHECK(inv.mu_G == 3);
  CHECK(inv.g_bar == Series2::one(PadicContext::make(5, 1), D, D));

  const Series2 u = upsilon(cls(5, 1, 1), 0, ctx, D, D).series;
  inv = invariants_2var(module2(ctx, D, {}, {u}));
  CHECK(inv.mu_G == 0);
  CHECK(inv.g_bar == u.with_context(PadicContext::make(5, 1)));

  ElementaryModule2 M = module2(ctx, D, {1}, {t1(ctx, D)});
  M.f_parts[0].mult = 2;
  inv = invariants_2var(M);
  CHECK(inv.mu_G == 1);
  CHECK(inv.g_bar == Series2::monomial(PadicContext::make(5, 1), D, D, 2, 0));

  CHECK(code_of([&] { invariants_2var(module2(ctx, D, {})); }) == ErrorCode::ZeroModule);
  CHECK(code_of([&] { invariants_2var(module2(ctx, D, {0})); }) == ErrorCode::InputError);
  Series2 divisible = t1(ctx, D).scaled(5);
  CHECK(code_of([&] { invariants_2var(module2(ctx, D, {}, {divisible})); }) ==
        ErrorCode::InputError);
}

TEST_CASE("coinvariant_invariants examples") {
  auto ctx = PadicContext::make(5, 6);
  const int D = 30;
  const P1Class c = cls(5, 1, 1);
  for (int n = 0; n <= 2; ++n) {
    CHECK(coinvariant_invariants(module2(ctx, D, {1}), c, n) == InvariantPair{ipow(5, n), 0});
  }
  const ElementaryModule2 lin = module2(ctx, D, {}, {t2(ctx, D) - t1(ctx, D)});
  CHECK(coinvariant_invariants(lin, c, 0) == InvariantPair{0, 1});
  const ElementaryModule2 ups = module2(ctx, D, {1}, {upsilon(c, 0, ctx, D, D).series});
  try {
    coinvariant_invariants(ups, c, 0);
    FAIL("expected NotTorsion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotTorsion);
    CHECK(std::string(e.what()).find("f_parts[0]") != std::string::npos);
  }
}

TEST_CASE("coinvariant_sequence matches per-level calls") {
  Rng rng(41);
  auto ctx = PadicContext::make(5, 6);
  const int D = 30;
  for (int trial = 0; trial < 15; ++trial) {
    Series2 f = random_series2(rng, ctx, D, D, 3, 3);
    if (f.content_val() > 0) continue;
    const ElementaryModule2 M = module2(ctx, D, {static_cast<int>(uniform(rng, 1, 2))}, {f});
    const P1Class c = random_class(rng, 5, 6);
    try {
      const auto seq = coinvariant_sequence(M, c, 2);
      for (int n = 0; n <= 2; ++n) CHECK(seq[n] == coinvariant_invariants(M, c, n));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotTorsion);
    }
  }
}

TEST_CASE("scan_classes parallel equals serial") {
  Rng rng(7);
  auto ctx = PadicContext::make(5, 6);
  const int D = 30;
  const ElementaryModule2 M =
      module2(ctx, D, {1}, {t2(ctx, D) - t1(ctx, D), upsilon(cls(5, 1, 2), 0, ctx, D, D).series});
  std::vector<P1Class> classes{cls(5, 1, 2)};
  for (int i = 0; i < 12; ++i) classes.push_back(random_class(rng, 5, 6));
  const auto a = scan_classes(M, classes, 1, true);
  const auto b = scan_classes(M, classes, 1, false);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].cls == classes[i]);
    CHECK(a[i].inv == b[i].inv);
    CHECK(a[i].error == b[i].error);
  }
  CHECK(a[0].error == ErrorCode::NotTorsion);
}

TEST_CASE("growth_scan examples") {
  auto ctx = PadicContext::make(5, 6);
  const int D = 30;
  const P1Class c = cls(5, 1, 1);

  GrowthReport g = growth_scan(module2(ctx, D, {1}), c, 0, 3);
  CHECK(g.mu_seq == std::vector<int>{1, 5, 25, 125});
  CHECK(g.mu_G == 1);
  CHECK(g.m1 == 0);
  CHECK(g.c == 0);
  CHECK(g.l == 0);
  CHECK(g.m1_matches);

  g = growth_scan(module2(ctx, D, {}, {t2(ctx, D) - t1(ctx, D)}), c, 0, 2);
  CHECK(g.m1 == 0);
  CHECK(g.m1_matches);
  REQUIRE(g.l.has_value());
  CHECK(*g.l >= 1);

  // ḡ = Ῡ·T1, lifted with + p so the specializations stay torsion.
  const Series2 f = upsilon(c, 0, ctx, D, D).series * t1(ctx, D) + Series2::one(ctx, D, D).scaled(5);
  g = growth_scan(module2(ctx, D, {}, {f}), c, 0, 3);
  CHECK(g.mu_G == 0);
  CHECK(g.m1 == 1);
  CHECK(g.monsky_m1 == 1);
  CHECK(g.m1_matches);

  CHECK(code_of([&] { growth_scan(module2(ctx, D, {1}), c, 0, 1); }) == ErrorCode::BadIndices);
}

TEST_CASE("property: fitted m1 equals the Monsky valuation") {
  Rng rng(2024);
  const long p = 7;
  auto ctx = PadicContext::make(p, 6);
  const int D = 49;
  int fitted = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const P1Class c = random_class(rng, p, 4);
    std::vector<Series2> fs{random_series2(rng, ctx, D, D, 2, 2)};
    if (uniform(rng, 0, 1)) {
      // Force a factor along the line so m1 > 0.
      fs.push_back(upsilon(c, 0, ctx, D, D).series + Series2::monomial(ctx, D, D, 0, 0, p));
    }
    if (fs[0].content_val() > 0) continue;
    const int m = static_cast<int>(uniform(rng, 0, 1));
    const ElementaryModule2 M = module2(ctx, D, m ? std::vector<int>{m} : std::vector<int>{}, fs);
    GrowthReport g;
    try {
      g = growth_scan(M, c, 0, 3);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotTorsion);
      continue;
    }
    ++fitted;
    CHECK(g.mu_G == m);
    CHECK(g.m1 == g.monsky_m1);
  }
  CHECK(fitted >= 10);
}

TEST_CASE("mhg_check examples") {
  auto ctx = PadicContext::make(5, 6);
  const int D = 30;
  const P1Class c = cls(5, 1, 1);

  MhgReport r = mhg_check(module2(ctx, D, {1}, {t2(ctx, D) - t1(ctx, D)}), c, 0, 1, 1);
  CHECK(r.g.outcome == Outcome::Holds);
  CHECK(r.d.outcome == Outcome::Holds);
  CHECK(r.mu_H == 1);
  CHECK(r.e.outcome == Outcome::Holds);
  CHECK(r.consistent);
  CHECK(r.verdict == Outcome::Holds);

  r = mhg_check(module2(ctx, D, {}, {upsilon(cls(5, 1, 0), 0, ctx, D, D).series}), c, 0, 1, 1);
  CHECK(r.verdict == Outcome::Holds);
  CHECK(r.consistent);

  const Series2 g = upsilon(c, 0, ctx, D, D).series + Series2::one(ctx, D, D).scaled(5);
  r = mhg_check(module2(ctx, D, {}, {g}), c, 0, 1, 1);
  CHECK(r.v_upsilon == 1);
  CHECK(r.g.outcome == Outcome::Fails);
  CHECK(r.d.outcome == Outcome::Fails);
  CHECK(r.verdict == Outcome::Fails);

  // μ correction shifts the n = 0 side.
  r = mhg_check(module2(ctx, D, {1}, {t2(ctx, D) - t1(ctx, D)}), c, 0, 1, 1, 1);
  CHECK(r.mu_H == 0);
  CHECK(r.d.outcome == Outcome::Fails);
  CHECK_FALSE(r.consistent);
  CHECK(r.verdict == Outcome::Inconclusive);
}

TEST_CASE("property: criteria (d) and (g) agree") {
  Rng rng(99);
  auto ctx = PadicContext::make(5, 5);
  const int D = 30;
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const P1Class c = random_class(rng, 5, 4);
    Series2 f = random_series2(rng, ctx, D, D, 2, 2);
    if (uniform(rng, 0, 2) == 0) {
      f = f * upsilon(c, 0, ctx, D, D).series + Series2::one(ctx, D, D).scaled(5);
    }
    if (f.content_val() > 0) continue;
    const MhgReport r = mhg_check(module2(ctx, D, {1}, {f}), c, 0, 0, 1);
    if (r.g.outcome == Outcome::Inconclusive) continue;
    ++compared;
    CHECK(r.d.outcome == r.g.outcome);
  }
  CHECK(compared >= 30);
}

TEST_CASE("property: coprimality dichotomy for distinct lines") {
  Rng rng(5);
  const long p = 5;
  auto ctx = PadicContext::make(p, 6);
  const int D = 30;
  int checked = 0;
  while (checked < 12) {
    const P1Class c1 = random_class(rng, p, 4), c2 = random_class(rng, p, 4);
    if (c1 == c2) continue;
    const int depth = intersection_depth(c1, c2);
    if (depth > 1) continue;
    ++checked;
    const ElementaryModule2 M = module2(ctx, D, {}, {upsilon(c1, 0, ctx, D, D).series});
    const MhgReport at2 = mhg_check(M, c2, 0, 1, 1);
    CHECK(at2.verdict == Outcome::Holds);
    CHECK(at2.consistent);
    const MhgReport at1 = mhg_check(M, c1, 0, 1, 1);
    CHECK(at1.verdict == Outcome::Fails);
    CHECK(at1.h.outcome == Outcome::Fails);
  }
}

TEST_CASE("rank_s examples") {
  const long p = 5;
  auto ctx = PadicContext::make(p, 8);
  const int D = 20;
  ElementaryModule1 M{ctx, D, {1}, {}};
  CHECK(rank_s(M, 1) == p * p - p);
  M = ElementaryModule1{ctx, D, {}, {FPart1{Series1::monomial(ctx, D, 1), 1}}};
  CHECK(rank_s(M, 2) == 2);
  M = ElementaryModule1{ctx, D, {1}, {FPart1{Series1::monomial(ctx, D, 1), 1}}};
  for (int s = 1; s <= 4; ++s) CHECK(rank_s(M, s) == ipow(p, 2 * s) - ipow(p, s) + s);
  CHECK(code_of([&] { rank_s(M, 0); }) == ErrorCode::BadIndices);

  // Φ_{25}(1+T) divides ν_{2,1}.
  M = ElementaryModule1{ctx, 30, {}, {FPart1{taylor_shift(phi(ctx, 30, 2), 1), 1}}};
  CHECK(code_of([&] { rank_s(M, 1); }) == ErrorCode::NotCoprime);
}

TEST_CASE("rank_s matches an exact resultant") {
  Rng rng(77);
  const long p = 5;
  auto ctx = PadicContext::make(p, 10);
  const int D = 20;
  const auto nu = nu21(p);
  for (int trial = 0; trial < 20; ++trial) {
    const int deg = static_cast<int>(uniform(rng, 1, 4));
    const auto c = random_distinguished(rng, p, deg);
    std::vector<mpz_class> P(c.begin(), c.end());
    const mpz_class res = resultant(P, nu);
    if (res == 0) continue;
    std::vector<mpz_class> padded(D + 1);
    for (int i = 0; i <= deg; ++i) padded[i] = ctx->reduced(P[i]);
    const ElementaryModule1 Mp{ctx, D, {}, {FPart1{Series1(ctx, D, padded), 2}}};
    CHECK(rank_s(Mp, 1) == 2 * vp(res, p));
  }
}

TEST_CASE("property: rank_s closed form beyond the distinguished degree") {
  Rng rng(13);
  const long p = 5;
  auto ctx = PadicContext::make(p, 8);
  const int D = 20;
  for (int trial = 0; trial < 10; ++trial) {
    const int deg = static_cast<int>(uniform(rng, 0, 3));
    const auto c = random_distinguished(rng, p, deg);
    std::vector<mpz_class> coeffs(D + 1);
    for (int i = 0; i <= deg; ++i) coeffs[i] = ctx->reduced(mpz_class(c[i]) * p);
    ElementaryModule1 M{ctx, D, {1}, {FPart1{Series1(ctx, D, coeffs), 1}}};
    const InvariantPair inv = M.invariants();
    const int s = deg + 1;
    CHECK(rank_s(M, s) == inv.mu * (ipow(p, 2 * s) - ipow(p, s)) + inv.lambda * s);
  }
}

TEST_CASE("twist_combine laws") {
  CHECK(twist_combine({0, 1}, {0, 0}) == InvariantPair{0, 1});
  CHECK(twist_combine({0, 0}, {0, 0}) == InvariantPair{0, 0});
  CHECK(twist_combine({2, 3}, {1, 1}) == InvariantPair{3, 4});
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    InvariantPair a{int(uniform(rng, 0, 9)), int(uniform(rng, 0, 9))};
    InvariantPair b{int(uniform(rng, 0, 9)), int(uniform(rng, 0, 9))};
    InvariantPair c{int(uniform(rng, 0, 9)), int(uniform(rng, 0, 9))};
    CHECK(twist_combine(a, b) == twist_combine(b, a));
    CHECK(twist_combine(twist_combine(a, b), c) == twist_combine(a, twist_combine(b, c)));
    CHECK(twist_combine(a, {0, 0}) == a);
  }
}

TEST_CASE("rank_bound and sign_shift") {
  CHECK(rank_bound({1, 1, 1, 1}, true).lower == 1);
  CHECK(rank_bound({1, 1, 1, 1}, true).upper == 3);
  CHECK(rank_bound({0, 0, 0, 0}, false).upper == 0);
  CHECK(rank_bound({1, 0, 2, 0}, false).upper == 3);
  CHECK(code_of([] { rank_bound({1, 1}, false); }) == ErrorCode::InputError);
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    std::vector<int> l(4);
    for (int& x : l) x = static_cast<int>(uniform(rng, 0, 5));
    const bool h = uniform(rng, 0, 1);
    auto bigger = l;
    bigger[uniform(rng, 0, 3)] += 1;
    CHECK(rank_bound(bigger, h).upper >= rank_bound(l, h).upper);
    CHECK(rank_bound(l, h).lower <= std::max(rank_bound(l, h).upper, rank_bound(l, h).lower));
  }
  using S = Sign;
  CHECK(sign_shift(S::Plus, 0, 0) == std::pair{S::Plus, S::Plus});
  CHECK(sign_shift(S::Plus, 1, 0) == std::pair{S::Minus, S::Plus});
  CHECK(sign_shift(S::Minus, 1, 1) == std::pair{S::Plus, S::Plus});
}
