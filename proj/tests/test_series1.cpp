#include <cmath>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "iwalab/errors.hpp"
#include "iwalab/series1.hpp"
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

Series1 poly(const ContextPtr& ctx, int D, const std::vector<long>& c) {
  std::vector<mpz_class> v(c.begin(), c.end());
  return Series1(ctx, D, std::vector<mpz_class>(v));
}

}  // namespace

TEST_CASE("mu_lambda examples") {
  auto ctx = PadicContext::make(5, 6);
  CHECK(mu_lambda(poly(ctx, 10, {25 * 5, 25 * 5, 0, 25})) == InvariantPair{2, 3});
  CHECK(mu_lambda(poly(ctx, 10, {1, 3})) == InvariantPair{0, 0});
  for (int k = 0; k <= 10; ++k) CHECK(mu_lambda(Series1::monomial(ctx, 10, k)) == InvariantPair{0, k});
  CHECK(code_of([&] { mu_lambda(Series1(ctx, 10)); }) == ErrorCode::ZeroSeries);
  CHECK(code_of([&] { mu_lambda(poly(ctx, 3, {15625})); }) == ErrorCode::ZeroSeries);
}

TEST_CASE("weierstrass examples") {
  auto ctx = PadicContext::make(5, 6);
  const int D = 12;
  WeierstrassData w = weierstrass(poly(ctx, D, {5, 1}));
  CHECK(w.mu == 0);
  CHECK(w.lambda == 1);
  CHECK(w.distinguished == poly(ctx, D, {5, 1}));
  CHECK(w.unit == Series1::one(ctx, D));

  w = weierstrass(poly(ctx, D, {5, 5}));
  CHECK(w.mu == 1);
  CHECK(w.lambda == 0);
  CHECK(w.distinguished == Series1::one(ctx, D));
  CHECK(w.unit == poly(ctx, D, {1, 1}));

  // (T+5)(T^2+5) = T^3 + 5T^2 + 5T + 25
  w = weierstrass(poly(ctx, D, {5, 1}) * poly(ctx, D, {5, 0, 1}));
  CHECK(w.lambda == 3);
  CHECK(w.distinguished == poly(ctx, D, {25, 5, 5, 1}));
  CHECK(w.unit == Series1::one(ctx, D));
}

TEST_CASE("weierstrass reconstruction and agreement with mu_lambda") {
  Rng rng(21);
  for (long p : {5L, 7L, 11L}) {
    auto ctx = PadicContext::make(p, 6);
    for (int trial = 0; trial < 40; ++trial) {
      Series1 f = random_series(rng, ctx, 30);
      WeierstrassData w = weierstrass(f);
      CHECK(InvariantPair{w.mu, w.lambda} == mu_lambda(f));
      CHECK((w.distinguished * w.unit).scaled(ctx->power(w.mu)) == f);
      CHECK(w.distinguished[w.lambda] == 1);
      CHECK(w.distinguished.degree() == w.lambda);
      for (int i = 0; i < w.lambda; ++i) CHECK(ctx->val(w.distinguished[i]) >= 1);
      CHECK(ctx->val(w.unit[0]) == 0);
    }
  }
}

TEST_CASE("mu_lambda multiplicativity") {
  Rng rng(22);
  auto ctx = PadicContext::make(7, 8);
  for (int trial = 0; trial < 100; ++trial) {
    Series1 f = random_series(rng, ctx, 24, 1), g = random_series(rng, ctx, 24, 1);
    const InvariantPair a = mu_lambda(f), b = mu_lambda(g);
    if (a.lambda + b.lambda > 24 || a.mu + b.mu >= 8) continue;
    CHECK(mu_lambda(f * g) == InvariantPair{a.mu + b.mu, a.lambda + b.lambda});
  }
}

TEST_CASE("special polynomials") {
  for (long p : {5L, 7L}) {
    auto ctx = PadicContext::make(p, 8);
    const int D = static_cast<int>(p * p * p);
    Series1 f1 = phi(ctx, D, 1);
    for (int i = 0; i <= D; ++i) CHECK(f1[i] == (i < p ? 1 : 0));
    Series1 f2 = phi(ctx, D, 2);
    for (int i = 0; i <= D; ++i) CHECK(f2[i] == (i % p == 0 && i <= p * (p - 1) ? 1 : 0));
    for (int n = 1; n <= 3; ++n) CHECK(evaluate(phi(ctx, D, n), 1) == p);

    // ω_1^- = (1+T)^p - 1 against the binomial oracle.
    std::vector<mpz_class> binom = binomial_row(p);
    Series1 w1 = omega_pm(ctx, D, 1, Sign::Minus);
    for (int i = 0; i <= D; ++i) CHECK(w1[i] == (i >= 1 && i <= p ? binom[i] : 0));
    CHECK(omega_pm(ctx, D, 1, Sign::Plus) == Series1::monomial(ctx, D, 1));
    CHECK(omega_pm(ctx, D, 2, Sign::Plus).degree() == 1 + p * p - p);

    // ν_{1,0} = ((1+T)^p - 1)/T
    Series1 n10 = nu(ctx, D, 1, 0);
    for (int i = 0; i <= D; ++i) CHECK(n10[i] == (i < p ? binom[i + 1] : 0));
    CHECK(nu(ctx, D, 2, 2) == Series1::one(ctx, D));
    CHECK(evaluate(nu(ctx, D, 2, 1), 0) == p);

    // ω_n^± | ω_m^± by exact division.
    for (Sign s : {Sign::Plus, Sign::Minus}) {
      for (int n = 0; n <= 2; ++n) {
        for (int m = n; m <= 3; ++m) {
          CHECK(divides_exactly(omega_pm(ctx, D, n, s), omega_pm(ctx, D, m, s)));
        }
      }
    }
  }
  auto ctx = PadicContext::make(5, 4);
  for (int s = 1; s <= 3; ++s) {
    const int deg = static_cast<int>(std::pow(5, 2 * s) - std::pow(5, s));
    CHECK(evaluate(nu(ctx, deg, 2 * s, s), 0) == ctx->reduced(ctx->power(s)));
  }
  CHECK(code_of([&] { phi(ctx, 10, 2); }) == ErrorCode::TruncationTooSmall);
  CHECK(code_of([&] { nu(ctx, 100, 1, 2); }) == ErrorCode::BadIndices);
  CHECK(code_of([&] { omega_pm(ctx, 5, 2, Sign::Plus); }) == ErrorCode::TruncationTooSmall);
}

TEST_CASE("twist_inverse_action") {
  auto ctx = PadicContext::make(5, 6);
  const int D = 10;
  CHECK(twist_inverse_action(Series1::monomial(ctx, D, 1)) == poly(ctx, D, {0, -1}));
  CHECK(twist_inverse_action(poly(ctx, D, {5})) == poly(ctx, D, {5}));
  Series1 t = twist_inverse_action(poly(ctx, D, {5, 5, 1}));
  CHECK(mu_lambda(t) == InvariantPair{0, 2});
  CHECK(t.degree() == 2);
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    Series1 f = random_poly(rng, ctx, D, static_cast<int>(uniform(rng, 0, D)));
    Series1 g = twist_inverse_action(f);
    CHECK(mu_lambda(g) == mu_lambda(f));
    // Involution on polynomials of the same degree.
    if (g.degree() == f.degree()) CHECK(twist_inverse_action(g) == f);
  }
  CHECK(code_of([&] { twist_inverse_action(Series1(ctx, D)); }) == ErrorCode::ZeroSeries);
}

TEST_CASE("quotient_size_val examples") {
  auto ctx = PadicContext::make(5, 10);
  for (int s = 1; s <= 2; ++s) {
    const int deg = static_cast<int>(std::pow(5, 2 * s) - std::pow(5, s));
    Series1 v = nu(ctx, deg, 2 * s, s);
    CHECK(quotient_size_val(poly(ctx, deg, {5}), v) == deg);
    CHECK(quotient_size_val(Series1::monomial(ctx, deg, 1), v) == s);
  }
  auto c6 = PadicContext::make(5, 6);
  CHECK(code_of([&] {
          quotient_size_val(Series1::monomial(c6, 6, 1), Series1::monomial(c6, 6, 1));
        }) == ErrorCode::NotCoprime);
  CHECK(code_of([&] { quotient_size_val(poly(c6, 6, {5}), poly(c6, 6, {25})); }) ==
        ErrorCode::NotCoprime);
}

TEST_CASE("quotient_size_val against the Smith-form oracle") {
  Rng rng(24);
  int compared = 0;
  for (int trial = 0; trial < 400 && compared < 60; ++trial) {
    const long p = 5;
    auto hi = PadicContext::make(p, 12);
    const int df = static_cast<int>(uniform(rng, 1, 6)), dg = static_cast<int>(uniform(rng, 0, 6));
    std::vector<long> fc = random_distinguished(rng, p, df), gc = random_distinguished(rng, p, dg);
    if (uniform(rng, 0, 3) == 0) {
      for (auto& x : gc) x *= p;  // p-content on one side
    }
    Series1 f = poly(hi, 12, fc), g = poly(hi, 12, gc);
    int v;
    try {
      v = quotient_size_val(f, g);
    } catch (const Error&) {
      continue;
    }
    const int N = 3, D = 6;
    if (v > N || v > D + 1) continue;
    auto lo = PadicContext::make(p, N);
    CHECK(smith_quotient_val(f.with_context(lo).with_truncation(D),
                             g.with_context(lo).with_truncation(D)) == v);
    ++compared;
  }
  CHECK(compared >= 20);
}
