#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <vector>

#include "iwalab/padic.hpp"

namespace iwalab {

// Truncated element of Z_p[[T]]: coefficients a_0..a_D of T^i, residues mod p^N.
class Series1 {
 public:
  Series1(ContextPtr ctx, int D);
  Series1(ContextPtr ctx, int D, std::vector<mpz_class> coeffs);

  static Series1 from_ints(ContextPtr ctx, int D, std::initializer_list<long> coeffs);
  static Series1 monomial(ContextPtr ctx, int D, int k, const mpz_class& c = 1);
  static Series1 one(ContextPtr ctx, int D) { return monomial(std::move(ctx), D, 0); }

  const ContextPtr& context() const { return ctx_; }
  long prime() const { return ctx_->prime(); }
  int precision() const { return ctx_->precision(); }
  int truncation() const { return D_; }

  const std::vector<mpz_class>& coeffs() const { return c_; }
  const mpz_class& operator[](int i) const { return c_[i]; }
  PadicScalar coeff(int i) const { return PadicScalar(ctx_, c_.at(i)); }
  void set(int i, const mpz_class& v);

  // Largest index with a coefficient nonzero at precision; -1 for zero.
  int degree() const;
  bool is_zero() const { return degree() < 0; }

  Series1 operator+(const Series1& o) const;
  Series1 operator-(const Series1& o) const;
  Series1 operator*(const Series1& o) const;
  Series1 operator-() const;
  Series1 scaled(const mpz_class& c) const;
  bool operator==(const Series1& o) const { return D_ == o.D_ && c_ == o.c_; }

  // Same residues viewed at another truncation / precision (residues are lifted as integers).
  Series1 with_truncation(int D) const;
  Series1 with_context(ContextPtr ctx) const;

 private:
  ContextPtr ctx_;
  int D_;
  std::vector<mpz_class> c_;
};

struct InvariantPair {
  int mu = 0;
  int lambda = 0;
  bool operator==(const InvariantPair&) const = default;
};

struct WeierstrassData {
  int mu = 0;
  int lambda = 0;
  Series1 distinguished;
  Series1 unit;
};

InvariantPair mu_lambda(const Series1& f);
WeierstrassData weierstrass(const Series1& f);

// (base)^c via the binomial series, exact mod (p^N, T^{D+1}); base must be 1 + (T-divisible).
// c is read mod p^M; throws PrecisionTooLow when M < ceil(log_p(D+1)) + 1.
Series1 unit_power(const mpz_class& c, int M, const Series1& base);
// (1+T)^c with c an exact integer (any sign), truncated at D.
Series1 one_plus_t_power(const ContextPtr& ctx, int D, const mpz_class& c);

enum class Sign { Plus, Minus };

Series1 phi(const ContextPtr& ctx, int D, int n);
Series1 omega_pm(const ContextPtr& ctx, int D, int n, Sign sign);
Series1 nu(const ContextPtr& ctx, int D, int m, int n);
Series1 twist_inverse_action(const Series1& f);
int quotient_size_val(const Series1& f, const Series1& g);

// f(T) ↦ f(T + shift) on the polynomial a_0..a_deg, exact, truncated at D.
Series1 taylor_shift(const Series1& f, long shift);
// Evaluates the coefficient list at T = x (as a polynomial, mod p^N).
mpz_class evaluate(const Series1& f, const mpz_class& x);

}  // namespace iwalab
