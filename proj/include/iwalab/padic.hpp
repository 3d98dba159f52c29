#pragma once

#include <gmpxx.h>

#include <memory>
#include <vector>

namespace iwalab {

// Z/p^N with cached powers of p. Shared read-only between all values built on it.
class PadicContext {
 public:
  static std::shared_ptr<const PadicContext> make(long p, int N);

  long prime() const { return p_; }
  int precision() const { return N_; }
  const mpz_class& modulus() const { return powers_.back(); }
  // p^k for 0 <= k <= N.
  const mpz_class& power(int k) const { return powers_.at(k); }

  void reduce(mpz_class& x) const;
  mpz_class reduced(const mpz_class& x) const;
  // Valuation capped at N; N means zero at this precision.
  int val(const mpz_class& x) const;
  // Inverse of a unit mod p^N. Throws NotAUnit.
  mpz_class inverse(const mpz_class& x) const;

  std::shared_ptr<const PadicContext> with_precision(int N) const { return make(p_, N); }

 private:
  PadicContext(long p, int N);

  long p_;
  int N_;
  std::vector<mpz_class> powers_;
};

using ContextPtr = std::shared_ptr<const PadicContext>;

class PadicScalar {
 public:
  PadicScalar(ContextPtr ctx, const mpz_class& value);
  PadicScalar(ContextPtr ctx, long value) : PadicScalar(std::move(ctx), mpz_class(value)) {}

  const mpz_class& residue() const { return residue_; }
  const ContextPtr& context() const { return ctx_; }
  bool is_zero() const { return residue_ == 0; }

  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator-() const;
  bool operator==(const PadicScalar& o) const { return residue_ == o.residue_; }

 private:
  mpz_class residue_;
  ContextPtr ctx_;
};

int val(const PadicScalar& x);
PadicScalar inv(const PadicScalar& x);

// v_p of an exact integer; returns `cap` for zero and never more than `cap`.
int vp_capped(const mpz_class& x, long p, int cap);
// v_p of a nonzero exact integer.
int vp(const mpz_class& x, long p);
// Smallest k with p^k >= x, for x >= 1.
int ceil_log(long p, long x);
bool is_probable_prime(long p);

}  // namespace iwalab
