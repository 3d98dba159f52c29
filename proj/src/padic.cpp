#include "iwalab/padic.hpp"

#include <string>

#include "iwalab/errors.hpp"

namespace iwalab {

bool is_probable_prime(long p) {
  if (p < 2) return false;
  mpz_class z(p);
  return mpz_probab_prime_p(z.get_mpz_t(), 30) != 0;
}

PadicContext::PadicContext(long p, int N) : p_(p), N_(N) {
  powers_.reserve(N + 1);
  mpz_class q = 1;
  for (int k = 0; k <= N; ++k) {
    powers_.push_back(q);
    q *= p;
  }
}

ContextPtr PadicContext::make(long p, int N) {
  if (p < 5 || !is_probable_prime(p)) {
    fail(ErrorCode::InputError, "p must be a prime >= 5, got " + std::to_string(p));
  }
  if (N < 1) fail(ErrorCode::InputError, "precision N must be >= 1");
  return std::shared_ptr<const PadicContext>(new PadicContext(p, N));
}

void PadicContext::reduce(mpz_class& x) const {
  if (x >= 0 && x < modulus()) return;
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus().get_mpz_t());
}

mpz_class PadicContext::reduced(const mpz_class& x) const {
  mpz_class r = x;
  reduce(r);
  return r;
}

int PadicContext::val(const mpz_class& x) const { return vp_capped(reduced(x), p_, N_); }

mpz_class PadicContext::inverse(const mpz_class& x) const {
  mpz_class r;
  if (mpz_divisible_ui_p(x.get_mpz_t(), p_) ||
      !mpz_invert(r.get_mpz_t(), x.get_mpz_t(), modulus().get_mpz_t())) {
    fail(ErrorCode::NotAUnit, "element " + x.get_str() + " has positive valuation");
  }
  return r;
}

PadicScalar::PadicScalar(ContextPtr ctx, const mpz_class& value)
    : residue_(ctx->reduced(value)), ctx_(std::move(ctx)) {}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  return PadicScalar(ctx_, residue_ + o.residue_);
}
PadicScalar PadicScalar::operator-(const PadicScalar& o) const {
  return PadicScalar(ctx_, residue_ - o.residue_);
}
PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  return PadicScalar(ctx_, residue_ * o.residue_);
}
PadicScalar PadicScalar::operator-() const { return PadicScalar(ctx_, -residue_); }

int val(const PadicScalar& x) { return x.context()->val(x.residue()); }

PadicScalar inv(const PadicScalar& x) {
  return PadicScalar(x.context(), x.context()->inverse(x.residue()));
}

int vp_capped(const mpz_class& x, long p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  mpz_class t = x;
  while (v < cap && mpz_divisible_ui_p(t.get_mpz_t(), p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
    ++v;
  }
  return v;
}

int vp(const mpz_class& x, long p) {
  if (x == 0) fail(ErrorCode::ZeroSeries, "valuation of exact zero");
  mpz_class t;
  mpz_class pz(p);
  return static_cast<int>(mpz_remove(t.get_mpz_t(), x.get_mpz_t(), pz.get_mpz_t()));
}

int ceil_log(long p, long x) {
  int k = 0;
  long q = 1;
  while (q < x) {
    q *= p;
    ++k;
  }
  return k;
}

}  // namespace iwalab
