#include "iwalab/series1.hpp"

#include <algorithm>
#include <string>

#include "iwalab/errors.hpp"
#include "iwalab/kernels.hpp"
#include "poly_ops.hpp"

namespace iwalab {

namespace {

void check_compatible(const Series1& a, const Series1& b) {
  if (a.prime() != b.prime() || a.precision() != b.precision()) {
    fail(ErrorCode::InputError, "series over different coefficient rings");
  }
}

}  // namespace

Series1::Series1(ContextPtr ctx, int D) : ctx_(std::move(ctx)), D_(D), c_(D + 1) {
  if (D < 0) fail(ErrorCode::InputError, "truncation D must be >= 0");
}

Series1::Series1(ContextPtr ctx, int D, std::vector<mpz_class> coeffs)
    : ctx_(std::move(ctx)), D_(D), c_(std::move(coeffs)) {
  if (D < 0) fail(ErrorCode::InputError, "truncation D must be >= 0");
  c_.resize(D + 1);
  kernels::reduce(c_, ctx_->modulus());
}

Series1 Series1::from_ints(ContextPtr ctx, int D, std::initializer_list<long> coeffs) {
  std::vector<mpz_class> v;
  for (long x : coeffs) v.emplace_back(x);
  return Series1(std::move(ctx), D, std::move(v));
}

Series1 Series1::monomial(ContextPtr ctx, int D, int k, const mpz_class& c) {
  Series1 s(std::move(ctx), D);
  if (k <= D) s.set(k, c);
  return s;
}

void Series1::set(int i, const mpz_class& v) { c_.at(i) = ctx_->reduced(v); }

int Series1::degree() const {
  for (int i = D_; i >= 0; --i) {
    if (c_[i] != 0) return i;
  }
  return -1;
}

Series1 Series1::operator+(const Series1& o) const {
  check_compatible(*this, o);
  const int D = std::min(D_, o.D_);
  std::vector<mpz_class> v(D + 1);
  for (int i = 0; i <= D; ++i) v[i] = c_[i] + o.c_[i];
  return Series1(ctx_, D, std::move(v));
}

Series1 Series1::operator-(const Series1& o) const {
  check_compatible(*this, o);
  const int D = std::min(D_, o.D_);
  std::vector<mpz_class> v(D + 1);
  for (int i = 0; i <= D; ++i) v[i] = c_[i] - o.c_[i];
  return Series1(ctx_, D, std::move(v));
}

Series1 Series1::operator*(const Series1& o) const {
  check_compatible(*this, o);
  const int D = std::min(D_, o.D_);
  return Series1(ctx_, D, kernels::mul_trunc(c_, o.c_, D + 1));
}

Series1 Series1::operator-() const {
  std::vector<mpz_class> v(c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -c_[i];
  return Series1(ctx_, D_, std::move(v));
}

Series1 Series1::scaled(const mpz_class& c) const {
  std::vector<mpz_class> v(c_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c_[i] * c;
  return Series1(ctx_, D_, std::move(v));
}

Series1 Series1::with_truncation(int D) const { return Series1(ctx_, D, c_); }

Series1 Series1::with_context(ContextPtr ctx) const {
  if (ctx->prime() != prime()) fail(ErrorCode::InputError, "context prime mismatch");
  return Series1(std::move(ctx), D_, c_);
}

InvariantPair mu_lambda(const Series1& f) {
  const auto& ctx = *f.context();
  InvariantPair r{ctx.precision(), 0};
  for (int i = 0; i <= f.truncation(); ++i) {
    const int v = ctx.val(f[i]);
    if (v < r.mu) {
      r.mu = v;
      r.lambda = i;
      if (v == 0) break;
    }
  }
  if (r.mu >= ctx.precision()) {
    fail(ErrorCode::ZeroSeries, "series vanishes at precision (N=" +
                                    std::to_string(ctx.precision()) +
                                    ", D=" + std::to_string(f.truncation()) + ")");
  }
  return r;
}

WeierstrassData weierstrass(const Series1& f) {
  const InvariantPair inv = mu_lambda(f);
  const auto& ctx = *f.context();
  const int D = f.truncation();
  detail::APoly g(D + 1, 1);
  for (int i = 0; i <= D; ++i) {
    mpz_divexact(g.v[i].get_mpz_t(), f[i].get_mpz_t(), ctx.power(inv.mu).get_mpz_t());
  }
  detail::Prepared prep = detail::hensel_prepare(g, inv.lambda, ctx);
  return WeierstrassData{inv.mu, inv.lambda, Series1(f.context(), D, prep.P.v),
                         Series1(f.context(), D, prep.U.v)};
}

Series1 unit_power(const mpz_class& c, int M, const Series1& base) {
  const auto& ctx = base.context();
  const int D = base.truncation();
  if (base[0] != 1) fail(ErrorCode::InputError, "unit_power: base must have constant term 1");
  if (D >= 1 && M < ceil_log(ctx->prime(), D) + 1) {
    fail(ErrorCode::PrecisionTooLow,
         "class precision M=" + std::to_string(M) + " too low for truncation D=" +
             std::to_string(D));
  }
  Series1 u = base;
  u.set(0, 0);
  bool is_t = D == 0 || u[1] == 1;
  for (int i = 2; i <= D && is_t; ++i) is_t = u[i] == 0;
  if (is_t) return one_plus_t_power(ctx, D, c);
  Series1 out = Series1::one(ctx, D);
  Series1 upow = Series1::one(ctx, D);
  mpz_class binom;
  for (int k = 1; k <= D; ++k) {
    upow = upow * u;
    if (upow.is_zero()) break;
    mpz_bin_ui(binom.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(k));
    out = out + upow.scaled(binom);
  }
  return out;
}

Series1 one_plus_t_power(const ContextPtr& ctx, int D, const mpz_class& c) {
  std::vector<mpz_class> v(D + 1);
  // C(c,k) = C(c,k-1)·(c-k+1)/k, exact over Z for any integer c.
  mpz_class b = 1;
  v[0] = 1;
  for (int k = 1; k <= D; ++k) {
    b *= c - (k - 1);
    mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k));
    v[k] = b;
  }
  return Series1(ctx, D, std::move(v));
}

Series1 taylor_shift(const Series1& f, long shift) {
  const int D = f.truncation();
  const int deg = f.degree();
  std::vector<mpz_class> out(D + 1);
  if (deg < 0) return Series1(f.context(), D, std::move(out));
  // Horner in the ring of polynomials: g <- g·(T + shift) + a_j.
  std::vector<mpz_class> g(deg + 1);
  const mpz_class& m = f.context()->modulus();
  for (int j = deg; j >= 0; --j) {
    for (int i = deg; i >= 1; --i) {
      g[i] = g[i - 1] + g[i] * shift;
      mpz_fdiv_r(g[i].get_mpz_t(), g[i].get_mpz_t(), m.get_mpz_t());
    }
    g[0] = g[0] * shift + f[j];
    mpz_fdiv_r(g[0].get_mpz_t(), g[0].get_mpz_t(), m.get_mpz_t());
  }
  for (int i = 0; i <= deg; ++i) out[i] = g[i];
  return Series1(f.context(), D, std::move(out));
}

mpz_class evaluate(const Series1& f, const mpz_class& x) {
  mpz_class acc = 0;
  for (int i = f.truncation(); i >= 0; --i) {
    acc = acc * x + f[i];
    f.context()->reduce(acc);
  }
  return acc;
}

}  // namespace iwalab
