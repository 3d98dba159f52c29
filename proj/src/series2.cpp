#include "iwalab/series2.hpp"

#include <algorithm>
#include <string>

#include "iwalab/errors.hpp"
#include "iwalab/kernels.hpp"
#include "poly_ops.hpp"

namespace iwalab {

namespace {

void check_compatible(const Series2& a, const Series2& b) {
  if (a.prime() != b.prime() || a.precision() != b.precision()) {
    fail(ErrorCode::InputError, "series over different coefficient rings");
  }
}

mpz_class mod_power(const mpz_class& x, long p, int k) {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class inverse_mod_power(const mpz_class& x, long p, int k) {
  mpz_class m, r;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0) {
    fail(ErrorCode::NotAUnit, "class coordinate is not a unit");
  }
  return r;
}

}  // namespace

Series2::Series2(ContextPtr ctx, int D1, int D2)
    : ctx_(std::move(ctx)), D1_(D1), D2_(D2) {
  if (D1 < 0 || D2 < 0) fail(ErrorCode::InputError, "truncations must be >= 0");
  g_.resize(static_cast<std::size_t>(D1 + 1) * (D2 + 1));
}

Series2::Series2(ContextPtr ctx, int D1, int D2, std::vector<mpz_class> grid)
    : ctx_(std::move(ctx)), D1_(D1), D2_(D2), g_(std::move(grid)) {
  if (D1 < 0 || D2 < 0) fail(ErrorCode::InputError, "truncations must be >= 0");
  g_.resize(static_cast<std::size_t>(D1 + 1) * (D2 + 1));
  kernels::reduce(g_, ctx_->modulus());
}

Series2 Series2::monomial(ContextPtr ctx, int D1, int D2, int i, int j, const mpz_class& c) {
  Series2 s(std::move(ctx), D1, D2);
  if (i <= D1 && j <= D2) s.set(i, j, c);
  return s;
}

Series2 Series2::from_t1(const Series1& s, int D2) {
  Series2 out(s.context(), s.truncation(), D2);
  for (int i = 0; i <= s.truncation(); ++i) out.g_[static_cast<std::size_t>(i) * (D2 + 1)] = s[i];
  return out;
}

Series2 Series2::from_t2(const Series1& s, int D1) {
  Series2 out(s.context(), D1, s.truncation());
  for (int j = 0; j <= s.truncation(); ++j) out.g_[j] = s[j];
  return out;
}

void Series2::set(int i, int j, const mpz_class& v) {
  if (i < 0 || i > D1_ || j < 0 || j > D2_) fail(ErrorCode::InputError, "grid index out of range");
  g_[static_cast<std::size_t>(i) * (D2_ + 1) + j] = ctx_->reduced(v);
}

bool Series2::is_zero() const {
  return std::all_of(g_.begin(), g_.end(), [](const mpz_class& x) { return x == 0; });
}

int Series2::content_val() const {
  int v = ctx_->precision();
  for (const auto& x : g_) {
    if (x != 0) v = std::min(v, ctx_->val(x));
    if (v == 0) break;
  }
  return v;
}

Series1 Series2::t2_coeff(int j) const {
  std::vector<mpz_class> c(D1_ + 1);
  for (int i = 0; i <= D1_; ++i) c[i] = at(i, j);
  return Series1(ctx_, D1_, std::move(c));
}

Series2 Series2::operator+(const Series2& o) const {
  check_compatible(*this, o);
  const Series2 a = with_truncation(std::min(D1_, o.D1_), std::min(D2_, o.D2_));
  const Series2 b = o.with_truncation(a.D1_, a.D2_);
  std::vector<mpz_class> v(a.g_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.g_[k] + b.g_[k];
  return Series2(ctx_, a.D1_, a.D2_, std::move(v));
}

Series2 Series2::operator-(const Series2& o) const { return *this + (-o); }

Series2 Series2::operator*(const Series2& o) const {
  check_compatible(*this, o);
  const Series2 a = with_truncation(std::min(D1_, o.D1_), std::min(D2_, o.D2_));
  const Series2 b = o.with_truncation(a.D1_, a.D2_);
  const std::size_t rows = a.D1_ + 1, cols = a.D2_ + 1;
  return Series2(ctx_, a.D1_, a.D2_, kernels::mul_grid(a.g_, rows, b.g_, rows, cols, rows));
}

Series2 Series2::operator-() const {
  std::vector<mpz_class> v(g_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = -g_[k];
  return Series2(ctx_, D1_, D2_, std::move(v));
}

Series2 Series2::scaled(const mpz_class& c) const {
  std::vector<mpz_class> v(g_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = g_[k] * c;
  return Series2(ctx_, D1_, D2_, std::move(v));
}

Series2 Series2::swapped() const {
  Series2 out(ctx_, D2_, D1_);
  for (int i = 0; i <= D1_; ++i) {
    for (int j = 0; j <= D2_; ++j) out.g_[static_cast<std::size_t>(j) * (D1_ + 1) + i] = at(i, j);
  }
  return out;
}

Series2 Series2::with_context(ContextPtr ctx) const {
  if (ctx->prime() != prime()) fail(ErrorCode::InputError, "context prime mismatch");
  return Series2(std::move(ctx), D1_, D2_, g_);
}

Series2 Series2::with_truncation(int D1, int D2) const {
  if (D1 == D1_ && D2 == D2_) return *this;
  Series2 out(ctx_, D1, D2);
  for (int i = 0; i <= std::min(D1, D1_); ++i) {
    for (int j = 0; j <= std::min(D2, D2_); ++j) {
      out.g_[static_cast<std::size_t>(i) * (D2 + 1) + j] = at(i, j);
    }
  }
  return out;
}

P1Class P1Class::make(long p, const mpz_class& a, const mpz_class& b, int M) {
  if (M < 1) fail(ErrorCode::InputError, "class precision M must be >= 1");
  P1Class c;
  c.p = p;
  c.M = M;
  const mpz_class ra = mod_power(a, p, M), rb = mod_power(b, p, M);
  const bool pa = mpz_divisible_ui_p(ra.get_mpz_t(), p) != 0;
  const bool pb = mpz_divisible_ui_p(rb.get_mpz_t(), p) != 0;
  if (pa && pb) fail(ErrorCode::InputError, "p divides both class coordinates");
  if (!pa) {
    c.a = 1;
    c.b = mod_power(rb * inverse_mod_power(ra, p, M), p, M);
  } else {
    c.a = mod_power(ra * inverse_mod_power(rb, p, M), p, M);
    c.b = 1;
  }
  return c;
}

P1Class P1Class::at_precision(int M2) const {
  if (M2 > M) fail(ErrorCode::InputError, "cannot raise class precision");
  return make(p, a, b, M2);
}

Frame frame_of(const P1Class& cls, const PadicContext& ctx, int D) {
  const long p = ctx.prime();
  if (cls.p != p) fail(ErrorCode::InputError, "class and series primes differ");
  if (D >= 1 && cls.M < ceil_log(p, D) + 1) {
    fail(ErrorCode::PrecisionTooLow, "class precision M=" + std::to_string(cls.M) +
                                         " too low for truncation " + std::to_string(D));
  }
  Frame fr;
  fr.K = ctx.precision() + ceil_log(p, D + 1) + 1;
  fr.swapped = cls.t1_distinguished();
  if (fr.swapped) {
    fr.slope = mod_power(cls.b, p, fr.K);  // a = 1
  } else if (cls.a == 1) {
    fr.slope = inverse_mod_power(cls.b, p, fr.K);
  } else {
    fr.slope = mod_power(cls.a, p, fr.K);  // b = 1
  }
  return fr;
}

UpsilonElement upsilon(const P1Class& cls, int n, const ContextPtr& ctx, int D1, int D2) {
  if (n < 0) fail(ErrorCode::BadIndices, "level n must be >= 0");
  mpz_class pn;
  mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(ctx->prime()),
                static_cast<unsigned long>(n));
  const int Ddist = cls.t1_distinguished() ? D1 : D2;
  if (pn > Ddist) {
    fail(ErrorCode::TruncationTooSmall,
         "Upsilon_n has degree p^n > " + std::to_string(Ddist) + " in the distinguished variable");
  }
  const Series1 x = one_plus_t_power(ctx, D1, pn * cls.a);
  const Series1 y = one_plus_t_power(ctx, D2, pn * cls.b);
  std::vector<mpz_class> g(static_cast<std::size_t>(D1 + 1) * (D2 + 1));
  for (int i = 0; i <= D1; ++i) {
    for (int j = 0; j <= D2; ++j) g[static_cast<std::size_t>(i) * (D2 + 1) + j] = x[i] * y[j];
  }
  g[0] -= 1;
  return UpsilonElement{cls, n, Series2(ctx, D1, D2, std::move(g))};
}

Series2 upsilon_frame(const P1Class& cls, int n, const ContextPtr& ctx, int D1, int D2) {
  if (n < 0) fail(ErrorCode::BadIndices, "level n must be >= 0");
  const bool sw = cls.t1_distinguished();
  const int Dx = sw ? D2 : D1, Dy = sw ? D1 : D2;
  const Frame fr = frame_of(cls, *ctx, Dx);
  mpz_class pn;
  mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(ctx->prime()),
                static_cast<unsigned long>(n));
  if (pn > Dy) {
    fail(ErrorCode::TruncationTooSmall,
         "Upsilon_n has degree p^n > " + std::to_string(Dy) + " in the distinguished variable");
  }
  const Series1 x = one_plus_t_power(ctx, Dx, pn * fr.slope);
  const Series1 y = one_plus_t_power(ctx, Dy, pn);
  std::vector<mpz_class> g(static_cast<std::size_t>(Dx + 1) * (Dy + 1));
  for (int i = 0; i <= Dx; ++i) {
    for (int j = 0; j <= Dy; ++j) g[static_cast<std::size_t>(i) * (Dy + 1) + j] = x[i] * y[j];
  }
  g[0] -= 1;
  Series2 s(ctx, Dx, Dy, std::move(g));
  return sw ? s.swapped() : s;
}

WeierstrassT2 weierstrass_T2(const Series2& f) {
  const auto& ctx = *f.context();
  const int mu = f.content_val();
  if (mu >= ctx.precision()) {
    fail(ErrorCode::ZeroSeries, "series vanishes at precision (N=" +
                                    std::to_string(ctx.precision()) + ")");
  }
  const int D1 = f.d1(), D2 = f.d2();
  const mpz_class& pm = ctx.power(mu);
  int d = -1;
  for (int j = 0; j <= D2 && d < 0; ++j) {
    mpz_class c;
    mpz_divexact(c.get_mpz_t(), f.at(0, j).get_mpz_t(), pm.get_mpz_t());
    if (mpz_divisible_ui_p(c.get_mpz_t(), ctx.prime()) == 0) d = j;
  }
  if (d < 0) {
    fail(ErrorCode::NotFiniteDegree,
         "every T2-coefficient vanishes mod (p, T1) up to D2=" + std::to_string(D2));
  }
  // Outer variable T2, coefficient ring Z/p^N[T1]/(T1^{D1+1}).
  detail::APoly g(D2 + 1, D1 + 1);
  for (int i = 0; i <= D1; ++i) {
    for (int j = 0; j <= D2; ++j) {
      mpz_divexact(g.at(j, i).get_mpz_t(), f.at(i, j).get_mpz_t(), pm.get_mpz_t());
    }
  }
  const detail::Prepared prep = detail::hensel_prepare(g, static_cast<std::size_t>(d), ctx);
  auto to_series = [&](const detail::APoly& a) {
    Series2 s(f.context(), D1, D2);
    for (std::size_t j = 0; j < a.rows && j <= static_cast<std::size_t>(D2); ++j) {
      for (int i = 0; i <= D1; ++i) s.set(i, static_cast<int>(j), a.at(j, i));
    }
    return s;
  };
  return WeierstrassT2{mu, d, to_series(prep.P), to_series(prep.U)};
}

int monsky_valuation(const Series2& g, const P1Class& cls) {
  const auto& ctx = *g.context();
  const std::uint32_t p = static_cast<std::uint32_t>(ctx.prime());
  const bool sw = cls.t1_distinguished();
  const Series2 f = sw ? g.swapped() : g;
  const int D1 = f.d1(), D2 = f.d2();
  const Frame fr = frame_of(cls, ctx, D1);

  // ḡ as T2-coefficients in F_p[T1]/(T1^{D1+1}).
  std::vector<kernels::FpCoeffs> col(D2 + 1, kernels::FpCoeffs(D1 + 1));
  bool any = false;
  for (int i = 0; i <= D1; ++i) {
    for (int j = 0; j <= D2; ++j) {
      col[j][i] = static_cast<std::uint32_t>(mpz_fdiv_ui(f.at(i, j).get_mpz_t(), p));
      any = any || col[j][i] != 0;
    }
  }
  if (!any) fail(ErrorCode::ZeroSeries, "series vanishes mod p; strip the p-power first");

  // Ῡ is an associate of T2 - h with h = (1+T1)^{-slope} - 1.
  const ContextPtr cp = PadicContext::make(ctx.prime(), 1);
  const Series1 hs = one_plus_t_power(cp, D1, -fr.slope);
  kernels::FpCoeffs h(D1 + 1);
  for (int i = 1; i <= D1; ++i) h[i] = static_cast<std::uint32_t>(hs[i].get_ui());

  // Dropping T2^{>D2} perturbs the k-th quotient's T2^j coefficient only from T1-degree
  // D2+1-j-k on, and its remainder only from T1-degree D2+1-k on.
  int k = 0;
  for (;;) {
    const int deg = static_cast<int>(col.size()) - 1;
    const int reliable = std::min(D1, D2 - k);
    bool zero = true;
    for (int j = 0; j <= deg && zero; ++j) {
      for (int i = 0; i <= std::min(D1, D2 - j - k) && zero; ++i) zero = col[j][i] == 0;
    }
    if (zero || reliable < 0) {
      fail(ErrorCode::PrecisionInconclusive,
           "quotient vanishes on the (D1,D2)=(" + std::to_string(D1) + "," + std::to_string(D2) +
               ") grid after " + std::to_string(k) + " divisions");
    }
    // Synthetic division by (T2 - h): q_{j-1} = g_j + h·q_j, remainder g_0 + h·q_0.
    std::vector<kernels::FpCoeffs> q(std::max(deg, 1), kernels::FpCoeffs(D1 + 1));
    kernels::FpCoeffs acc = col[deg];
    for (int j = deg - 1; j >= 0; --j) {
      q[j] = acc;
      acc = kernels::mul_fp(acc, h, D1 + 1, p);
      for (int i = 0; i <= D1; ++i) acc[i] = (acc[i] + col[j][i]) % p;
    }
    if (deg == 0 || std::any_of(acc.begin(), acc.begin() + reliable + 1, [](std::uint32_t x) { return x != 0; })) {
      return k;
    }
    col = std::move(q);
    ++k;
  }
}

bool lines_coprime(const P1Class& c1, const P1Class& c2) {
  if (c1.p != c2.p) fail(ErrorCode::InputError, "classes over different primes");
  const int M = std::min(c1.M, c2.M);
  return !(c1.at_precision(M) == c2.at_precision(M));
}

int intersection_depth(const P1Class& c1, const P1Class& c2) {
  if (c1.p != c2.p) fail(ErrorCode::InputError, "classes over different primes");
  const int M = std::min(c1.M, c2.M);
  const P1Class x = c1.at_precision(M), y = c2.at_precision(M);
  const int v = vp_capped(mod_power(x.a * y.b - y.a * x.b, c1.p, M), c1.p, M);
  if (v >= M) fail(ErrorCode::SameLine, "classes agree at precision M=" + std::to_string(M));
  return v;
}

}  // namespace iwalab
