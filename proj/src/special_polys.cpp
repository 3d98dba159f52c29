#include <algorithm>
#include <string>

#include "iwalab/errors.hpp"
#include "iwalab/kernels.hpp"
#include "iwalab/series1.hpp"
#include "poly_ops.hpp"

namespace iwalab {

namespace {

long ipow(long p, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

void need_degree(long deg, int D, const char* what) {
  if (deg > D) {
    fail(ErrorCode::TruncationTooSmall, std::string(what) + " has degree " +
                                            std::to_string(deg) + " > D=" + std::to_string(D));
  }
}

std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                const mpz_class& m) {
  std::vector<mpz_class> r = kernels::mul_kronecker(a, b, a.size() + b.size() - 1);
  kernels::reduce(r, m);
  return r;
}

// Φ_m(1+T) mod p^N as a coefficient list of length p^{m-1}(p-1)+1.
std::vector<mpz_class> phi_shifted_coeffs(long p, int m, const mpz_class& mod) {
  std::vector<mpz_class> step{mpz_class(1), mpz_class(1)};
  for (int j = 1; j < m; ++j) {
    std::vector<mpz_class> acc = step;
    for (long i = 1; i < p; ++i) acc = poly_mul(acc, step, mod);
    step = std::move(acc);
  }
  std::vector<mpz_class> sum(static_cast<std::size_t>((step.size() - 1) * (p - 1) + 1));
  std::vector<mpz_class> cur{mpz_class(1)};
  for (long i = 0; i < p; ++i) {
    if (i) cur = poly_mul(cur, step, mod);
    for (std::size_t k = 0; k < cur.size(); ++k) sum[k] += cur[k];
  }
  kernels::reduce(sum, mod);
  return sum;
}

Series1 product_of_shifted_phis(const ContextPtr& ctx, int D, const std::vector<int>& ms,
                                 bool times_t) {
  std::vector<mpz_class> acc{mpz_class(1)};
  if (times_t) acc = {mpz_class(0), mpz_class(1)};
  for (int m : ms) {
    acc = poly_mul(acc, phi_shifted_coeffs(ctx->prime(), m, ctx->modulus()), ctx->modulus());
  }
  return Series1(ctx, D, std::move(acc));
}

}  // namespace

Series1 phi(const ContextPtr& ctx, int D, int n) {
  if (n < 1) fail(ErrorCode::BadIndices, "phi needs n >= 1");
  const long p = ctx->prime();
  const long step = ipow(p, n - 1);
  need_degree(step * (p - 1), D, "Phi_n");
  Series1 s(ctx, D);
  for (long i = 0; i < p; ++i) s.set(static_cast<int>(i * step), 1);
  return s;
}

Series1 omega_pm(const ContextPtr& ctx, int D, int n, Sign sign) {
  if (n < 0) fail(ErrorCode::BadIndices, "omega needs n >= 0");
  const long p = ctx->prime();
  std::vector<int> ms;
  long deg = 1;
  for (int m = 1; m <= n; ++m) {
    const bool even = m % 2 == 0;
    if (even == (sign == Sign::Plus)) {
      ms.push_back(m);
      deg += ipow(p, m - 1) * (p - 1);
    }
  }
  need_degree(deg, D, "omega_n");
  return product_of_shifted_phis(ctx, D, ms, true);
}

Series1 nu(const ContextPtr& ctx, int D, int m, int n) {
  if (n < 0 || m < n) fail(ErrorCode::BadIndices, "nu needs m >= n >= 0");
  const long p = ctx->prime();
  need_degree(ipow(p, m) - ipow(p, n), D, "nu_{m,n}");
  std::vector<int> ks;
  for (int k = n + 1; k <= m; ++k) ks.push_back(k);
  return product_of_shifted_phis(ctx, D, ks, false);
}

Series1 twist_inverse_action(const Series1& f) {
  const int d = f.degree();
  if (d < 0) fail(ErrorCode::ZeroSeries, "twist of a series vanishing at precision");
  // (1+T)^d f((1+T)^{-1} - 1) = Σ a_i (-T)^i (1+T)^{d-i}
  std::vector<mpz_class> out(f.truncation() + 1);
  mpz_class b;
  for (int i = 0; i <= d; ++i) {
    if (f[i] == 0) continue;
    const unsigned long e = static_cast<unsigned long>(d - i);
    for (unsigned long k = 0; k <= e; ++k) {
      mpz_bin_uiui(b.get_mpz_t(), e, k);
      if (i % 2) {
        mpz_submul(out[i + k].get_mpz_t(), f[i].get_mpz_t(), b.get_mpz_t());
      } else {
        mpz_addmul(out[i + k].get_mpz_t(), f[i].get_mpz_t(), b.get_mpz_t());
      }
    }
  }
  return Series1(f.context(), f.truncation(), std::move(out));
}

int detail::resultant_valuation(const std::vector<mpz_class>& P,
                                const std::vector<mpz_class>& Q, const PadicContext& ctx) {
  // P monic of degree d. Rows: T^i·Q mod P for i < d.
  const std::size_t d = P.size() - 1;
  if (d == 0) return 0;
  const mpz_class& m = ctx.modulus();
  detail::APoly Pa(d + 1, 1), Qa(Q.size(), 1);
  std::copy(P.begin(), P.end(), Pa.v.begin());
  std::copy(Q.begin(), Q.end(), Qa.v.begin());
  const detail::APoly rinv = detail::monic_rev_inverse(Pa, Q.size() + 1, ctx);
  detail::APoly r = detail::divrem_monic(Qa, Pa, rinv, ctx).r;
  std::vector<std::vector<mpz_class>> rows;
  rows.reserve(d);
  std::vector<mpz_class> cur(r.v.begin(), r.v.end());
  cur.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    rows.push_back(cur);
    // cur <- T·cur mod P
    mpz_class lead = cur[d - 1];
    for (std::size_t k = d - 1; k >= 1; --k) cur[k] = cur[k - 1];
    cur[0] = 0;
    for (std::size_t k = 0; k < d; ++k) {
      cur[k] -= lead * P[k];
      mpz_fdiv_r(cur[k].get_mpz_t(), cur[k].get_mpz_t(), m.get_mpz_t());
    }
  }
  return detail::det_valuation(std::move(rows), ctx);
}

int quotient_size_val(const Series1& f, const Series1& g) {
  const WeierstrassData wf = weierstrass(f);
  const WeierstrassData wg = weierstrass(g);
  if (wf.mu > 0 && wg.mu > 0) {
    fail(ErrorCode::NotCoprime, "p divides both series; quotient is infinite");
  }
  // Distinguished parts are known mod p^{N - mu}.
  const int N_eff = f.precision() - std::max(wf.mu, wg.mu);
  if (N_eff < 1) fail(ErrorCode::NotCoprime, "no precision left after removing p-content");
  const ContextPtr ctx = f.context()->with_precision(N_eff);
  std::vector<mpz_class> P(wf.distinguished.coeffs().begin(),
                           wf.distinguished.coeffs().begin() + wf.lambda + 1);
  std::vector<mpz_class> Q(wg.distinguished.coeffs().begin(),
                           wg.distinguished.coeffs().begin() + wg.lambda + 1);
  kernels::reduce(P, ctx->modulus());
  kernels::reduce(Q, ctx->modulus());
  const int v = detail::resultant_valuation(P, Q, *ctx);
  if (wf.lambda > 0 && wg.lambda > 0 && v >= N_eff) {
    fail(ErrorCode::NotCoprime, "resultant of distinguished parts vanishes at precision");
  }
  return v + wf.mu * wg.lambda + wg.mu * wf.lambda;
}

}  // namespace iwalab
