#include "poly_ops.hpp"

#include <algorithm>

#include "iwalab/errors.hpp"
#include "iwalab/kernels.hpp"

namespace iwalab::detail {

namespace {

APoly reversed(const APoly& a, std::size_t rows) {
  APoly r(rows, a.cols);
  for (std::size_t i = 0; i < rows && i < a.rows; ++i) {
    const std::size_t src = a.rows - 1 - i;
    std::copy_n(&a.v[src * a.cols], a.cols, &r.v[i * a.cols]);
  }
  return r;
}

APoly head(const APoly& a, std::size_t rows) {
  APoly h(rows, a.cols);
  std::copy_n(a.v.begin(), std::min(rows, a.rows) * a.cols, h.v.begin());
  return h;
}

}  // namespace

bool APoly::is_zero() const {
  return std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
}

long APoly::degree() const {
  for (long r = static_cast<long>(rows) - 1; r >= 0; --r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (v[r * cols + c] != 0) return r;
    }
  }
  return -1;
}

APoly add(const APoly& a, const APoly& b, const mpz_class& m) {
  APoly r(std::max(a.rows, b.rows), a.cols);
  for (std::size_t i = 0; i < a.v.size(); ++i) r.v[i] = a.v[i];
  for (std::size_t i = 0; i < b.v.size(); ++i) r.v[i] += b.v[i];
  kernels::reduce(r.v, m);
  return r;
}

APoly sub(const APoly& a, const APoly& b, const mpz_class& m) {
  APoly r(std::max(a.rows, b.rows), a.cols);
  for (std::size_t i = 0; i < a.v.size(); ++i) r.v[i] = a.v[i];
  for (std::size_t i = 0; i < b.v.size(); ++i) r.v[i] -= b.v[i];
  kernels::reduce(r.v, m);
  return r;
}

APoly mul_trunc(const APoly& a, const APoly& b, std::size_t out_rows, const mpz_class& m) {
  APoly r;
  r.rows = out_rows;
  r.cols = a.cols;
  if (a.cols == 1) {
    r.v = kernels::mul_trunc(a.v, b.v, out_rows);
  } else {
    r.v = kernels::mul_grid(a.v, a.rows, b.v, b.rows, a.cols, out_rows);
  }
  kernels::reduce(r.v, m);
  return r;
}

APoly mul(const APoly& a, const APoly& b, const mpz_class& m) {
  if (a.rows == 0 || b.rows == 0) return APoly(1, a.cols);
  return mul_trunc(a, b, a.rows + b.rows - 1, m);
}

Coeffs a_mul(const Coeffs& a, const Coeffs& b, const mpz_class& m) {
  Coeffs r = kernels::mul_trunc(a, b, a.size());
  kernels::reduce(r, m);
  return r;
}

Coeffs a_inverse(const Coeffs& a, const PadicContext& ctx) {
  const std::size_t n = a.size();
  Coeffs b(n);
  const mpz_class u = ctx.inverse(a[0]);
  b[0] = u;
  mpz_class acc;
  for (std::size_t k = 1; k < n; ++k) {
    acc = 0;
    for (std::size_t i = 1; i <= k; ++i) {
      mpz_addmul(acc.get_mpz_t(), a[i].get_mpz_t(), b[k - i].get_mpz_t());
    }
    b[k] = -acc * u;
    ctx.reduce(b[k]);
  }
  return b;
}

APoly inv_series(const APoly& a, std::size_t n, const PadicContext& ctx) {
  const mpz_class& m = ctx.modulus();
  APoly g(1, a.cols);
  Coeffs a0(a.v.begin(), a.v.begin() + a.cols);
  Coeffs g0 = a_inverse(a0, ctx);
  std::copy(g0.begin(), g0.end(), g.v.begin());
  std::size_t k = 1;
  while (k < n) {
    const std::size_t k2 = std::min(2 * k, n);
    APoly e = mul_trunc(head(a, k2), g, k2, m);
    // e <- 2 - a·g
    for (auto& x : e.v) x = -x;
    e.at(0, 0) += 2;
    kernels::reduce(e.v, m);
    g = mul_trunc(g, e, k2, m);
    k = k2;
  }
  return head(g, n);
}

APoly monic_rev_inverse(const APoly& P, std::size_t n, const PadicContext& ctx) {
  return inv_series(reversed(P, P.rows), std::max<std::size_t>(n, 1), ctx);
}

DivRem divrem_monic(const APoly& a, const APoly& P, const APoly& rev_inv,
                    const PadicContext& ctx) {
  const mpz_class& m = ctx.modulus();
  const std::size_t d = P.rows - 1;
  const long da = a.degree();
  DivRem out;
  if (da < static_cast<long>(d)) {
    out.q = APoly(1, a.cols);
    out.r = head(a, std::max<std::size_t>(d, 1));
    if (d == 0) out.r = APoly(1, a.cols);
    return out;
  }
  const std::size_t qrows = static_cast<std::size_t>(da) - d + 1;
  if (rev_inv.rows < qrows) fail(ErrorCode::InputError, "divrem_monic: inverse too short");
  APoly ra = reversed(head(a, static_cast<std::size_t>(da) + 1), qrows);
  APoly qrev = mul_trunc(ra, rev_inv, qrows, m);
  out.q = reversed(qrev, qrows);
  if (d == 0) {
    out.r = APoly(1, a.cols);
    return out;
  }
  APoly low = mul_trunc(out.q, P, d, m);
  out.r = sub(head(a, d), low, m);
  return out;
}

Prepared hensel_prepare(const APoly& f, std::size_t d, const PadicContext& ctx) {
  const mpz_class& m = ctx.modulus();
  const std::size_t R = f.rows, cols = f.cols;
  Prepared out;
  out.P = APoly(d + 1, cols);
  out.P.at(d, 0) = 1;
  out.U = APoly(R - d, cols);
  std::copy(f.v.begin() + d * cols, f.v.end(), out.U.v.begin());
  if (d == 0) return out;

  APoly& P = out.P;
  APoly& Q = out.U;
  APoly t = inv_series(Q, d, ctx);
  APoly one(1, cols);
  one.at(0, 0) = 1;

  // Each round is exact Newton-Hensel: the error ideal squares.
  for (int round = 0; round < 64; ++round) {
    APoly E = sub(f, mul(P, Q, m), m);
    if (E.is_zero()) return out;
    const APoly rinv = monic_rev_inverse(P, R + d + 1, ctx);
    APoly dP = divrem_monic(mul(t, E, m), P, rinv, ctx).r;
    APoly rest = sub(E, mul(Q, dP, m), m);
    APoly dQ = divrem_monic(rest, P, rinv, ctx).q;
    dP.resize_rows(d + 1);
    P = add(P, dP, m);
    dQ.resize_rows(Q.rows);
    Q = add(Q, dQ, m);
    // Refresh t as the inverse of Q modulo the new P.
    const APoly rinv2 = monic_rev_inverse(P, R + d + 1, ctx);
    for (int it = 0; it < 64; ++it) {
      APoly c = divrem_monic(mul(Q, t, m), P, rinv2, ctx).r;
      APoly e = sub(one, c, m);
      if (e.is_zero()) break;
      t = divrem_monic(mul(t, add(one, e, m), m), P, rinv2, ctx).r;
    }
  }
  fail(ErrorCode::PrecisionInconclusive, "Hensel lifting did not converge");
}

int det_valuation(std::vector<Coeffs> M, const PadicContext& ctx) {
  const std::size_t n = M.size();
  const int N = ctx.precision();
  const long p = ctx.prime();
  const mpz_class& mod = ctx.modulus();
  int total = 0;
  mpz_class factor, unit;
  for (std::size_t k = 0; k < n; ++k) {
    int best = N;
    std::size_t piv = k;
    for (std::size_t r = k; r < n; ++r) {
      const int v = vp_capped(M[r][k], p, N);
      if (v < best) {
        best = v;
        piv = r;
        if (v == 0) break;
      }
    }
    if (best >= N) return N;
    total += best;
    if (total >= N) return N;
    std::swap(M[k], M[piv]);
    mpz_divexact(unit.get_mpz_t(), M[k][k].get_mpz_t(), ctx.power(best).get_mpz_t());
    const mpz_class uinv = ctx.inverse(unit);
    for (std::size_t r = k + 1; r < n; ++r) {
      if (M[r][k] == 0) continue;
      mpz_divexact(factor.get_mpz_t(), M[r][k].get_mpz_t(), ctx.power(best).get_mpz_t());
      factor *= uinv;
      mpz_fdiv_r(factor.get_mpz_t(), factor.get_mpz_t(), mod.get_mpz_t());
      for (std::size_t c = k; c < n; ++c) {
        mpz_submul(M[r][c].get_mpz_t(), factor.get_mpz_t(), M[k][c].get_mpz_t());
        mpz_fdiv_r(M[r][c].get_mpz_t(), M[r][c].get_mpz_t(), mod.get_mpz_t());
      }
    }
  }
  return total;
}

}  // namespace iwalab::detail
