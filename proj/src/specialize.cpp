#include "iwalab/specialize.hpp"

#include <string>

#include "frame_ops.hpp"
#include "iwalab/errors.hpp"
#include "iwalab/kernels.hpp"

namespace iwalab {

namespace detail {

FramedColumns framed_columns(const Series2& f, const P1Class& cls) {
  const auto& ctx = f.context();
  const Series2 F = cls.t1_distinguished() ? f.swapped() : f;
  FramedColumns out;
  out.D1 = F.d1();
  out.D2 = F.d2();
  out.frame = frame_of(cls, *ctx, out.D1);
  out.content = F.content_val();
  if (out.content >= ctx->precision()) {
    fail(ErrorCode::ZeroSeries, "series vanishes at precision (N=" +
                                    std::to_string(ctx->precision()) + ")");
  }
  const mpz_class& pc = ctx->power(out.content);

  // Rows in T1 rewritten in powers of 1+T2.
  std::vector<Coeffs> byY(out.D2 + 1, Coeffs(out.D1 + 1));
  for (int i = 0; i <= out.D1; ++i) {
    std::vector<mpz_class> row(out.D2 + 1);
    for (int j = 0; j <= out.D2; ++j) {
      mpz_divexact(row[j].get_mpz_t(), F.at(i, j).get_mpz_t(), pc.get_mpz_t());
    }
    const Series1 shifted = taylor_shift(Series1(ctx, out.D2, std::move(row)), -1);
    for (int j = 0; j <= out.D2; ++j) byY[j][i] = shifted[j];
  }
  out.w.resize(out.D2 + 1);
  for (int j = 0; j <= out.D2; ++j) {
    if (std::all_of(byY[j].begin(), byY[j].end(), [](const mpz_class& x) { return x == 0; })) {
      out.w[j] = Coeffs(out.D1 + 1);
      continue;
    }
    const Series1 uj = one_plus_t_power(ctx, out.D1, -out.frame.slope * j);
    out.w[j] = (Series1(ctx, out.D1, std::move(byY[j])) * uj).coeffs();
  }
  return out;
}

}  // namespace detail

namespace {

using detail::Coeffs;

// Z/p^N[T1]/(T1^cols)[Z]/(Z^rows - 1), elements as row-major grids.
struct CyclicRing {
  std::size_t rows, cols;
  mpz_class m;

  Coeffs zero() const { return Coeffs(rows * cols); }
  Coeffs one() const {
    Coeffs e = zero();
    e[0] = 1;
    return e;
  }
  Coeffs mul(const Coeffs& a, const Coeffs& b) const {
    Coeffs r = kernels::mul_grid(a, rows, b, rows, cols, rows, rows > 1 ? rows : 0);
    kernels::reduce(r, m);
    return r;
  }
  Coeffs add(const Coeffs& a, const Coeffs& b) const {
    Coeffs r(a.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = a[k] + b[k];
    kernels::reduce(r, m);
    return r;
  }
  Coeffs sub(const Coeffs& a, const Coeffs& b) const {
    Coeffs r(a.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = a[k] - b[k];
    kernels::reduce(r, m);
    return r;
  }
  Coeffs neg(const Coeffs& a) const { return sub(zero(), a); }
  // Multiplication by the cyclic generator Z.
  Coeffs shift(const Coeffs& a) const {
    Coeffs r(a.size());
    for (std::size_t i = 0; i < rows; ++i) {
      std::copy_n(&a[i * cols], cols, &r[((i + 1) % rows) * cols]);
    }
    return r;
  }
};

// Division-free determinant (Berkowitz) over a commutative ring.
Coeffs berkowitz_det(const std::vector<std::vector<Coeffs>>& A, const CyclicRing& R) {
  const std::size_t n = A.size();
  std::vector<Coeffs> C{R.one()};
  for (std::size_t r = 0; r < n; ++r) {
    // t = (1, -a, -R·S, -R·A·S, ..., -R·A^{r-1}·S)
    std::vector<Coeffs> t{R.one(), R.neg(A[r][r])};
    std::vector<Coeffs> v(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = A[i][r];
    for (std::size_t k = 0; k < r; ++k) {
      Coeffs s = R.zero();
      for (std::size_t i = 0; i < r; ++i) s = R.add(s, R.mul(A[r][i], v[i]));
      t.push_back(R.neg(s));
      if (k + 1 < r) {
        std::vector<Coeffs> nv(r, R.zero());
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < r; ++j) nv[i] = R.add(nv[i], R.mul(A[i][j], v[j]));
        }
        v = std::move(nv);
      }
    }
    std::vector<Coeffs> next(r + 2, R.zero());
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= std::min(i, r); ++j) {
        next[i] = R.add(next[i], R.mul(t[i - j], C[j]));
      }
    }
    C = std::move(next);
  }
  return n % 2 ? R.neg(C[n]) : C[n];
}

}  // namespace

InvariantPair Specialization::raw() const {
  InvariantPair inv;
  try {
    inv = mu_lambda(series);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroSeries) throw;
    fail(ErrorCode::NotTorsion, "specialization at level " + std::to_string(n) +
                                    " vanishes at precision: Upsilon_n is not coprime to f");
  }
  inv.mu += static_cast<int>(p_exponent);
  return inv;
}

Specialization specialize(const Series2& f, const P1Class& cls, int n) {
  if (n < 0) fail(ErrorCode::BadIndices, "level n must be >= 0");
  const auto& ctx = f.context();
  const long p = ctx->prime();
  const detail::FramedColumns fc = detail::framed_columns(f, cls);
  const std::size_t cols = fc.D1 + 1;
  std::size_t rows = 1;
  for (int k = 0; k < n; ++k) rows *= p;

  // f(T1, uY - 1) in A[Y]/(Y^{p^n} - 1).
  Coeffs cur(rows * cols);
  for (std::size_t j = 0; j < fc.w.size(); ++j) {
    const std::size_t r = j % rows;
    for (std::size_t i = 0; i < cols; ++i) cur[r * cols + i] += fc.w[j][i];
  }
  kernels::reduce(cur, ctx->modulus());

  // Norm down the tower A[Y]/(Y^{p^k}-1) ⊃ A[Z]/(Z^{p^{k-1}}-1), Z = Y^p.
  while (rows > 1) {
    const std::size_t sub = rows / p;
    const CyclicRing R{sub, cols, ctx->modulus()};
    std::vector<Coeffs> g(p, R.zero());
    for (std::size_t r = 0; r < sub; ++r) {
      for (long i = 0; i < p; ++i) {
        std::copy_n(&cur[(r * p + i) * cols], cols, &g[i][r * cols]);
      }
    }
    std::vector<std::vector<Coeffs>> M(p, std::vector<Coeffs>(p));
    for (long i = 0; i < p; ++i) {
      for (long j = 0; j < p; ++j) {
        M[(i + j) % p][j] = i + j >= p ? R.shift(g[i]) : g[i];
      }
    }
    cur = berkowitz_det(M, R);
    rows = sub;
  }
  mpz_class pn;
  mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
  return Specialization{Series1(ctx, fc.D1, std::move(cur)), fc.content * pn.get_si(), n};
}

Series1 substitute(const Series2& f, const P1Class& cls) {
  const auto& ctx = f.context();
  const Series2 F = cls.t1_distinguished() ? f.swapped() : f;
  const Frame fr = frame_of(cls, *ctx, F.d1());
  const Series1 h = one_plus_t_power(ctx, F.d1(), -fr.slope) - Series1::one(ctx, F.d1());
  Series1 acc = F.t2_coeff(F.d2());
  for (int j = F.d2() - 1; j >= 0; --j) acc = acc * h + F.t2_coeff(j);
  return acc;
}

}  // namespace iwalab
