#include <algorithm>
#include <string>

#include "frame_ops.hpp"
#include "iwalab/errors.hpp"
#include "iwalab/kernels.hpp"
#include "iwalab/specialize.hpp"

namespace iwalab {

std::vector<LevelValuation> level_valuations(const Series2& f, const P1Class& cls, int n) {
  if (n < 0) fail(ErrorCode::BadIndices, "level n must be >= 0");
  const auto& ctx = f.context();
  const long p = ctx->prime();
  const int N = ctx->precision();
  const mpz_class& m = ctx->modulus();
  const detail::FramedColumns fc = detail::framed_columns(f, cls);
  const int rows = fc.D1 + 1;

  std::vector<LevelValuation> out;
  long pk = 1, pk1 = 1;  // p^k, p^{k-1}
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      pk1 = pk;
      pk *= p;
    }
    const long e = k == 0 ? 1 : pk - pk1;
    // Σ_j w_j ζ^j with ζ^{p^k} = 1, then reduced mod Φ_{p^k}(ζ).
    std::vector<std::vector<mpz_class>> acc(rows, std::vector<mpz_class>(pk));
    for (std::size_t j = 0; j < fc.w.size(); ++j) {
      const long c = static_cast<long>(j % pk);
      for (int i = 0; i < rows; ++i) acc[i][c] += fc.w[j][i];
    }
    int best = static_cast<int>(e) * N, arg = 0;
    for (int i = 0; i < rows; ++i) {
      auto& a = acc[i];
      for (long c = pk - 1; c >= e; --c) {
        if (a[c] == 0) continue;
        for (long t = 0; t + 1 < p; ++t) a[c - e + t * pk1] -= a[c];
      }
      a.resize(e);
      kernels::reduce(a, m);
      // Coordinates in the basis π^t, π = ζ - 1; v_π(b·π^t) = e·v_p(b) + t.
      const Series1 b = k == 0 ? Series1(ctx, 0, a) : taylor_shift(Series1(ctx, e - 1, a), 1);
      int v = static_cast<int>(e) * N;
      for (long t = 0; t < e && t < v; ++t) {
        v = std::min(v, static_cast<int>(e * ctx->val(b[static_cast<int>(t)]) + t));
      }
      if (v < best) {
        best = v;
        arg = i;
      }
    }
    if (best >= e * N) {
      fail(ErrorCode::NotTorsion,
           "specialization vanishes at level " + std::to_string(k) + " (N=" + std::to_string(N) +
               ", D1=" + std::to_string(fc.D1) + ", D2=" + std::to_string(fc.D2) +
               "): Upsilon_n is not coprime to f");
    }
    out.push_back(LevelValuation{k, best, arg});
  }
  return out;
}

InvariantPair coinvariant_pair(const Series2& f, const P1Class& cls, int n) {
  const std::vector<LevelValuation> lv = level_valuations(f, cls, n);
  const long p = f.prime();
  long mu = f.content_val(), lambda = 0, pk = 1;
  for (int k = 0; k < n; ++k) mu *= p;
  for (const auto& l : lv) {
    const long e = l.k == 0 ? 1 : pk - pk / p;
    mu += l.mu_pi;
    lambda += e * l.lambda_pi;
    pk *= p;
  }
  return InvariantPair{static_cast<int>(mu), static_cast<int>(lambda)};
}

}  // namespace iwalab
