#include "iwalab/module_engine.hpp"

#include <algorithm>
#include <string>

#include "iwalab/errors.hpp"
#include "iwalab/specialize.hpp"
#include "poly_ops.hpp"

namespace iwalab {

namespace {

long ipow(long p, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

long phi_pn(long p, int n) { return n == 0 ? 1 : ipow(p, n) - ipow(p, n - 1); }

Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }

}  // namespace

void ElementaryModule2::validate() const {
  if (!ctx) fail(ErrorCode::InputError, "module has no coefficient context");
  for (int m : p_parts) {
    if (m < 1) fail(ErrorCode::InputError, "p_parts exponents must be >= 1");
  }
  for (std::size_t j = 0; j < f_parts.size(); ++j) {
    const auto& f = f_parts[j];
    const std::string where = "f_parts[" + std::to_string(j) + "]";
    if (f.mult < 1) fail(ErrorCode::InputError, where + ": multiplicity must be >= 1");
    if (f.series.prime() != ctx->prime() || f.series.precision() != ctx->precision() ||
        f.series.d1() != D1 || f.series.d2() != D2) {
      fail(ErrorCode::InputError, where + ": ring or truncation differs from the module header");
    }
    if (f.series.content_val() > 0) {
      fail(ErrorCode::InputError, where + ": divisible by p; p-power content belongs in p_parts");
    }
  }
}

InvariantPair ElementaryModule1::invariants() const {
  InvariantPair r;
  for (int m : p_parts) r.mu += m;
  for (const auto& f : f_parts) {
    const InvariantPair x = mu_lambda(f.series);
    r.mu += f.mult * x.mu;
    r.lambda += f.mult * x.lambda;
  }
  return r;
}

Invariants2 invariants_2var(const ElementaryModule2& M) {
  if (M.p_parts.empty() && M.f_parts.empty()) fail(ErrorCode::ZeroModule, "module has no summands");
  M.validate();
  Invariants2 out{0, Series2::one(PadicContext::make(M.ctx->prime(), 1), M.D1, M.D2)};
  for (int m : M.p_parts) out.mu_G += m;
  for (const auto& f : M.f_parts) {
    const Series2 fb = f.series.with_context(out.g_bar.context());
    for (int k = 0; k < f.mult; ++k) out.g_bar = out.g_bar * fb;
  }
  return out;
}

std::vector<InvariantPair> coinvariant_sequence(const ElementaryModule2& M, const P1Class& cls,
                                                int n1) {
  if (n1 < 0) fail(ErrorCode::BadIndices, "level must be >= 0");
  if (M.p_parts.empty() && M.f_parts.empty()) fail(ErrorCode::ZeroModule, "module has no summands");
  M.validate();
  const long p = M.ctx->prime();
  std::vector<long> mu(n1 + 1, 0), lambda(n1 + 1, 0);
  long m = 0;
  for (int x : M.p_parts) m += x;
  for (int n = 0; n <= n1; ++n) mu[n] = m * ipow(p, n);
  for (std::size_t j = 0; j < M.f_parts.size(); ++j) {
    const auto& f = M.f_parts[j];
    std::vector<LevelValuation> lv;
    try {
      lv = level_valuations(f.series, cls, n1);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotTorsion) throw;
      fail(ErrorCode::NotTorsion, "f_parts[" + std::to_string(j) + "]: " + e.what());
    }
    long acc_mu = 0, acc_lambda = 0;
    for (int n = 0; n <= n1; ++n) {
      acc_mu += lv[n].mu_pi;
      acc_lambda += phi_pn(p, n) * lv[n].lambda_pi;
      mu[n] += f.mult * acc_mu;
      lambda[n] += f.mult * acc_lambda;
    }
  }
  std::vector<InvariantPair> out(n1 + 1);
  for (int n = 0; n <= n1; ++n) out[n] = {static_cast<int>(mu[n]), static_cast<int>(lambda[n])};
  return out;
}

InvariantPair coinvariant_invariants(const ElementaryModule2& M, const P1Class& cls, int n) {
  return coinvariant_sequence(M, cls, n).back();
}

std::vector<ScanEntry> scan_classes(const ElementaryModule2& M, const std::vector<P1Class>& classes,
                                    int n, bool parallel) {
  std::vector<ScanEntry> out(classes.size());
  const long count = static_cast<long>(classes.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < count; ++i) {
    ScanEntry& e = out[i];
    e.cls = classes[i];
    try {
      e.inv = coinvariant_invariants(M, classes[i], n);
    } catch (const Error& err) {
      e.error = err.code();
      e.message = err.what();
    }
  }
  return out;
}

GrowthReport growth_scan(const ElementaryModule2& M, const P1Class& cls, int n0, int n1) {
  if (n0 < 0 || n1 < n0 + 2) fail(ErrorCode::BadIndices, "growth fit needs n0 >= 0 and n1 >= n0+2");
  const long p = M.ctx->prime();
  const std::vector<InvariantPair> seq = coinvariant_sequence(M, cls, n1);
  GrowthReport r;
  r.n0 = n0;
  r.n1 = n1;
  for (int n = n0; n <= n1; ++n) {
    r.mu_seq.push_back(seq[n].mu);
    r.lambda_seq.push_back(seq[n].lambda);
  }
  auto dmu = [&](int n) { return static_cast<long>(seq[n].mu) - seq[n - 1].mu; };
  auto dlambda = [&](int n) { return static_cast<long>(seq[n].lambda) - seq[n - 1].lambda; };

  // Δ_n = μ_G·φ(p^n) + m1 on the top window of differences.
  const int window = std::max(2, (n1 - n0 + 1) / 2);
  const int lo = std::max(n0 + 1, n1 - window + 1);
  const long denom = phi_pn(p, n1) - phi_pn(p, n1 - 1);
  const long num = dmu(n1) - dmu(n1 - 1);
  if (num % denom != 0) {
    fail(ErrorCode::FitUnstable, "second difference of mu not divisible by " + std::to_string(denom));
  }
  r.mu_G = num / denom;
  r.m1 = dmu(n1) - r.mu_G * phi_pn(p, n1);
  for (int n = lo; n <= n1; ++n) {
    if (dmu(n) != r.mu_G * phi_pn(p, n) + r.m1) {
      fail(ErrorCode::FitUnstable, "mu differences not stable at level " + std::to_string(n));
    }
  }
  r.c = seq[n1].mu - r.mu_G * ipow(p, n1) - r.m1 * n1;

  r.lambda_stable = dlambda(n1) % phi_pn(p, n1) == 0;
  if (r.lambda_stable) {
    const long l = dlambda(n1) / phi_pn(p, n1);
    for (int n = lo; n <= n1; ++n) r.lambda_stable = r.lambda_stable && dlambda(n) == l * phi_pn(p, n);
    if (r.lambda_stable) r.l = l;
  }

  const Invariants2 inv = invariants_2var(M);
  r.monsky_m1 = monsky_valuation(inv.g_bar, cls);
  r.m1_matches = r.m1 == r.monsky_m1;
  return r;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Holds:
      return "HOLDS";
    case Outcome::Fails:
      return "FAILS";
    case Outcome::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

std::vector<P1Class> lifts(const P1Class& cls, int radius) {
  const int M = std::max(cls.M, radius + 1);
  const long pr = ipow(cls.p, radius);
  std::vector<P1Class> out;
  for (long t = 0; t < cls.p; ++t) {
    if (cls.t1_distinguished() || cls.a == 1) {
      out.push_back(P1Class::make(cls.p, cls.a, cls.b + t * pr, M));
    } else {
      out.push_back(P1Class::make(cls.p, cls.a + t * pr, cls.b, M));
    }
  }
  return out;
}

CriterionResult scan_criterion(const ElementaryModule2& M, const P1Class& cls, int mu_G,
                               int scan_radius, std::vector<RadiusScan>& radii) {
  const int Dline = cls.t1_distinguished() ? M.D2 : M.D1;
  bool any_admissible = false, any_constant = false, all_beyond = true, center_bad = false;
  std::optional<int> max_lambda;
  for (int rho = std::max(scan_radius, 1); rho <= scan_radius + 2; ++rho) {
    RadiusScan rs;
    rs.radius = rho;
    rs.admissible = ipow(cls.p, rho) <= Dline;
    if (!rs.admissible) {
      radii.push_back(rs);
      continue;
    }
    any_admissible = true;
    const std::vector<ScanEntry> entries = scan_classes(M, lifts(cls, rho), 0);
    const ScanEntry& center = entries[0];
    if (!center.inv || center.inv->mu > mu_G) center_bad = true;
    rs.constant = std::all_of(entries.begin(), entries.end(), [&](const ScanEntry& e) {
      return e.inv && center.inv && *e.inv == *center.inv;
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      const ScanEntry& e = entries[i];
      if (e.inv) {
        rs.max_lambda = std::max(rs.max_lambda.value_or(0), e.inv->lambda);
        if (e.inv->mu > mu_G || e.inv->lambda >= ipow(cls.p, rho)) ++rs.lifts_beyond_radius;
      } else if (e.error == ErrorCode::NotTorsion) {
        ++rs.lifts_beyond_radius;
      }
    }
    if (rs.max_lambda) max_lambda = std::max(max_lambda.value_or(0), *rs.max_lambda);
    any_constant = any_constant || rs.constant;
    all_beyond = all_beyond && rs.lifts_beyond_radius > 0;
    radii.push_back(rs);
  }
  const std::string seen =
      max_lambda ? "max lambda " + std::to_string(*max_lambda) + " over scanned lifts" : "no finite lambda";
  if (!any_admissible) {
    return {Outcome::Inconclusive, "no admissible radius: p^rho exceeds the line truncation " +
                                       std::to_string(Dline)};
  }
  if (any_constant) return {Outcome::Holds, "bounded within scan (" + seen + ")"};
  if (center_bad && all_beyond) {
    return {Outcome::Fails, "lambda reaches p^rho at every admissible radius (" + seen + ")"};
  }
  return {Outcome::Inconclusive, "lambda not constant on any admissible ball (" + seen + ")"};
}

}  // namespace

MhgReport mhg_check(const ElementaryModule2& M, const P1Class& cls, int n0, int n1,
                    int scan_radius, int mu_correction) {
  if (n0 < 0 || n1 < n0) fail(ErrorCode::BadIndices, "need 0 <= n0 <= n1");
  if (scan_radius < 0) fail(ErrorCode::BadIndices, "scan radius must be >= 0");
  const long p = M.ctx->prime();
  const Invariants2 inv = invariants_2var(M);
  MhgReport r;
  r.mu_G = inv.mu_G;
  r.mu_correction = mu_correction;

  try {
    r.v_upsilon = monsky_valuation(inv.g_bar, cls);
    r.g = *r.v_upsilon == 0
              ? CriterionResult{Outcome::Holds, "g_bar not divisible by the Upsilon coset"}
              : CriterionResult{Outcome::Fails,
                                "v_Upsilon(g_bar) = " + std::to_string(*r.v_upsilon)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionInconclusive) throw;
    r.g = {Outcome::Inconclusive, e.what()};
  }

  try {
    r.mu_H = coinvariant_invariants(M, cls, 0).mu - mu_correction;
    r.d = *r.mu_H == r.mu_G ? CriterionResult{Outcome::Holds, "mu_G = mu_{G/H}"}
                            : CriterionResult{Outcome::Fails, "mu_G = " + std::to_string(r.mu_G) +
                                                                  " but mu_{G/H} = " +
                                                                  std::to_string(*r.mu_H)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotTorsion) throw;
    r.d = {Outcome::Fails, std::string("coinvariants not torsion at n=0: ") + e.what()};
  }

  for (int n = n0; n <= n1; ++n) r.levels.push_back(LevelCheck{n, std::nullopt, inv.mu_G * ipow(p, n)});
  try {
    const std::vector<InvariantPair> seq = coinvariant_sequence(M, cls, n1);
    bool all = true;
    for (auto& lc : r.levels) {
      lc.mu_n = seq[lc.n].mu;
      all = all && *lc.mu_n == lc.expected;
    }
    r.e = all ? CriterionResult{Outcome::Holds, "mu_n = p^n mu_G at every level"}
              : CriterionResult{Outcome::Fails, "mu_n differs from p^n mu_G"};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotTorsion) throw;
    r.e = {Outcome::Fails, std::string("coinvariants not torsion: ") + e.what()};
  }

  r.h = scan_criterion(M, cls, inv.mu_G, scan_radius, r.radii);

  std::optional<Outcome> seen;
  for (const CriterionResult* c : {&r.d, &r.e, &r.g, &r.h}) {
    if (c->outcome == Outcome::Inconclusive) continue;
    if (seen && *seen != c->outcome) r.consistent = false;
    seen = c->outcome;
  }
  r.verdict = seen && r.consistent ? *seen : Outcome::Inconclusive;
  return r;
}

namespace {

using detail::APoly;

// v_p(Res(P, ν_{2s,s})) without forming ν: Φ_k(1+T) mod P from (1+T)^{p^{k-1}} mod P.
int resultant_with_nu(const std::vector<mpz_class>& P, int s, const PadicContext& ctx) {
  const std::size_t d = P.size() - 1;
  if (d == 0) return 0;
  const long p = ctx.prime();
  const mpz_class& m = ctx.modulus();
  APoly Pa(d + 1, 1);
  std::copy(P.begin(), P.end(), Pa.v.begin());
  const APoly rinv = detail::monic_rev_inverse(Pa, 2 * d + 1, ctx);
  auto mulmod = [&](const APoly& a, const APoly& b) {
    return detail::divrem_monic(detail::mul(a, b, m), Pa, rinv, ctx).r;
  };
  APoly one(1, 1);
  one.at(0, 0) = 1;
  APoly u(2, 1);  // 1 + T
  u.at(0, 0) = 1;
  u.at(1, 0) = 1;
  u = detail::divrem_monic(u, Pa, rinv, ctx).r;
  for (int k = 1; k < s + 1; ++k) {
    APoly r = u;
    for (long i = 1; i < p; ++i) r = mulmod(r, u);
    u = r;
  }
  APoly Q = one;
  for (int k = s + 1; k <= 2 * s; ++k) {
    APoly sum = one, pw = one;
    for (long i = 1; i < p; ++i) {
      pw = mulmod(pw, u);
      sum = detail::add(sum, pw, m);
    }
    Q = mulmod(Q, sum);
    APoly r = u;
    for (long i = 1; i < p; ++i) r = mulmod(r, u);
    u = r;
  }
  return detail::resultant_valuation(P, Q.v, ctx);
}

}  // namespace

long rank_s(const ElementaryModule1& M, int s) {
  if (s < 1) fail(ErrorCode::BadIndices, "rank_s needs s >= 1");
  const long p = M.ctx->prime();
  const long deg_nu = ipow(p, 2 * s) - ipow(p, s);
  long total = 0;
  for (int m : M.p_parts) total += m * deg_nu;
  for (const auto& f : M.f_parts) {
    const WeierstrassData w = weierstrass(f.series);
    std::vector<mpz_class> P(w.distinguished.coeffs().begin(),
                             w.distinguished.coeffs().begin() + w.lambda + 1);
    // Residues are read as an exact integer polynomial; raise precision until the
    // valuation is visible.
    int W = M.ctx->precision() + w.lambda * s + 8;
    int v = -1;
    for (int attempt = 0; attempt < 4; ++attempt, W *= 2) {
      const ContextPtr ctx = M.ctx->with_precision(W);
      const int r = resultant_with_nu(P, s, *ctx);
      if (r < W) {
        v = r;
        break;
      }
    }
    if (v < 0) {
      fail(ErrorCode::NotCoprime, "characteristic series shares a factor with nu_{2s,s}");
    }
    total += f.mult * (w.mu * deg_nu + v);
  }
  return total;
}

InvariantPair twist_combine(const InvariantPair& e, const InvariantPair& twist) {
  return {e.mu + twist.mu, e.lambda + twist.lambda};
}

RankBound rank_bound(const std::vector<int>& lambdas, bool heegner_case) {
  if (lambdas.size() != 4) fail(ErrorCode::InputError, "rank_bound needs four lambda values");
  int sum = 0;
  for (int l : lambdas) {
    if (l < 0) fail(ErrorCode::InputError, "lambda values must be >= 0");
    sum += l;
  }
  return heegner_case ? RankBound{1, sum - 1} : RankBound{0, sum};
}

std::pair<Sign, Sign> sign_shift(Sign base, int i_p, int i_pbar) {
  if (i_p < 0 || i_pbar < 0) fail(ErrorCode::BadIndices, "indices must be >= 0");
  return {i_p % 2 ? flip(base) : base, i_pbar % 2 ? flip(base) : base};
}

}  // namespace iwalab
