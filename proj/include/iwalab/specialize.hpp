#pragma once

#include <vector>

#include "iwalab/series1.hpp"
#include "iwalab/series2.hpp"

namespace iwalab {

// Norm of f from Λ2/(Υ_n) down to the coefficient line Z_p[[T1]] (frame coordinates).
// The characteristic series is p^p_exponent · series; the p-power content of f is factored out
// analytically so `series` stays visible at precision N.
struct Specialization {
  Series1 series;
  long p_exponent = 0;
  int n = 0;

  // (p_exponent + μ(series), λ(series)). Throws NotTorsion when series vanishes at precision.
  InvariantPair raw() const;
};

Specialization specialize(const Series2& f, const P1Class& cls, int n);

// Direct substitution T2 ↦ h(T1) in frame coordinates (n = 0 path).
Series1 substitute(const Series2& f, const P1Class& cls);

// Invariants of the coinvariant norm at level n computed one cyclotomic layer at a time:
// μ_n = Σ_k v_π(G_k), λ_n = Σ_k φ(p^k)·λ(G_k), G_k = f(T1, ζ_{p^k}·u - 1).
struct LevelValuation {
  int k = 0;
  int mu_pi = 0;      // min v_π over the T1-coefficients of G_k
  int lambda_pi = 0;  // first T1-index attaining it
};
std::vector<LevelValuation> level_valuations(const Series2& f, const P1Class& cls, int n);
InvariantPair coinvariant_pair(const Series2& f, const P1Class& cls, int n);

}  // namespace iwalab
