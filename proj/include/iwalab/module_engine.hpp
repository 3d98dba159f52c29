#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/errors.hpp"
#include "iwalab/series1.hpp"
#include "iwalab/series2.hpp"

namespace iwalab {

struct FPart2 {
  Series2 series;
  int mult = 1;
  bool irreducible = false;  // carried from input, never checked
};

// ⊕ Λ2/p^{m_i} ⊕ ⊕ Λ2/f_j^{n_j}, all f_j over one context and truncation.
struct ElementaryModule2 {
  ContextPtr ctx;
  int D1 = 0, D2 = 0;
  std::vector<int> p_parts;
  std::vector<FPart2> f_parts;
  std::optional<long> pseudo_null_bound;

  // Throws InputError on mismatched rings, p-divisible f_j or bad multiplicities.
  void validate() const;
};

struct FPart1 {
  Series1 series;
  int mult = 1;
};

struct ElementaryModule1 {
  ContextPtr ctx;
  int D = 0;
  std::vector<int> p_parts;
  std::vector<FPart1> f_parts;

  InvariantPair invariants() const;
};

struct Invariants2 {
  int mu_G = 0;
  Series2 g_bar;  // over F_p
};
Invariants2 invariants_2var(const ElementaryModule2& M);

InvariantPair coinvariant_invariants(const ElementaryModule2& M, const P1Class& cls, int n);
// (μ_n, λ_n) for n = 0..n1 from one pass per summand.
std::vector<InvariantPair> coinvariant_sequence(const ElementaryModule2& M, const P1Class& cls,
                                                int n1);

// One entry per class: the pair, or the error that stopped it.
struct ScanEntry {
  P1Class cls;
  std::optional<InvariantPair> inv;
  std::optional<ErrorCode> error;
  std::string message;
};
std::vector<ScanEntry> scan_classes(const ElementaryModule2& M, const std::vector<P1Class>& classes,
                                    int n, bool parallel = true);

struct GrowthReport {
  int n0 = 0, n1 = 0;
  std::vector<int> mu_seq, lambda_seq;
  long mu_G = 0;  // fitted
  long m1 = 0;
  long c = 0;
  std::optional<long> l;  // empty when λ differences do not stabilize
  bool lambda_stable = false;
  int monsky_m1 = 0;
  bool m1_matches = false;
};
GrowthReport growth_scan(const ElementaryModule2& M, const P1Class& cls, int n0, int n1);

enum class Outcome { Holds, Fails, Inconclusive };
const char* outcome_name(Outcome o);

struct CriterionResult {
  Outcome outcome = Outcome::Inconclusive;
  std::string note;
};

struct LevelCheck {
  int n = 0;
  std::optional<int> mu_n;
  long expected = 0;
};

struct RadiusScan {
  int radius = 0;
  bool admissible = false;
  bool constant = false;
  std::optional<int> max_lambda;  // over lifts other than the center
  int lifts_beyond_radius = 0;    // non-center lifts with λ ≥ p^ρ, excess μ or NotTorsion
};

struct MhgReport {
  CriterionResult d, e, g, h;
  int mu_G = 0;
  std::optional<int> mu_H;
  int mu_correction = 0;
  std::optional<int> v_upsilon;
  std::vector<LevelCheck> levels;
  std::vector<RadiusScan> radii;
  bool consistent = true;
  Outcome verdict = Outcome::Inconclusive;
};
MhgReport mhg_check(const ElementaryModule2& M, const P1Class& cls, int n0, int n1,
                    int scan_radius, int mu_correction = 0);

long rank_s(const ElementaryModule1& M, int s);

InvariantPair twist_combine(const InvariantPair& e, const InvariantPair& twist);

struct RankBound {
  int lower = 0;
  int upper = 0;
};
RankBound rank_bound(const std::vector<int>& lambdas, bool heegner_case);

std::pair<Sign, Sign> sign_shift(Sign base, int i_p, int i_pbar);

}  // namespace iwalab
