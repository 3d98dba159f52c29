#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/series1.hpp"

namespace iwalab {

enum class Reduction { Good, SplitMult, NonsplitMult, Additive };
enum class Splitting { Split, Inert, Ramified };
enum class Status { Pass, Fail, Unknown };

const char* reduction_name(Reduction r);
const char* splitting_name(Splitting s);
const char* status_name(Status s);
const char* sign_name(Sign s);
Reduction parse_reduction(const std::string& s);
Splitting parse_splitting(const std::string& s);
Sign parse_sign(const std::string& s);

// Kodaira symbol: I_n (n >= 0), I_n^*, II, III, IV, II^*, III^*, IV^*.
struct Kodaira {
  enum class Family { I, IStar, II, III, IV, IIStar, IIIStar, IVStar };
  Family family = Family::I;
  int n = 0;

  // Accepts "I14", "I0*", "I*2", "III*", ... Throws MalformedKodaira.
  static Kodaira parse(const std::string& s);
  std::string str() const;
};

struct BadPrime {
  long q = 0;
  Reduction reduction = Reduction::Good;
  std::string kodaira;
  long tamagawa = 1;               // c_q over Q
  std::vector<long> tamagawa_K;    // c_v for the primes v | q of K; empty when unknown
  std::optional<int> conductor_exponent;
  std::optional<bool> ramified_in_torsion_field;  // q ramified in Q(E[p])/Q

  // c_v for the primes of K above q, falling back to c_q.
  std::vector<long> local_tamagawa(Splitting s) const;
};

struct CurveRecord {
  std::string label;
  long conductor = 0;
  std::vector<BadPrime> bad_primes;
  std::optional<bool> galois_image_full;
  std::optional<bool> heegner_indivisible_at_p_place;
  std::optional<bool> supersingular_at_p;
  std::string provenance;

  // InputError on inconsistent conductor data or Tamagawa numbers < 1.
  void validate() const;
};

struct FieldRecord {
  long disc = 0;
  long class_number = 0;
  std::optional<bool> p_splits;
  std::map<long, Splitting> splitting;
  std::string provenance;

  void validate() const;
};

struct SignedInvariants {
  std::optional<int> mu_plus, mu_minus, lambda_plus, lambda_minus;

  std::optional<int> mu(Sign s) const { return s == Sign::Plus ? mu_plus : mu_minus; }
  std::optional<int> lambda(Sign s) const { return s == Sign::Plus ? lambda_plus : lambda_minus; }
};

struct LfunctionRecord {
  SignedInvariants curve;
  SignedInvariants twist;
  std::string provenance;

  void validate() const;
};

struct HypothesisResult {
  std::string name;
  std::string citation;
  Status status = Status::Unknown;
  std::string detail;
};

struct Conclusion {
  std::string statement;
  std::string citation;
  std::vector<std::string> consumes;
};

struct Verdict {
  std::string checker;
  long p = 0;
  std::optional<Sign> sign;
  std::vector<HypothesisResult> hypotheses;
  std::vector<Conclusion> conclusions;
  std::vector<std::string> notes;
  std::string inputs_digest;

  bool all_pass() const;
};

struct KidaResult {
  bool a = false;              // Kodaira I_n with p | n
  std::optional<bool> b;       // q unramified in Q(E[p]); only when supplied
  bool c = false;              // p | c_v
  bool consistent = false;     // a <=> c (and b when present)
  bool rational_fallback = false;
};
// Requires q unramified in K; the caller passes the splitting type.
KidaResult kida_check(const BadPrime& entry, Splitting splitting, long p);

// μ of the dual local term at a prime above entry.q; empty when the case analysis is silent.
std::optional<int> omega_mu_contribution(const BadPrime& entry, bool splits_completely,
                                         const FieldRecord& field, long p);

// Hypothesis checkers. Each gates its conclusions on every hypothesis passing.
Verdict check_anticyclotomic_failure(const CurveRecord& curve, const FieldRecord& field,
                                     const LfunctionRecord& lfun, long p, Sign sign);
Verdict check_split_pair_failure(const CurveRecord& curve, const FieldRecord& field,
                                 const LfunctionRecord& lfun, long p, Sign sign);
Verdict check_free_structure(const CurveRecord& curve, const FieldRecord& field, long p);
Verdict check_rank_bound(const CurveRecord& curve, const FieldRecord& field,
                         const LfunctionRecord& lfun, long p);

// Checker names accepted by run_checker and the CLI.
const std::vector<std::string>& checker_names();
bool checker_uses_sign(const std::string& checker);
Verdict run_checker(const std::string& checker, const CurveRecord& curve, const FieldRecord& field,
                    const LfunctionRecord& lfun, long p, std::optional<Sign> sign);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);

}  // namespace iwalab
