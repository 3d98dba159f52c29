#pragma once

// JSON (de)serialization. nlohmann::json keeps object keys sorted, so dump() is canonical.

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iwalab/arithmetic_data.hpp"
#include "iwalab/module_engine.hpp"
#include "iwalab/series1.hpp"
#include "iwalab/series2.hpp"
#include "iwalab/specialize.hpp"

namespace iwalab {

using Json = nlohmann::json;

// Defaults for fields a document may omit: {p, N, D1, D2} of its header.
struct Header {
  std::optional<long> p;
  std::optional<int> N;
  int D1 = 64;
  int D2 = 64;
  int M = 6;
};

Json to_json(const Series1& f);
Json to_json(const Series2& f);
Json to_json(const P1Class& c);
Json to_json(const InvariantPair& x);
Json to_json(const WeierstrassData& w);
Json to_json(const ElementaryModule1& M);
Json to_json(const ElementaryModule2& M);
Json to_json(const GrowthReport& g);
Json to_json(const MhgReport& r);
Json to_json(const ScanEntry& e);
Json to_json(const CurveRecord& c);
Json to_json(const FieldRecord& f);
Json to_json(const LfunctionRecord& l);
Json to_json(const Verdict& v);

// Series1: {"p","N","D","coeffs":[decimal strings]} or sparse {"terms":[[i,"c"],...]}.
Series1 series1_from_json(const Json& j, const Header& h);
// Series2: {"p","N","D1","D2","grid":[[...],...]} row i = T1^i, or sparse
// {"terms":[[i,j,"c"],...]}, or {"upsilon":{"a","b","n"}}.
Series2 series2_from_json(const Json& j, const Header& h);
// {"a","b","M"}; M falls back to h.M.
P1Class class_from_json(const Json& j, long p, const Header& h);
// "a,b" as on the command line.
P1Class class_from_string(const std::string& s, long p, int M);

ElementaryModule1 module1_from_json(const Json& j, const Header& h);
ElementaryModule2 module2_from_json(const Json& j, const Header& h);
// True when the module document describes a one-variable module ("variables": 1).
bool is_one_variable(const Json& j);

CurveRecord curve_from_json(const Json& j);
FieldRecord field_from_json(const Json& j);
LfunctionRecord lfunction_from_json(const Json& j);

// A checker invocation: records plus the checker and the signs to evaluate.
struct Bundle {
  std::string name;
  std::string checker;
  long p = 0;
  std::vector<Sign> signs;  // empty for sign-free checkers
  CurveRecord curve;
  FieldRecord field;
  LfunctionRecord lfunction;
};
Bundle bundle_from_json(const Json& j);
// Verdicts for every sign of the bundle, in order.
std::vector<Verdict> run_bundle(const Bundle& b);
Json bundle_report(const Bundle& b, const std::vector<Verdict>& verdicts);

// CSV rows (one per bad prime) grouped into bundles by (label, p, disc), in first-seen order.
// Required columns: label,p,disc,h_K,q,reduction,kodaira,c_q,splitting; optional: conductor,
// checker, signs, c_v, f_q, galois_image_full, heegner_indivisible, supersingular,
// mu_plus_E, mu_minus_E, lambda_plus_E, lambda_minus_E and the same with _twist.
std::vector<Bundle> bundles_from_csv(std::istream& in);

Json read_json_file(const std::string& path);

}  // namespace iwalab
