#pragma once

// Shared plumbing for the coinvariant computations: a two-variable series rewritten in the
// frame of a class, as a polynomial in Y = (1+T2)/u with u = (1+T1)^{-slope}.

#include <vector>

#include "iwalab/series2.hpp"
#include "poly_ops.hpp"

namespace iwalab::detail {

struct FramedColumns {
  Frame frame;
  int content = 0;  // p-adic content of f, factored out of w
  int D1 = 0;       // truncation of the coefficient line
  int D2 = 0;       // degree bound in the distinguished variable
  // w[j] (length D1+1): coefficient of Y^j in f(T1, uY - 1)/p^content.
  std::vector<Coeffs> w;
};

FramedColumns framed_columns(const Series2& f, const P1Class& cls);

}  // namespace iwalab::detail
