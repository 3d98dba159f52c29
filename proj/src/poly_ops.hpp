#pragma once

// Internal polynomial toolkit over A = Z/p^N[T1]/(T1^cols): polynomials in an outer variable x
// with A coefficients, stored row-major (row i = coefficient of x^i). cols == 1 gives plain
// polynomials over Z/p^N.

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "iwalab/padic.hpp"

namespace iwalab::detail {

using Coeffs = std::vector<mpz_class>;

struct APoly {
  std::size_t rows = 0;
  std::size_t cols = 1;
  Coeffs v;

  APoly() = default;
  APoly(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c) {}

  mpz_class& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  const mpz_class& at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
  bool is_zero() const;
  // Index of the last nonzero row, -1 for zero.
  long degree() const;
  void resize_rows(std::size_t r) {
    rows = r;
    v.resize(r * cols);
  }
};

APoly add(const APoly& a, const APoly& b, const mpz_class& m);
APoly sub(const APoly& a, const APoly& b, const mpz_class& m);
APoly mul(const APoly& a, const APoly& b, const mpz_class& m);
APoly mul_trunc(const APoly& a, const APoly& b, std::size_t out_rows, const mpz_class& m);

// Product of two A-elements (length cols).
Coeffs a_mul(const Coeffs& a, const Coeffs& b, const mpz_class& m);
// Inverse of an A-element whose constant term is a unit.
Coeffs a_inverse(const Coeffs& a, const PadicContext& ctx);

// Inverse of a power series in x (constant row a unit in A) modulo x^n.
APoly inv_series(const APoly& a, std::size_t n, const PadicContext& ctx);

// a = q·P + r with P monic of degree d (row d equals 1 in A); r has d rows.
struct DivRem {
  APoly q;
  APoly r;
};
DivRem divrem_monic(const APoly& a, const APoly& P, const APoly& rev_inv, const PadicContext& ctx);
// Precomputation for divrem_monic: inverse of reversed P modulo x^n.
APoly monic_rev_inverse(const APoly& P, std::size_t n, const PadicContext& ctx);

// Factorization f = P·U with P monic of degree d in x, lower rows in the maximal ideal
// (p, T1), and U with unit constant row. f's row reduction mod (p,T1) must first be nonzero at row d.
struct Prepared {
  APoly P;
  APoly U;
};
Prepared hensel_prepare(const APoly& f, std::size_t d, const PadicContext& ctx);

// v_p(det) of a square matrix over Z/p^N by elimination with minimum-valuation pivots.
// Returns N when the determinant vanishes at precision.
int det_valuation(std::vector<Coeffs> rows, const PadicContext& ctx);

// v_p(Res(P, Q)) for P monic, as v_p(det) of multiplication by Q on Z/p^N[x]/(P).
// Returns N when it vanishes at precision.
int resultant_valuation(const std::vector<mpz_class>& P, const std::vector<mpz_class>& Q,
                        const PadicContext& ctx);

}  // namespace iwalab::detail
