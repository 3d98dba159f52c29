#pragma once

#include <gmpxx.h>

#include <vector>

#include "iwalab/padic.hpp"
#include "iwalab/series1.hpp"

namespace iwalab {

// Truncated element of Z_p[[T1,T2]]: full (D1+1)×(D2+1) grid, row i holds the T1^i coefficients.
class Series2 {
 public:
  Series2(ContextPtr ctx, int D1, int D2);
  // grid[i*(D2+1) + j] is the coefficient of T1^i T2^j.
  Series2(ContextPtr ctx, int D1, int D2, std::vector<mpz_class> grid);

  static Series2 monomial(ContextPtr ctx, int D1, int D2, int i, int j, const mpz_class& c = 1);
  static Series2 one(ContextPtr ctx, int D1, int D2) { return monomial(std::move(ctx), D1, D2, 0, 0); }
  // A series in T1 alone (resp. T2 alone).
  static Series2 from_t1(const Series1& s, int D2);
  static Series2 from_t2(const Series1& s, int D1);

  const ContextPtr& context() const { return ctx_; }
  long prime() const { return ctx_->prime(); }
  int precision() const { return ctx_->precision(); }
  int d1() const { return D1_; }
  int d2() const { return D2_; }
  const std::vector<mpz_class>& grid() const { return g_; }
  const mpz_class& at(int i, int j) const { return g_[static_cast<std::size_t>(i) * (D2_ + 1) + j]; }
  void set(int i, int j, const mpz_class& v);

  bool is_zero() const;
  // Minimum valuation over the grid (N when zero at precision).
  int content_val() const;
  // Coefficient of T2^j as a series in T1.
  Series1 t2_coeff(int j) const;

  Series2 operator+(const Series2& o) const;
  Series2 operator-(const Series2& o) const;
  Series2 operator*(const Series2& o) const;
  Series2 operator-() const;
  Series2 scaled(const mpz_class& c) const;
  bool operator==(const Series2& o) const {
    return D1_ == o.D1_ && D2_ == o.D2_ && g_ == o.g_;
  }

  // Exchange T1 and T2 (and the truncations).
  Series2 swapped() const;
  Series2 with_context(ContextPtr ctx) const;
  Series2 with_truncation(int D1, int D2) const;

 private:
  ContextPtr ctx_;
  int D1_, D2_;
  std::vector<mpz_class> g_;
};

// Point of P^1(Z_p) at class precision M, stored normalized: a = 1 when p∤a, else b = 1.
// The stored integers are treated as exact p-adic integers.
struct P1Class {
  long p = 0;
  mpz_class a, b;
  int M = 0;

  static P1Class make(long p, const mpz_class& a, const mpz_class& b, int M);
  // Same class read at a lower precision.
  P1Class at_precision(int M2) const;
  // True when T1 is the distinguished variable (p | b).
  bool t1_distinguished() const { return mpz_divisible_ui_p(b.get_mpz_t(), p) != 0; }
  bool operator==(const P1Class& o) const {
    return p == o.p && a == o.a && b == o.b && M == o.M;
  }
};

// A class rescaled so its distinguished coordinate is 1: after swapping the variables when
// `swapped`, the class is (slope, 1) with slope known mod p^K.
struct Frame {
  bool swapped = false;
  mpz_class slope;
  int K = 0;
};
Frame frame_of(const P1Class& cls, const PadicContext& ctx, int D);

struct UpsilonElement {
  P1Class cls;
  int n = 0;
  Series2 series;
};

// (1+T1)^{p^n a}(1+T2)^{p^n b} - 1 for the normalized (a, b).
UpsilonElement upsilon(const P1Class& cls, int n, const ContextPtr& ctx, int D1, int D2);
// The associate of Υ_n built from the frame representative; a polynomial of degree exactly p^n
// in the distinguished variable.
Series2 upsilon_frame(const P1Class& cls, int n, const ContextPtr& ctx, int D1, int D2);

struct WeierstrassT2 {
  int mu = 0;
  int degree = 0;
  Series2 distinguished;  // monic of T2-degree `degree`
  Series2 unit;
};
WeierstrassT2 weierstrass_T2(const Series2& f);

// Largest k with Ῡ^k | ḡ in F_p[[T1,T2]] at truncation.
int monsky_valuation(const Series2& g, const P1Class& cls);
bool lines_coprime(const P1Class& c1, const P1Class& c2);
int intersection_depth(const P1Class& c1, const P1Class& c2);

}  // namespace iwalab
