#include "doctest.h"
#include "gen.hpp"
#include "iwalab/kernels.hpp"

using namespace iwalab;
using namespace iwalab::testing;
namespace k = iwalab::kernels;

namespace {

k::Coeffs random_coeffs(Rng& rng, std::size_t n, bool allow_negative) {
  k::Coeffs v(n);
  for (auto& x : v) {
    x = uniform(rng, allow_negative ? -1000000 : 0, 1000000);
    x *= uniform(rng, 1, 1L << 40);
  }
  return v;
}

}  // namespace

TEST_CASE("product kernels agree with the serial schoolbook reference") {
  Rng rng(1);
  const std::size_t sizes[][3] = {{1, 1, 1},    {5, 3, 7},     {40, 40, 79}, {64, 64, 127},
                                  {100, 37, 136}, {130, 129, 258}, {200, 64, 100}, {97, 250, 300}};
  for (const auto& s : sizes) {
    for (bool neg : {false, true}) {
      k::Coeffs a = random_coeffs(rng, s[0], neg), b = random_coeffs(rng, s[1], neg);
      const k::Coeffs ref = k::mul_schoolbook_serial(a, b, s[2]);
      CHECK(k::mul_schoolbook_omp(a, b, s[2]) == ref);
      CHECK(k::mul_karatsuba(a, b, s[2]) == ref);
      CHECK(k::mul_kronecker(a, b, s[2]) == ref);
      CHECK(k::mul_trunc(a, b, s[2]) == ref);
    }
  }
}

TEST_CASE("grid products agree with the serial reference") {
  Rng rng(2);
  for (std::size_t cycle : {0UL, 5UL, 7UL}) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t ra = static_cast<std::size_t>(uniform(rng, 1, 9));
      const std::size_t rb = static_cast<std::size_t>(uniform(rng, 1, 9));
      const std::size_t cols = static_cast<std::size_t>(uniform(rng, 1, 12));
      const std::size_t out_rows = cycle ? cycle : static_cast<std::size_t>(uniform(rng, 1, ra + rb));
      k::Coeffs a = random_coeffs(rng, ra * cols, false), b = random_coeffs(rng, rb * cols, false);
      CHECK(k::mul_grid(a, ra, b, rb, cols, out_rows, cycle) ==
            k::mul_grid_serial(a, ra, b, rb, cols, out_rows, cycle));
    }
  }
}

TEST_CASE("reduction kernels") {
  Rng rng(3);
  k::Coeffs v = random_coeffs(rng, 300, true), w = v;
  const mpz_class m("152587890625");
  k::reduce_serial(v, m);
  k::reduce_omp(w, m);
  CHECK(v == w);
  for (const auto& x : v) CHECK((x >= 0 && x < m));
}

TEST_CASE("F_p kernels match integer products reduced mod p") {
  Rng rng(4);
  const std::uint32_t p = 7;
  k::FpCoeffs a(30), b(25);
  for (auto& x : a) x = static_cast<std::uint32_t>(uniform(rng, 0, p - 1));
  for (auto& x : b) x = static_cast<std::uint32_t>(uniform(rng, 0, p - 1));
  k::Coeffs az(a.begin(), a.end()), bz(b.begin(), b.end());
  k::Coeffs ref = k::mul_schoolbook_serial(az, bz, 40);
  k::FpCoeffs got = k::mul_fp(a, b, 40, p);
  for (std::size_t i = 0; i < 40; ++i) CHECK(got[i] == mpz_class(ref[i] % p).get_ui());

  const std::size_t rows = 6, cols = 5;
  k::FpCoeffs ga(rows * cols), gb(rows * cols);
  for (auto& x : ga) x = static_cast<std::uint32_t>(uniform(rng, 0, p - 1));
  for (auto& x : gb) x = static_cast<std::uint32_t>(uniform(rng, 0, p - 1));
  k::Coeffs gaz(ga.begin(), ga.end()), gbz(gb.begin(), gb.end());
  k::Coeffs gref = k::mul_grid_serial(gaz, rows, gbz, rows, cols, rows);
  k::FpCoeffs ggot = k::mul_fp_grid(ga, gb, rows, cols, p);
  for (std::size_t i = 0; i < rows * cols; ++i) CHECK(ggot[i] == mpz_class(gref[i] % p).get_ui());
}
