#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <vector>

// Coefficient-array kernels under every ring in the library. Inputs are plain coefficient
// vectors (lowest degree first); outputs are unreduced unless stated otherwise.
//
// Each OpenMP kernel has a serial reference (`*_serial`) kept for tests and benchmarks.
namespace iwalab::kernels {

using Coeffs = std::vector<mpz_class>;

// Below this length the dispatcher uses schoolbook multiplication.
inline constexpr std::size_t kKaratsubaThreshold = 64;

// out[k] = sum_{i+j=k} a[i]·b[j] for k < out_len.
Coeffs mul_schoolbook_serial(const Coeffs& a, const Coeffs& b, std::size_t out_len);
Coeffs mul_schoolbook_omp(const Coeffs& a, const Coeffs& b, std::size_t out_len);
Coeffs mul_karatsuba(const Coeffs& a, const Coeffs& b, std::size_t out_len);
// Kronecker substitution into one GMP product. Requires nonnegative entries.
Coeffs mul_kronecker(const Coeffs& a, const Coeffs& b, std::size_t out_len);
// Schoolbook below kKaratsubaThreshold, Karatsuba above.
Coeffs mul_trunc(const Coeffs& a, const Coeffs& b, std::size_t out_len);

void reduce_serial(Coeffs& v, const mpz_class& m);
void reduce_omp(Coeffs& v, const mpz_class& m);
// Reduces into [0, m).
void reduce(Coeffs& v, const mpz_class& m);

// Product of two row-major grids (rows index the outer variable, `cols` the inner one).
// The inner variable is truncated at `cols`. With cycle == 0 the outer variable is truncated
// at out_rows; otherwise rows are folded mod `cycle` (group ring of a cyclic group) and
// out_rows must equal cycle. Requires nonnegative entries.
Coeffs mul_grid(const Coeffs& a, std::size_t rows_a, const Coeffs& b, std::size_t rows_b,
                std::size_t cols, std::size_t out_rows, std::size_t cycle = 0);
Coeffs mul_grid_serial(const Coeffs& a, std::size_t rows_a, const Coeffs& b,
                       std::size_t rows_b, std::size_t cols, std::size_t out_rows,
                       std::size_t cycle = 0);

using FpCoeffs = std::vector<std::uint32_t>;

// Truncated product over F_p.
FpCoeffs mul_fp(const FpCoeffs& a, const FpCoeffs& b, std::size_t out_len, std::uint32_t p);
// Truncated grid product over F_p (same layout as mul_grid, truncating both variables).
FpCoeffs mul_fp_grid(const FpCoeffs& a, const FpCoeffs& b, std::size_t rows, std::size_t cols,
                     std::uint32_t p);

}  // namespace iwalab::kernels
