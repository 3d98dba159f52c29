#include "iwalab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstring>

namespace iwalab::kernels {

namespace {

// Work (in coefficient products) below which the OpenMP variants stay serial.
constexpr std::size_t kParallelWork = 1 << 14;

bool use_threads(std::size_t work) {
  return work >= kParallelWork && omp_get_max_threads() > 1;
}

// out[0 .. na+nb-1) += a*b
void school_acc(const mpz_class* a, std::size_t na, const mpz_class* b, std::size_t nb,
                mpz_class* out) {
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
}

constexpr std::size_t kKaraBase = 32;

void kara_acc(const mpz_class* a, std::size_t na, const mpz_class* b, std::size_t nb,
              mpz_class* out) {
  if (na == 0 || nb == 0) return;
  if (na < kKaraBase || nb < kKaraBase) {
    school_acc(a, na, b, nb, out);
    return;
  }
  if (na < nb) {
    std::swap(a, b);
    std::swap(na, nb);
  }
  // Unbalanced: cut the long operand into pieces the size of the short one.
  if (na >= 2 * nb) {
    for (std::size_t off = 0; off < na; off += nb) {
      kara_acc(a + off, std::min(nb, na - off), b, nb, out + off);
    }
    return;
  }
  const std::size_t m = (na + 1) / 2;
  const std::size_t na1 = na - m, nb1 = nb > m ? nb - m : 0;
  if (nb1 == 0) {
    kara_acc(a, m, b, nb, out);
    kara_acc(a + m, na1, b, nb, out + m);
    return;
  }
  Coeffs z0(2 * m - 1), z2(na1 + nb1 - 1);
  kara_acc(a, m, b, m, z0.data());
  kara_acc(a + m, na1, b + m, nb1, z2.data());
  Coeffs sa(a, a + m), sb(b, b + m);
  for (std::size_t i = 0; i < na1; ++i) sa[i] += a[m + i];
  for (std::size_t i = 0; i < nb1; ++i) sb[i] += b[m + i];
  Coeffs z1(2 * m - 1);
  kara_acc(sa.data(), m, sb.data(), m, z1.data());
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] -= z0[i];
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] -= z2[i];
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] += z0[i];
  for (std::size_t i = 0; i < z1.size(); ++i) out[m + i] += z1[i];
  for (std::size_t i = 0; i < z2.size(); ++i) out[2 * m + i] += z2[i];
}

std::size_t max_bits(const Coeffs& v) {
  std::size_t bits = 0;
  for (const auto& x : v) bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
  return bits;
}

bool all_nonnegative(const Coeffs& v) {
  return std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return sgn(x) >= 0; });
}

// Packs v into consecutive slots of `slot` limbs each.
std::vector<mp_limb_t> pack(const Coeffs& v, std::size_t slot) {
  std::vector<mp_limb_t> limbs(v.size() * slot, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t n = mpz_size(v[i].get_mpz_t());
    if (n) std::memcpy(&limbs[i * slot], mpz_limbs_read(v[i].get_mpz_t()), n * sizeof(mp_limb_t));
  }
  return limbs;
}

// Full product of two packed vectors; returns the product's limbs (zero-extended).
std::vector<mp_limb_t> packed_product(const Coeffs& a, const Coeffs& b, std::size_t slot) {
  std::vector<mp_limb_t> la = pack(a, slot), lb = pack(b, slot);
  mpz_t za, zb;
  mpz_roinit_n(za, la.data(), static_cast<mp_size_t>(la.size()));
  mpz_roinit_n(zb, lb.data(), static_cast<mp_size_t>(lb.size()));
  mpz_class prod;
  mpz_mul(prod.get_mpz_t(), za, zb);
  std::vector<mp_limb_t> out((a.size() + b.size()) * slot, 0);
  const std::size_t n = mpz_size(prod.get_mpz_t());
  if (n) std::memcpy(out.data(), mpz_limbs_read(prod.get_mpz_t()), n * sizeof(mp_limb_t));
  return out;
}

void unpack_slot(const std::vector<mp_limb_t>& limbs, std::size_t k, std::size_t slot,
                 mpz_class& dst) {
  mp_limb_t* w = mpz_limbs_write(dst.get_mpz_t(), static_cast<mp_size_t>(slot));
  std::memcpy(w, &limbs[k * slot], slot * sizeof(mp_limb_t));
  mpz_limbs_finish(dst.get_mpz_t(), static_cast<mp_size_t>(slot));
}

std::size_t slot_limbs(const Coeffs& a, const Coeffs& b) {
  const std::size_t terms = std::min(a.size(), b.size());
  const std::size_t bits =
      max_bits(a) + max_bits(b) + mpz_sizeinbase(mpz_class(terms).get_mpz_t(), 2) + 1;
  return (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
}

}  // namespace

Coeffs mul_schoolbook_serial(const Coeffs& a, const Coeffs& b, std::size_t out_len) {
  Coeffs out(out_len);
  for (std::size_t i = 0; i < a.size() && i < out_len; ++i) {
    if (a[i] == 0) continue;
    const std::size_t jmax = std::min(b.size(), out_len - i);
    for (std::size_t j = 0; j < jmax; ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return out;
}

Coeffs mul_schoolbook_omp(const Coeffs& a, const Coeffs& b, std::size_t out_len) {
  Coeffs out(out_len);
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) return out;
  const long n = static_cast<long>(std::min(out_len, na + nb - 1));
#pragma omp parallel for schedule(dynamic, 8) if (use_threads(na * nb))
  for (long k = 0; k < n; ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    const std::size_t lo = kk >= nb ? kk - nb + 1 : 0;
    const std::size_t hi = std::min(kk, na - 1);
    for (std::size_t i = lo; i <= hi; ++i) {
      mpz_addmul(out[kk].get_mpz_t(), a[i].get_mpz_t(), b[kk - i].get_mpz_t());
    }
  }
  return out;
}

Coeffs mul_karatsuba(const Coeffs& a, const Coeffs& b, std::size_t out_len) {
  if (a.empty() || b.empty()) return Coeffs(out_len);
  const std::size_t na = std::min(a.size(), out_len), nb = std::min(b.size(), out_len);
  if (na == 0 || nb == 0) return Coeffs(out_len);
  Coeffs full(na + nb - 1);
  kara_acc(a.data(), na, b.data(), nb, full.data());
  full.resize(out_len);
  return full;
}

Coeffs mul_kronecker(const Coeffs& a0, const Coeffs& b0, std::size_t out_len) {
  Coeffs a(a0.begin(), a0.begin() + std::min(a0.size(), out_len));
  Coeffs b(b0.begin(), b0.begin() + std::min(b0.size(), out_len));
  Coeffs out(out_len);
  if (a.empty() || b.empty()) return out;
  if (!all_nonnegative(a) || !all_nonnegative(b)) return mul_karatsuba(a, b, out_len);
  const std::size_t slot = slot_limbs(a, b);
  const std::vector<mp_limb_t> limbs = packed_product(a, b, slot);
  const std::size_t n = std::min(out_len, a.size() + b.size() - 1);
  for (std::size_t k = 0; k < n; ++k) unpack_slot(limbs, k, slot, out[k]);
  return out;
}

Coeffs mul_trunc(const Coeffs& a, const Coeffs& b, std::size_t out_len) {
  if (std::min({a.size(), b.size(), out_len}) < kKaratsubaThreshold) {
    return mul_schoolbook_omp(a, b, out_len);
  }
  return mul_karatsuba(a, b, out_len);
}

void reduce_serial(Coeffs& v, const mpz_class& m) {
  for (auto& x : v) {
    if (x < 0 || x >= m) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  }
}

void reduce_omp(Coeffs& v, const mpz_class& m) {
  const long n = static_cast<long>(v.size());
#pragma omp parallel for schedule(static) if (use_threads(v.size() * 8))
  for (long i = 0; i < n; ++i) {
    mpz_class& x = v[static_cast<std::size_t>(i)];
    if (x < 0 || x >= m) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  }
}

void reduce(Coeffs& v, const mpz_class& m) { reduce_omp(v, m); }

Coeffs mul_grid_serial(const Coeffs& a, std::size_t rows_a, const Coeffs& b,
                       std::size_t rows_b, std::size_t cols, std::size_t out_rows,
                       std::size_t cycle) {
  Coeffs out(out_rows * cols);
  for (std::size_t r1 = 0; r1 < rows_a; ++r1) {
    for (std::size_t r2 = 0; r2 < rows_b; ++r2) {
      std::size_t r = r1 + r2;
      if (cycle) r %= cycle;
      if (r >= out_rows) continue;
      for (std::size_t c1 = 0; c1 < cols; ++c1) {
        const mpz_class& x = a[r1 * cols + c1];
        if (x == 0) continue;
        for (std::size_t c2 = 0; c1 + c2 < cols; ++c2) {
          mpz_addmul(out[r * cols + c1 + c2].get_mpz_t(), x.get_mpz_t(),
                     b[r2 * cols + c2].get_mpz_t());
        }
      }
    }
  }
  return out;
}

Coeffs mul_grid(const Coeffs& a, std::size_t rows_a, const Coeffs& b, std::size_t rows_b,
                std::size_t cols, std::size_t out_rows, std::size_t cycle) {
  if (cols == 0 || rows_a == 0 || rows_b == 0) return Coeffs(out_rows * cols);
  if (!all_nonnegative(a) || !all_nonnegative(b)) {
    return mul_grid_serial(a, rows_a, b, rows_b, cols, out_rows, cycle);
  }
  // Inner stride 2*cols-1 keeps partial inner products from overlapping.
  const std::size_t stride = 2 * cols - 1;
  const std::size_t keep_a = cycle ? rows_a : std::min(rows_a, out_rows);
  const std::size_t keep_b = cycle ? rows_b : std::min(rows_b, out_rows);
  Coeffs pa(keep_a * stride), pb(keep_b * stride);
  for (std::size_t r = 0; r < keep_a; ++r)
    for (std::size_t c = 0; c < cols; ++c) pa[r * stride + c] = a[r * cols + c];
  for (std::size_t r = 0; r < keep_b; ++r)
    for (std::size_t c = 0; c < cols; ++c) pb[r * stride + c] = b[r * cols + c];
  const std::size_t slot = slot_limbs(pa, pb) + (cycle ? 1 : 0);
  const std::vector<mp_limb_t> limbs = packed_product(pa, pb, slot);
  Coeffs out(out_rows * cols);
  const std::size_t prod_rows = keep_a + keep_b - 1;
  mpz_class t;
  for (std::size_t r = 0; r < prod_rows; ++r) {
    const std::size_t dst = cycle ? r % cycle : r;
    if (dst >= out_rows) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      unpack_slot(limbs, r * stride + c, slot, t);
      out[dst * cols + c] += t;
    }
  }
  return out;
}

FpCoeffs mul_fp(const FpCoeffs& a, const FpCoeffs& b, std::size_t out_len, std::uint32_t p) {
  FpCoeffs out(out_len, 0);
  for (std::size_t k = 0; k < out_len; ++k) {
    unsigned __int128 acc = 0;
    const std::size_t hi = std::min(k, a.empty() ? 0 : a.size() - 1);
    for (std::size_t i = 0; i <= hi && !a.empty(); ++i) {
      if (k - i < b.size()) acc += static_cast<std::uint64_t>(a[i]) * b[k - i];
    }
    out[k] = static_cast<std::uint32_t>(acc % p);
  }
  return out;
}

FpCoeffs mul_fp_grid(const FpCoeffs& a, const FpCoeffs& b, std::size_t rows, std::size_t cols,
                     std::uint32_t p) {
  std::vector<std::uint64_t> acc(rows * cols, 0);
  const std::uint64_t limit = ~std::uint64_t{0} - static_cast<std::uint64_t>(p - 1) * (p - 1);
  for (std::size_t r1 = 0; r1 < rows; ++r1) {
    for (std::size_t c1 = 0; c1 < cols; ++c1) {
      const std::uint64_t x = a[r1 * cols + c1];
      if (!x) continue;
      for (std::size_t r2 = 0; r1 + r2 < rows; ++r2) {
        std::uint64_t* dst = &acc[(r1 + r2) * cols + c1];
        const std::uint32_t* src = &b[r2 * cols];
        for (std::size_t c2 = 0; c1 + c2 < cols; ++c2) {
          if (!src[c2]) continue;
          dst[c2] += x * src[c2];
          if (dst[c2] >= limit) dst[c2] %= p;
        }
      }
    }
  }
  FpCoeffs out(rows * cols);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<std::uint32_t>(acc[i] % p);
  return out;
}

}  // namespace iwalab::kernels
