#include <benchmark/benchmark.h>

#include <random>

#include "iwalab/kernels.hpp"
#include "iwalab/module_engine.hpp"
#include "iwalab/series1.hpp"
#include "iwalab/series2.hpp"

using namespace iwalab;

namespace {

kernels::Coeffs random_coeffs(std::size_t n, const mpz_class& m, std::uint64_t seed) {
  gmp_randclass r(gmp_randinit_default);
  r.seed(seed);
  kernels::Coeffs v(n);
  for (auto& x : v) x = r.get_z_range(m);
  return v;
}

mpz_class modulus(long p, int N) {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(N));
  return m;
}

void BM_mul_schoolbook_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_coeffs(n, modulus(5, 8), 1), b = random_coeffs(n, modulus(5, 8), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::mul_schoolbook_serial(a, b, n));
}

void BM_mul_schoolbook_omp(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_coeffs(n, modulus(5, 8), 1), b = random_coeffs(n, modulus(5, 8), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::mul_schoolbook_omp(a, b, n));
}

void BM_mul_karatsuba(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_coeffs(n, modulus(5, 8), 1), b = random_coeffs(n, modulus(5, 8), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::mul_karatsuba(a, b, n));
}

void BM_mul_kronecker(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = random_coeffs(n, modulus(5, 8), 1), b = random_coeffs(n, modulus(5, 8), 2);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::mul_kronecker(a, b, n));
}

void BM_mul_grid_serial(benchmark::State& st) {
  const auto d = static_cast<std::size_t>(st.range(0)) + 1;
  const auto a = random_coeffs(d * d, modulus(5, 8), 3), b = random_coeffs(d * d, modulus(5, 8), 4);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::mul_grid_serial(a, d, b, d, d, d));
}

void BM_mul_grid(benchmark::State& st) {
  const auto d = static_cast<std::size_t>(st.range(0)) + 1;
  const auto a = random_coeffs(d * d, modulus(5, 8), 3), b = random_coeffs(d * d, modulus(5, 8), 4);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::mul_grid(a, d, b, d, d, d));
}

void BM_weierstrass(benchmark::State& st) {
  const int D = static_cast<int>(st.range(0));
  auto ctx = PadicContext::make(7, 8);
  auto c = random_coeffs(D + 1, ctx->modulus(), 5);
  for (int i = 0; i < D / 2; ++i) c[i] *= 7;
  const Series1 f(ctx, D, c);
  for (auto _ : st) benchmark::DoNotOptimize(weierstrass(f));
}

void BM_growth_scan(benchmark::State& st) {
  const int D = static_cast<int>(st.range(0));
  auto ctx = PadicContext::make(7, 8);
  const P1Class cls = P1Class::make(7, 1, 3, 6);
  const Series2 f = upsilon(cls, 0, ctx, D, D).series + Series2::one(ctx, D, D).scaled(7);
  const ElementaryModule2 M{ctx, D, D, {1}, {FPart2{f, 1, false}}, std::nullopt};
  for (auto _ : st) benchmark::DoNotOptimize(growth_scan(M, cls, 0, 3));
}

}  // namespace

BENCHMARK(BM_mul_schoolbook_serial)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_mul_schoolbook_omp)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_mul_karatsuba)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_mul_kronecker)->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(BM_mul_grid_serial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_mul_grid)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_weierstrass)->Arg(48)->Arg(128);
BENCHMARK(BM_growth_scan)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
