// Benchmark: chunked OpenMP Ryser kernel vs the serial reference, on random
// integer and complex matrices.  Prints one line per (domain, N, engine) with
// the wall time and the value digest so a mismatch is immediately visible.

#include "permred/fock.hpp"
#include "permred/numerics.hpp"
#include "permred/permanent.hpp"

#include <chrono>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace permred;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix<BigInt> random_int_matrix(std::size_t n, std::mt19937_64& rng) {
  Matrix<BigInt> a(n);
  std::uniform_int_distribution<long> dist(-1000000, 1000000);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = BigInt(dist(rng));
  return a;
}

// Exact domains must agree exactly; the complex engines may differ by the
// chunked combine's rounding, within the library's own tolerance.
bool same(const BigInt& a, const BigInt& b) { return a == b; }
bool same(const HPComplex& a, const HPComplex& b) {
  return max_abs_diff(a, b) <= HPReal::pow2(-kDefaultPrec + 40, 64);
}

template <class D, class F>
void bench_one(const std::string& domain, std::size_t n, const Matrix<D>& a, F render) {
  auto t0 = std::chrono::steady_clock::now();
  D serial = per_ryser_serial(a);
  double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  D parallel = per_ryser(a);
  double t_parallel = seconds_since(t0);

  std::cout << domain << " N=" << n << " serial   " << t_serial << " s  -> " << render(serial)
            << "\n";
  std::cout << domain << " N=" << n << " parallel " << t_parallel << " s  -> "
            << render(parallel) << "  (speedup " << t_serial / t_parallel << "x)\n";
  if (!same(serial, parallel)) std::cout << domain << " N=" << n << " MISMATCH\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n_max = 22;
  if (argc > 1) n_max = std::stoul(argv[1]);
#ifdef _OPENMP
  std::cout << "threads " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads 1 (built without OpenMP)\n";
#endif

  std::mt19937_64 rng(42);
  for (std::size_t n = 14; n <= n_max; n += 4) {
    Matrix<BigInt> a = random_int_matrix(n, rng);
    bench_one("bigint ", n, a, [](const BigInt& v) { return v.get_str(); });
  }
  for (std::size_t n = 14; n <= n_max; n += 4) {
    Matrix<HPComplex> u = random_unitary(static_cast<int>(n), rng, kDefaultPrec);
    bench_one("complex", n, u, [](const HPComplex& v) { return v.str(8); });
  }
  return 0;
}
