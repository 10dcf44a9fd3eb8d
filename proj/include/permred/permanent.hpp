#pragma once

// Square matrices over the pipeline's scalar domains, plus permanent engines:
//   per_naive  - permutation-sum oracle straight from the definition (N <= 9)
//   per_ryser  - Ryser inclusion-exclusion with Gray-code row-sum updates,
//                chunked for OpenMP (N <= 32)
//   per_ryser_serial - single-loop reference implementation of the same
//                algorithm, kept for testing and benchmarking the kernel
//
// All engines are generic over the entry domain D (BigInt, BigRational,
// Dyadic, HPComplex).  Exact domains give exact results; for HPComplex the
// chunked engine fixes the chunk layout as a function of N alone and combines
// partial sums in ascending chunk order, so results are bit-identical for
// every thread count.

#include "permred/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace permred {

template <class D>
class Matrix {
 public:
  Matrix() : n_(0) {}
  explicit Matrix(std::size_t n) : n_(n), a_(n * n) {}
  Matrix(std::size_t n, const D& fill) : n_(n), a_(n * n, fill) {}

  std::size_t dim() const { return n_; }
  D& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const D& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<D> a_;
};

// Multiplicative identity per domain (the N = 0 permanent).
template <class D>
D domain_one();
template <>
inline BigInt domain_one<BigInt>() { return BigInt(1); }
template <>
inline BigRational domain_one<BigRational>() { return BigRational(1); }
template <>
inline Dyadic domain_one<Dyadic>() { return Dyadic(1); }
template <>
inline HPComplex domain_one<HPComplex>() { return HPComplex::one(kDefaultPrec); }

namespace detail {

inline std::uint64_t gray(std::uint64_t g) { return g ^ (g >> 1); }

// Chunk count is a pure function of N so that the partial-sum layout (and
// therefore every floating-point result) is independent of thread count.
inline std::size_t ryser_chunks(std::size_t n) { return n <= 12 ? 1 : 64; }

// Sum of A(i, j) over j in subset, for each row i.
template <class D>
std::vector<D> subset_row_sums(const Matrix<D>& a, std::uint64_t subset) {
  std::size_t n = a.dim();
  std::vector<D> sums(n);  // value-initialized: the domain zero
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (subset >> j & 1) sums[i] += a(i, j);
  return sums;
}

template <class D>
D row_sum_product(const std::vector<D>& sums) {
  D prod = sums[0];
  for (std::size_t i = 1; i < sums.size(); ++i) prod *= sums[i];
  return prod;
}

// Ryser partial sum over the Gray-code walk g in [g_lo, g_hi):
// sum over those subsets S = gray(g) of (-1)^|S| * prod_i sum_{j in S} a_ij.
template <class D>
D ryser_range(const Matrix<D>& a, std::uint64_t g_lo, std::uint64_t g_hi) {
  std::size_t n = a.dim();
  std::uint64_t subset = gray(g_lo);
  std::vector<D> sums = subset_row_sums(a, subset);
  bool odd = std::popcount(subset) & 1;

  D acc{};
  D term = row_sum_product(sums);
  if (odd) {
    acc = D{} - term;
  } else {
    acc = std::move(term);
  }
  for (std::uint64_t g = g_lo + 1; g < g_hi; ++g) {
    unsigned j = std::countr_zero(g);  // bit toggled between gray(g-1), gray(g)
    subset ^= std::uint64_t(1) << j;
    bool added = subset >> j & 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (added) {
        sums[i] += a(i, j);
      } else {
        sums[i] -= a(i, j);
      }
    }
    odd = !odd;
    term = row_sum_product(sums);
    if (odd) {
      acc -= term;
    } else {
      acc += term;
    }
  }
  return acc;
}

}  // namespace detail

// Permanent by its definition: sum over all N! permutations.  The oracle the
// other engines are tested against; deliberately has no cleverness to share
// with them.
template <class D>
D per_naive(const Matrix<D>& a) {
  std::size_t n = a.dim();
  if (n > 9) {
    throw BudgetError("per_naive: N = " + std::to_string(n) +
                      " exceeds the N <= 9 oracle bound (N! permutations)");
  }
  if (n == 0) return domain_one<D>();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  D total{};
  bool first_term = true;
  do {
    D prod = a(0, perm[0]);
    for (std::size_t i = 1; i < n; ++i) prod *= a(i, perm[i]);
    if (first_term) {
      total = std::move(prod);
      first_term = false;
    } else {
      total += prod;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Ryser's formula, single serial Gray-code walk over all nonempty subsets:
//   Per(A) = (-1)^N * sum_{S != 0} (-1)^|S| prod_i sum_{j in S} a_ij.
template <class D>
D per_ryser_serial(const Matrix<D>& a) {
  std::size_t n = a.dim();
  if (n > 32) {
    throw BudgetError("per_ryser_serial: N = " + std::to_string(n) +
                      " exceeds the N <= 32 bound (2^N subsets)");
  }
  if (n == 0) return domain_one<D>();
  std::uint64_t limit = (std::uint64_t(1) << n);
  D acc = detail::ryser_range(a, 1, limit);
  if (n & 1) acc = D{} - acc;
  return acc;
}

// Same formula, with the subset range [1, 2^N) split into ryser_chunks(N)
// contiguous chunks.  Chunks are evaluated independently (in parallel when
// OpenMP is enabled) and combined in ascending chunk order.
template <class D>
D per_ryser(const Matrix<D>& a) {
  std::size_t n = a.dim();
  if (n > 32) {
    throw BudgetError("per_ryser: N = " + std::to_string(n) +
                      " exceeds the N <= 32 bound (2^N subsets)");
  }
  if (n == 0) return domain_one<D>();

  std::uint64_t span = (std::uint64_t(1) << n) - 1;  // subsets 1 .. 2^N - 1
  std::size_t nchunks = detail::ryser_chunks(n);
  std::vector<D> partial(nchunks);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    std::uint64_t lo = 1 + span * c / nchunks;
    std::uint64_t hi = 1 + span * (c + 1) / nchunks;
    if (lo < hi) partial[c] = detail::ryser_range(a, lo, hi);
  }

  D acc = std::move(partial[0]);
  for (std::size_t c = 1; c < nchunks; ++c) acc += partial[c];
  if (n & 1) acc = D{} - acc;
  return acc;
}

// --- small matrix utilities shared by the simulators -----------------------

inline Matrix<HPComplex> identity_matrix(std::size_t n, Prec p) {
  Matrix<HPComplex> m(n, HPComplex::zero(p));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = HPComplex::one(p);
  return m;
}

inline Matrix<HPComplex> matmul(const Matrix<HPComplex>& a, const Matrix<HPComplex>& b) {
  std::size_t n = a.dim();
  Prec p = n ? std::max(a(0, 0).prec(), b(0, 0).prec()) : kDefaultPrec;
  Matrix<HPComplex> r(n, HPComplex::zero(p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const HPComplex& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

inline Matrix<HPComplex> adjoint(const Matrix<HPComplex>& a) {
  std::size_t n = a.dim();
  Matrix<HPComplex> r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = conj(a(j, i));
  return r;
}

// Entrywise max of max(|dRe|, |dIm|) between two matrices.
inline HPReal max_norm_diff(const Matrix<HPComplex>& a, const Matrix<HPComplex>& b) {
  HPReal worst(0, kDefaultPrec);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      HPReal d = max_abs_diff(a(i, j), b(i, j));
      if (d > worst) worst = d;
    }
  return worst;
}

// ||M^dagger M - I||_max, the unitarity defect.
inline HPReal unitarity_defect(const Matrix<HPComplex>& m) {
  Prec p = m.dim() ? m(0, 0).prec() : kDefaultPrec;
  return max_norm_diff(matmul(adjoint(m), m), identity_matrix(m.dim(), p));
}

}  // namespace permred
