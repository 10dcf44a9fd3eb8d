#include "permred/fock.hpp"

#include <algorithm>
#include <stdexcept>

namespace permred {

namespace {

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

int photon_count(const FockState& s) {
  int total = 0;
  for (int v : s) {
    if (v < 0) throw std::invalid_argument("FockState: negative occupation");
    total += v;
  }
  return total;
}

// sqrt(prod_i s_i! * prod_j t_j!) as an HPReal at precision p.
HPReal normalization(const FockState& s, const FockState& t, Prec p) {
  BigInt prod = 1;
  for (int v : s) prod *= factorial(v);
  for (int v : t) prod *= factorial(v);
  return sqrt(HPReal::from_bigint(prod, p));
}

}  // namespace

std::size_t OccupancyBasis::index_of(const FockState& s) const {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || *it != s) throw std::invalid_argument("index_of: state not in basis");
  return static_cast<std::size_t>(it - states.begin());
}

OccupancyBasis enum_basis(int m, int n) {
  if (m < 1 || n < 0) throw std::invalid_argument("enum_basis: need m >= 1, n >= 0");
  BigInt size = binomial(m + n - 1, n);
  if (size > 1000000) {
    throw BudgetError("enum_basis: binomial(" + std::to_string(m + n - 1) + ", " +
                      std::to_string(n) + ") = " + size.get_str() + " states exceeds 10^6");
  }
  OccupancyBasis basis;
  basis.m = m;
  basis.n = n;
  // lexicographic enumeration by direct recursion on the leading mode
  FockState cur(m, 0);
  auto rec = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == m - 1) {
      cur[mode] = remaining;
      basis.states.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[mode] = v;
      self(self, mode + 1, remaining - v);
    }
  };
  rec(rec, 0, n);
  return basis;
}

Matrix<HPComplex> expand_submatrix(const Matrix<HPComplex>& u, const FockState& s,
                                   const FockState& t) {
  std::size_t m = u.dim();
  if (s.size() != m || t.size() != m) {
    throw std::invalid_argument("expand_submatrix: occupation tuple length != mode count");
  }
  int n = photon_count(s);
  if (n != photon_count(t)) {
    throw std::invalid_argument("expand_submatrix: photon count mismatch between S and T");
  }
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < m; ++i) rows.insert(rows.end(), s[i], i);
  for (std::size_t j = 0; j < m; ++j) cols.insert(cols.end(), t[j], j);
  Matrix<HPComplex> e(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) e(i, j) = u(rows[i], cols[j]);
  return e;
}

HPComplex per_expanded(const Matrix<HPComplex>& u, const FockState& s, const FockState& t) {
  return per_ryser(expand_submatrix(u, s, t));
}

HPComplex transition_amp(const Matrix<HPComplex>& u, const FockState& s, const FockState& t) {
  HPComplex per = per_expanded(u, s, t);
  Prec p = per.prec();
  HPReal norm = normalization(s, t, p);
  HPReal inv = HPReal(1, p) / norm;
  return HPComplex(per.re * inv, per.im * inv);
}

Matrix<HPComplex> phi_operator(const Matrix<HPComplex>& u, int n) {
  int m = static_cast<int>(u.dim());
  OccupancyBasis basis = enum_basis(m, n);
  std::size_t dim = basis.states.size();
  if (dim > 2000) {
    throw BudgetError("phi_operator: basis has " + std::to_string(dim) + " > 2000 states");
  }
  Prec p = dim && m ? u(0, 0).prec() : kDefaultPrec;
  Matrix<HPComplex> phi(dim, HPComplex::zero(p));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(dim); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      phi(i, j) = transition_amp(u, basis.states[i], basis.states[j]);
    }
  }
  return phi;
}

HPReal check_homomorphism(const Matrix<HPComplex>& v, const Matrix<HPComplex>& u, int n) {
  int m = static_cast<int>(u.dim());
  if (v.dim() != u.dim()) throw std::invalid_argument("check_homomorphism: dimension mismatch");
  OccupancyBasis basis = enum_basis(m, n);
  Prec p = m ? std::max(u(0, 0).prec(), v(0, 0).prec()) : kDefaultPrec;

  Matrix<HPComplex> vu = matmul(v, u);
  std::vector<HPReal> inv_aut;  // 1 / (r1! ... rm!) per basis state R
  inv_aut.reserve(basis.states.size());
  for (const FockState& r : basis.states) {
    BigInt aut = 1;
    for (int occ : r) aut *= factorial(occ);
    inv_aut.push_back(HPReal(1, p) / HPReal::from_bigint(aut, p));
  }

  HPReal worst(0, p);
  for (const FockState& s : basis.states) {
    for (const FockState& t : basis.states) {
      HPComplex lhs = per_expanded(vu, s, t);
      HPComplex rhs = HPComplex::zero(p);
      for (std::size_t r = 0; r < basis.states.size(); ++r) {
        HPComplex term = per_expanded(v, s, basis.states[r]) *
                         per_expanded(u, basis.states[r], t);
        rhs += inv_aut[r] * term;
      }
      worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
  }
  return worst;
}

Matrix<HPComplex> random_matrix(int m, std::mt19937_64& rng, Prec p) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix<HPComplex> a(m, HPComplex::zero(p));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      a(i, j) = HPComplex(HPReal::from_double(gauss(rng), p), HPReal::from_double(gauss(rng), p));
    }
  return a;
}

Matrix<HPComplex> random_unitary(int m, std::mt19937_64& rng, Prec p) {
  Matrix<HPComplex> a = random_matrix(m, rng, p);
  // classical Gram-Schmidt over columns 0, 1, ..., m-1
  for (int c = 0; c < m; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      HPComplex overlap = HPComplex::zero(p);
      for (int i = 0; i < m; ++i) overlap += conj(a(i, prev)) * a(i, c);
      for (int i = 0; i < m; ++i) a(i, c) -= overlap * a(i, prev);
    }
    HPReal norm2(0, p);
    for (int i = 0; i < m; ++i) norm2 += a(i, c).abs2();
    HPReal inv = HPReal(1, p) / sqrt(norm2);
    for (int i = 0; i < m; ++i) a(i, c) = inv * a(i, c);
  }
  return a;
}

}  // namespace permred
