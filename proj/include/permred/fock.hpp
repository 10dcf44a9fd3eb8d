#pragma once

// Brute-force simulator of the n-photon, m-mode Hilbert space and the induced
// operator phi(U), with <S|phi(U)|T> = Per(U_{S,T}) / sqrt(s1!...sm! t1!...tm!)
// where U_{S,T} repeats row i s_i times and column j t_j times.  This module
// is the independent oracle for everything the optics compiler produces.

#include "permred/numerics.hpp"
#include "permred/permanent.hpp"

#include <cstddef>
#include <random>
#include <vector>

namespace permred {

// Occupation numbers per mode; photon number = their sum.
using FockState = std::vector<int>;

// All of Phi_{m,n} in lexicographic order; defines row/column indices of
// phi(U) matrices.
struct OccupancyBasis {
  int m = 0, n = 0;
  std::vector<FockState> states;
  std::size_t index_of(const FockState& s) const;
};

// binomial(m+n-1, n) states; refuses above 10^6.
OccupancyBasis enum_basis(int m, int n);

// U_{S,T}: s_i copies of row i, t_j copies of column j, ascending mode order.
Matrix<HPComplex> expand_submatrix(const Matrix<HPComplex>& u, const FockState& s,
                                   const FockState& t);

// Per(U_{S,T}) via per_ryser; the formula's numerator.
HPComplex per_expanded(const Matrix<HPComplex>& u, const FockState& s, const FockState& t);

// <S|phi(U)|T> by the displayed formula.
HPComplex transition_amp(const Matrix<HPComplex>& u, const FockState& s, const FockState& t);

// The full induced operator over enum_basis(m, n); refuses above 2000 states.
Matrix<HPComplex> phi_operator(const Matrix<HPComplex>& u, int n);

// max over S,T of |Per((VU)_{S,T}) - sum_R Per(V_{S,R}) Per(U_{R,T}) / (r1!...rm!)|,
// the multiplication identity behind "phi is a homomorphism".  Holds for
// arbitrary (non-unitary) matrices, which the Y-variant pipeline relies on.
HPReal check_homomorphism(const Matrix<HPComplex>& v, const Matrix<HPComplex>& u, int n);

// Square matrix of independent standard Gaussian re/im samples.
Matrix<HPComplex> random_matrix(int m, std::mt19937_64& rng, Prec p);

// Gram-Schmidt orthonormalization of random_matrix columns, processed in
// ascending column order.  Adequate for property tests; not exactly Haar.
Matrix<HPComplex> random_unitary(int m, std::mt19937_64& rng, Prec p);

}  // namespace permred
