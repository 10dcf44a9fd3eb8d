#pragma once

// End-to-end reduction: Boolean function -> qubit circuit -> linear optics ->
// V submatrix -> integer matrix A = round(2^b V) -> exact Delta recovery
//   W variant: Delta_C = round( 2^(n+2*Gamma) * Per(A) / 2^(b*N) )
//   Y variant: Delta_C = round( 2^n * Per(A) / 2^(b*N) )
// with b chosen so the truncation error keeps the quotient within 1/4 of the
// true (integral) Delta_C.

#include "permred/boolfunc.hpp"
#include "permred/klm.hpp"
#include "permred/numerics.hpp"
#include "permred/permanent.hpp"
#include "permred/qcirc.hpp"

#include <string>

namespace permred {

struct PermanentInstance {
  int version = 1;
  int n = 0;       // Boolean variable count
  int k = 0;       // qubit count
  int gamma = 0;   // CSIGN count
  long b = 0;      // truncation bits
  std::size_t N = 0;  // matrix dimension = k + 2*gamma
  Variant variant = Variant::W;
  Matrix<BigInt> A;
  std::string provenance;  // digest of the canonical .bf text
};

// Truncation precision: b = ceil(log2(N! * N * (M+1)^(N-1))) + n + 2 + 2*Gamma + 8,
// which forces the permanent perturbation N!*N*2^(-b)*(M+1)^(N-1) below
// 2^(-8) / (2^(n+2) * 4^Gamma) -- an 8-bit margin beyond the spacing that
// makes rounding recover Delta exactly.
long choose_b(int n, std::size_t upper_n, int gamma, const BigInt& m_bound);

// A_ij = nearest integer to 2^b * V_ij; rejects |Im V_ij| > im_tol.
Matrix<BigInt> truncate_v(const Matrix<HPComplex>& v, long b, const HPReal& im_tol);

// The circuit stage shared by reduce and the verifier (PhasePoly and Network
// inputs only; a bare truth table has no gate-level structure to compile).
QCircuit circuit_for(const BoolFunc& c, Prec p);

struct ReduceResult {
  PermanentInstance inst;
  Matrix<HPComplex> V;  // pre-truncation, at working precision
  int m = 0;            // optical mode count
  Prec p = kDefaultPrec;
  BigInt M;             // entry bound used for b
};

// Full pipeline.  p_override = 0 means automatic p = max(128, b + 64).
// Instances are emitted whatever their N; only recovery is budgeted.
ReduceResult reduce(const BoolFunc& c, Variant variant, Prec p_override = 0);

// Exact recovery by integer Ryser + rational rounding; refuses N > n_max
// with the 2^N cost spelled out.
BigInt recover(const PermanentInstance& inst, std::size_t n_max = 32);

// .pm.json (stability-guaranteed; matrix entries as decimal strings).
std::string instance_to_json(const PermanentInstance& inst);
PermanentInstance instance_from_json(const std::string& text);

// Plain matrix text: first line N, then N rows of N decimal integers.
Matrix<BigInt> parse_matrix_text(const std::string& text);
std::string write_matrix_text(const Matrix<BigInt>& a);

}  // namespace permred
