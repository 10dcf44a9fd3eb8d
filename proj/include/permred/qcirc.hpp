#pragma once

// k-qubit circuits over the gate set G = { all 1-qubit gates, CSIGN }, where
// CSIGN = diag(1,1,1,-1).  Includes:
//   - the 6-CSIGN Toffoli gadget (validated against the 8x8 Toffoli matrix)
//   - phase_poly_circuit / uncompute_circuit building Q = F.D_C.F with
//     amp00(Q) = Delta_C / 2^n
//   - dense and statevector simulators used as oracles
//   - the .qc text format
//
// Qubits are 1-indexed; qubit 1 is the most significant bit of a basis index.

#include "permred/boolfunc.hpp"
#include "permred/numerics.hpp"
#include "permred/permanent.hpp"

#include <array>
#include <string>
#include <vector>

namespace permred {

// Row-major 2x2 complex matrix: m[0]=a00 m[1]=a01 m[2]=a10 m[3]=a11.
using Mat2 = std::array<HPComplex, 4>;

class Gate {
 public:
  enum class Kind { OneQubit, CSign };

  // Checks unitarity to 2^(-p+40) unless allow_nonunitary (test hook).
  static Gate one_qubit(int q, Mat2 m, std::string label = "U", bool allow_nonunitary = false);
  static Gate csign(int q1, int q2);

  Kind kind() const { return kind_; }
  int q1() const { return q1_; }
  int q2() const { return q2_; }
  const Mat2& matrix() const { return m_; }
  const std::string& label() const { return label_; }

 private:
  Gate() = default;
  Kind kind_ = Kind::CSign;
  int q1_ = 0, q2_ = 0;
  Mat2 m_;
  std::string label_;
};

struct QCircuit {
  int k = 0;          // qubit count
  Prec p = kDefaultPrec;
  int meta_n = 0;     // Boolean variable count of the originating C (0 = n/a)
  std::vector<Gate> gates;  // applied in list order, earliest first
};

// Named 1-qubit matrices at precision p.
namespace gatemats {
Mat2 hadamard(Prec p);
Mat2 pauli_x(Prec p);
Mat2 pauli_z(Prec p);
// B = [[cos pi/8, i sin pi/8], [i sin pi/8, cos pi/8]]
//   = 1/2 [[sqrt(2+sqrt2), i sqrt(2-sqrt2)], [i sqrt(2-sqrt2), sqrt(2+sqrt2)]].
Mat2 bmatrix(Prec p);
Mat2 bdagger(Prec p);
Mat2 phase(const HPComplex& z, Prec p);         // diag(1, z)
Mat2 global_phase(const HPComplex& z, Prec p);  // diag(z, z)
}  // namespace gatemats

// 3-qubit Toffoli (controls 1,2; target 3) built from H, B-derived phase
// gates, and exactly 6 CSIGNs; equals the 8x8 Toffoli matrix exactly
// (a final global-phase gate cancels the construction's residual phase).
QCircuit toffoli_circuit(Prec p = kDefaultPrec);

// CCZ = diag(1,...,1,-1) on 3 qubits: H on the target around the Toffoli.
QCircuit ccz_circuit(Prec p = kDefaultPrec);

// Q = H^n . D_C . H^n for a PhasePoly C: degree-1 monomial -> Z, degree-2 ->
// CSIGN, degree-3 -> CCZ gadget.  amp00(Q) = Delta_C / 2^n.
QCircuit phase_poly_circuit(const BoolFunc& c, Prec p = kDefaultPrec);

// Same contract for a Network C via the uncomputing trick: AND/OR wires get
// a fresh ancilla written by a Toffoli gadget; XOR/NOT are tracked as affine
// forms and cost no CSIGNs; after the phase flip on the output, the forward
// sequence is replayed to restore every ancilla to |0>.
// k = n + (number of AND/OR wires).
QCircuit uncompute_circuit(const BoolFunc& c, Prec p = kDefaultPrec);

int csign_count(const QCircuit& q);

// Apply the circuit to |0...0>; the full 2^k state (k <= 24).
std::vector<HPComplex> simulate_zero_state(const QCircuit& q);

// <0...0|Q|0...0>.
HPComplex amp00(const QCircuit& q);

// Full 2^k x 2^k unitary (k <= 12); basis index bit order: qubit 1 = MSB.
Matrix<HPComplex> dense_unitary(const QCircuit& q);

// .qc text format: "qubits <k>", then "H|B|Z|X <q>", "P <q> <re> <im>",
// "U <q> <8 floats row-major re,im>", "CSIGN <q1> <q2>".  1-indexed.
QCircuit parse_qcircuit(const std::string& text, Prec p = kDefaultPrec);

// Debug-grade writer (named gates kept symbolic, everything else dumped as
// double-precision U lines; NOT a lossless round trip for irrational gates).
std::string write_qcircuit(const QCircuit& q);

}  // namespace permred
