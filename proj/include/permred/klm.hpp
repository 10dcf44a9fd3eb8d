#pragma once

// Compiler from qubit circuits to postselected linear optics.
//
// Dual-rail encoding: qubit i lives on modes (2i-1, 2i), with the photon in
// mode 2i for |0> and in mode 2i-1 for |1> (so the initial photon pattern is
// 0,1,0,1,... over the dual-rail block).  Every CSIGN becomes
//     H-block on the two "1" rails, NS1, NS1, H-block
// where NS1 (the alpha2 -> -alpha2 nonlinear sign flip) is either
//   W: a 3x3 real unitary with two fresh ancilla modes prepared (0, 1)
//      and postselected unchanged; postselection amplitude per gadget 1/2, or
//   Y: the 2x2 non-unitary [[1-sqrt2, sqrt2], [1, 1]] with one fresh photon-
//      carrying ancilla, unit postselection amplitude.
// Mode count m = 2k + 4*Gamma (W) or 2k + 2*Gamma (Y); the occupancy mask has
// N = k + 2*Gamma ones, and V = mode_matrix restricted to occupied rows and
// columns satisfies Per(V) = amp00(Q) / 4^Gamma (W) or amp00(Q) (Y).

#include "permred/numerics.hpp"
#include "permred/permanent.hpp"
#include "permred/qcirc.hpp"

#include <string>
#include <vector>

namespace permred {

enum class Variant { W, Y };

inline const char* variant_name(Variant v) { return v == Variant::W ? "w" : "y"; }

// A block acting on 1-3 modes (1-indexed); embedded as identity elsewhere.
// Entry (r, c) of the block couples modes[r] <- modes[c].
struct LOGate {
  std::vector<int> modes;
  Matrix<HPComplex> block;
  bool unitary = true;  // false for the Y blocks
};

// Fresh modes consumed by one NS1 instance and their initial (= postselected)
// occupations.
struct NS1Ancillas {
  std::vector<int> modes;
  std::vector<int> occupations;
};

struct ModeLayout {
  int m = 0;  // total mode count
  int k = 0;  // qubit count; qubit i <-> modes (2i-1, 2i)
  std::vector<NS1Ancillas> ancillas;
  std::vector<int> mask;  // mask[mode-1] = initial photon count (0 or 1)
};

struct LOCircuit {
  ModeLayout layout;
  std::vector<LOGate> gates;  // application order
  Variant variant = Variant::W;
  int gamma = 0;
  int meta_n = 0;
  Prec p = kDefaultPrec;
};

// The NS1 block itself: W (3x3, unitary) or Y (2x2, non-unitary), exact to
// precision p.
Matrix<HPComplex> ns1_block(Variant variant, Prec p);

// Lower a circuit over G to linear optics.
LOCircuit compile_circuit(const QCircuit& q, Variant variant);

// Product of embedded blocks, latest gate leftmost (acting on column vectors).
Matrix<HPComplex> mode_matrix(const LOCircuit& l);

// Rows/columns of the initially occupied modes, ascending.
Matrix<HPComplex> extract_v(const Matrix<HPComplex>& u, const ModeLayout& layout);

// Upper bound M on |V entries|: 1 for the W variant (submatrix of a unitary);
// for Y, the ceiling of the actual mode matrix's max absolute row sum.
BigInt entry_bound(const LOCircuit& l, const Matrix<HPComplex>& u);

// Debug dump (double precision, not a stability-guaranteed format).
std::string write_lo_json(const LOCircuit& l);

}  // namespace permred
