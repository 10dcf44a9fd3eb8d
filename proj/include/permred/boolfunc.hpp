#pragma once

// Boolean functions C : {0,1}^n -> {-1,+1} in three representations, the
// brute-force Delta oracle (Delta_C = sum over all x of C(x)), virtual
// padding C[k] with Delta shifted by k, and the .bf text format.
//
// Bit convention everywhere: an assignment is packed into an unsigned word
// with x_1 as the MOST significant of the n bits, i.e. x_i = (x >> (n-i)) & 1.
// This matches the qubit ordering of the circuit simulator, so amplitude
// cross-checks need no index permutation.

#include "permred/numerics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace permred {

enum class GateOp { And, Or, Xor, Not };

// Operand of a network gate: an input variable x_i or an earlier wire.
struct NetArg {
  enum class Kind { Input, Wire };
  Kind kind = Kind::Input;
  int index = 0;  // 1-based input number, or 0-based wire position
};

struct NetWire {
  std::string name;
  GateOp op = GateOp::And;
  NetArg a, b;  // b unused for Not
};

// XOR-of-monomials exponent: C(x) = (-1)^(xor over monomials of prod x_i).
// vars is sorted ascending, 1-based, size 1..3.
struct Monomial {
  std::vector<int> vars;
  friend bool operator==(const Monomial& l, const Monomial& r) { return l.vars == r.vars; }
  friend bool operator<(const Monomial& l, const Monomial& r) { return l.vars < r.vars; }
};

class BoolFunc {
 public:
  enum class Repr { TruthTable, PhasePoly, Network };

  // Factories validate the representation invariants (1 <= n <= 24, table
  // length 2^n, monomial degree 1..3, wires referencing only earlier wires).
  static BoolFunc truth_table(int n, std::vector<int8_t> values);
  static BoolFunc phase_poly(int n, std::vector<Monomial> monomials);
  static BoolFunc network(int n, std::vector<NetWire> wires, NetArg output);

  int n() const { return n_; }
  Repr repr() const { return repr_; }

  // f(x) in {0,1} and C(x) = (-1)^f(x) in {-1,+1}.
  bool eval_bit(std::uint32_t x) const;
  int eval(std::uint32_t x) const { return eval_bit(x) ? -1 : 1; }

  const std::vector<int8_t>& values() const { return values_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  const std::vector<NetWire>& wires() const { return wires_; }
  const NetArg& output() const { return output_; }

 private:
  BoolFunc() = default;
  int n_ = 1;
  Repr repr_ = Repr::TruthTable;
  std::vector<int8_t> values_;       // TruthTable: +1/-1 per assignment
  std::vector<Monomial> monomials_;  // PhasePoly
  std::vector<NetWire> wires_;       // Network
  NetArg output_;
};

// Exact Delta_C by enumerating all 2^n assignments.  Internally chunked (and
// OpenMP-parallel) with partial sums combined in ascending chunk order.
BigInt delta(const BoolFunc& c);

// C[k]: a virtual wrapper whose Delta is delta(base) + k.  The underlying
// function is never enlarged; a padded circuit is only ever observed through
// its Delta, so the sign search applies k at the recovery level instead.
struct PaddedFunc {
  BoolFunc base;
  BigInt k;
};
PaddedFunc pad(const BoolFunc& c, BigInt k);
BigInt delta(const PaddedFunc& c);

// .bf text format (see README): "n <int>", "repr table|phasepoly|network",
// then the representation payload.  '#' starts a comment.  Errors carry
// 1-based line numbers.
BoolFunc parse_boolfunc(const std::string& text);

// Canonical .bf serialization: sorted monomials, single spaces, ASCII +/-.
// Digest input for instance provenance.
std::string write_boolfunc(const BoolFunc& c);

// "fnv1a64:<16 hex>" digest of the canonical serialization.
std::string provenance_digest(const BoolFunc& c);

// Materialize any representation as a truth table (n <= 20).
BoolFunc to_truth_table(const BoolFunc& c);

}  // namespace permred
