#include "permred/qcirc.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace permred {

namespace {

Prec mat2_prec(const Mat2& m) {
  Prec p = m[0].prec();
  for (int i = 1; i < 4; ++i) p = std::min(p, m[i].prec());
  return p;
}

// ||M^dagger M - I||_max for a 2x2.
HPReal mat2_unitarity_defect(const Mat2& m) {
  Prec p = mat2_prec(m);
  // columns of M are orthonormal iff M^dagger M = I
  HPComplex g00 = conj(m[0]) * m[0] + conj(m[2]) * m[2];
  HPComplex g01 = conj(m[0]) * m[1] + conj(m[2]) * m[3];
  HPComplex g10 = conj(m[1]) * m[0] + conj(m[3]) * m[2];
  HPComplex g11 = conj(m[1]) * m[1] + conj(m[3]) * m[3];
  HPComplex one = HPComplex::one(p), zero = HPComplex::zero(p);
  HPReal worst = max_abs_diff(g00, one);
  worst = std::max(worst, max_abs_diff(g01, zero));
  worst = std::max(worst, max_abs_diff(g10, zero));
  worst = std::max(worst, max_abs_diff(g11, one));
  return worst;
}

}  // namespace

Gate Gate::one_qubit(int q, Mat2 m, std::string label, bool allow_nonunitary) {
  if (q < 1) throw std::invalid_argument("Gate: qubit indices are 1-based");
  if (!allow_nonunitary) {
    Prec p = mat2_prec(m);
    HPReal defect = mat2_unitarity_defect(m);
    if (defect > HPReal::pow2(-p + 40, 64)) {
      throw VerifyError("Gate '" + label + "': matrix is not unitary (defect " +
                        defect.str(6) + " at precision " + std::to_string(p) + ")");
    }
  }
  Gate g;
  g.kind_ = Kind::OneQubit;
  g.q1_ = q;
  g.m_ = std::move(m);
  g.label_ = std::move(label);
  return g;
}

Gate Gate::csign(int q1, int q2) {
  if (q1 < 1 || q2 < 1) throw std::invalid_argument("Gate: qubit indices are 1-based");
  if (q1 == q2) throw std::invalid_argument("CSIGN: qubit indices must be distinct");
  Gate g;
  g.kind_ = Kind::CSign;
  g.q1_ = q1;
  g.q2_ = q2;
  g.label_ = "CSIGN";
  return g;
}

namespace gatemats {

Mat2 hadamard(Prec p) {
  HPReal s = HPReal(1, p) / HPReal::sqrt_ui(2, p);
  HPReal z(0, p);
  return {HPComplex(s, z), HPComplex(s, z), HPComplex(s, z), HPComplex(-s, z)};
}

Mat2 pauli_x(Prec p) {
  return {HPComplex::zero(p), HPComplex::one(p), HPComplex::one(p), HPComplex::zero(p)};
}

Mat2 pauli_z(Prec p) {
  return {HPComplex::one(p), HPComplex::zero(p), HPComplex::zero(p), -HPComplex::one(p)};
}

Mat2 bmatrix(Prec p) {
  HPReal eighth = HPReal::pi(p) / HPReal(8, p);
  HPReal c = cos(eighth), s = sin(eighth), z(0, p);
  return {HPComplex(c, z), HPComplex(z, s), HPComplex(z, s), HPComplex(c, z)};
}

Mat2 bdagger(Prec p) {
  HPReal eighth = HPReal::pi(p) / HPReal(8, p);
  HPReal c = cos(eighth), s = sin(eighth), z(0, p);
  return {HPComplex(c, z), HPComplex(z, -s), HPComplex(z, -s), HPComplex(c, z)};
}

Mat2 phase(const HPComplex& z, Prec p) {
  return {HPComplex::one(p), HPComplex::zero(p), HPComplex::zero(p), z};
}

Mat2 global_phase(const HPComplex& z, Prec p) {
  return {z, HPComplex::zero(p), HPComplex::zero(p), z};
}

}  // namespace gatemats

namespace {

void append_h(QCircuit& qc, int q) {
  qc.gates.push_back(Gate::one_qubit(q, gatemats::hadamard(qc.p), "H"));
}

// CNOT(ctrl -> tgt) over the gate set G: H(tgt) CSIGN H(tgt).
void append_cnot(QCircuit& qc, int ctrl, int tgt) {
  append_h(qc, tgt);
  qc.gates.push_back(Gate::csign(ctrl, tgt));
  append_h(qc, tgt);
}

// T and Tdg realized through the B gate via H B H = e^{-i pi/8} Tdg
// (equivalently T = e^{i pi/8} H Bdg H).  Each use defers a global phase of
// +/- pi/8, accumulated by the caller and cancelled by one final gate.
void append_t(QCircuit& qc, int q, int& owed_eighths) {
  append_h(qc, q);
  qc.gates.push_back(Gate::one_qubit(q, gatemats::bdagger(qc.p), "Bdg"));
  append_h(qc, q);
  owed_eighths += 1;
}

void append_tdg(QCircuit& qc, int q, int& owed_eighths) {
  append_h(qc, q);
  qc.gates.push_back(Gate::one_qubit(q, gatemats::bmatrix(qc.p), "B"));
  append_h(qc, q);
  owed_eighths -= 1;
}

void append_owed_phase(QCircuit& qc, int owed_eighths) {
  if (owed_eighths % 16 == 0) return;
  Prec p = qc.p;
  HPReal angle = HPReal(owed_eighths, p) * HPReal::pi(p) / HPReal(8, p);
  HPComplex z(cos(angle), sin(angle));
  qc.gates.push_back(Gate::one_qubit(1, gatemats::global_phase(z, p), "GPHASE"));
}

void append_remapped(QCircuit& qc, const QCircuit& src, const std::vector<int>& qubit_map) {
  for (const Gate& g : src.gates) {
    if (g.kind() == Gate::Kind::OneQubit) {
      qc.gates.push_back(Gate::one_qubit(qubit_map[g.q1()], g.matrix(), g.label()));
    } else {
      qc.gates.push_back(Gate::csign(qubit_map[g.q1()], qubit_map[g.q2()]));
    }
  }
}

}  // namespace

QCircuit toffoli_circuit(Prec p) {
  // Standard 6-CNOT decomposition with the CNOTs lowered to H.CSIGN.H and the
  // T gates lowered through B; equality with the 8x8 Toffoli (including global
  // phase) is asserted by tests, which are the actual contract.
  QCircuit qc{3, p, 0, {}};
  const int a = 1, b = 2, c = 3;
  int owed = 0;
  append_h(qc, c);
  append_cnot(qc, b, c);
  append_tdg(qc, c, owed);
  append_cnot(qc, a, c);
  append_t(qc, c, owed);
  append_cnot(qc, b, c);
  append_tdg(qc, c, owed);
  append_cnot(qc, a, c);
  append_t(qc, b, owed);
  append_t(qc, c, owed);
  append_cnot(qc, a, b);
  append_h(qc, c);
  append_t(qc, a, owed);
  append_tdg(qc, b, owed);
  append_cnot(qc, a, b);
  append_owed_phase(qc, owed);
  return qc;
}

QCircuit ccz_circuit(Prec p) {
  QCircuit qc{3, p, 0, {}};
  append_h(qc, 3);
  QCircuit tof = toffoli_circuit(p);
  qc.gates.insert(qc.gates.end(), tof.gates.begin(), tof.gates.end());
  append_h(qc, 3);
  return qc;
}

QCircuit phase_poly_circuit(const BoolFunc& c, Prec p) {
  if (c.repr() != BoolFunc::Repr::PhasePoly) {
    throw std::invalid_argument(
        "phase_poly_circuit: input is not a phase polynomial; use "
        "uncompute_circuit for network inputs");
  }
  int n = c.n();
  QCircuit qc{n, p, n, {}};
  QCircuit ccz = ccz_circuit(p);
  for (int i = 1; i <= n; ++i) append_h(qc, i);
  for (const Monomial& mono : c.monomials()) {
    if (mono.vars.size() == 1) {
      qc.gates.push_back(Gate::one_qubit(mono.vars[0], gatemats::pauli_z(p), "Z"));
    } else if (mono.vars.size() == 2) {
      qc.gates.push_back(Gate::csign(mono.vars[0], mono.vars[1]));
    } else {
      std::vector<int> map = {0, mono.vars[0], mono.vars[1], mono.vars[2]};
      append_remapped(qc, ccz, map);
    }
  }
  for (int i = 1; i <= n; ++i) append_h(qc, i);
  return qc;
}

// --- uncomputing compiler ----------------------------------------------------

namespace {

// Value of an input/wire as an affine function of the qubit register:
// value = constant XOR (parity of qubits in mask).  Bit q of mask = qubit q.
struct Affine {
  bool constant = false;
  std::uint64_t mask = 0;
  friend bool operator==(const Affine& a, const Affine& b) {
    return a.constant == b.constant && a.mask == b.mask;
  }
};

int lowest_qubit(std::uint64_t mask) { return std::countr_zero(mask); }

// Gates making qubit `carrier` hold the value of form f (which must contain
// carrier in its mask): CNOT every other mask qubit into it, then X for the
// constant.  Self-inverse when replayed in reverse order.
void materialize(QCircuit& qc, const Affine& f, int carrier) {
  for (int q = 1; q <= 63; ++q) {
    if (q == carrier || !(f.mask >> q & 1)) continue;
    append_cnot(qc, q, carrier);
  }
  if (f.constant) {
    qc.gates.push_back(Gate::one_qubit(carrier, gatemats::pauli_x(qc.p), "X"));
  }
}

}  // namespace

QCircuit uncompute_circuit(const BoolFunc& c, Prec p) {
  if (c.repr() != BoolFunc::Repr::Network) {
    throw std::invalid_argument("uncompute_circuit: input is not a network");
  }
  int n = c.n();
  int ancillas = 0;
  for (const NetWire& w : c.wires()) {
    if (w.op == GateOp::And || w.op == GateOp::Or) ++ancillas;
  }
  int k = n + ancillas;
  if (k > 63) throw BudgetError("uncompute_circuit: needs " + std::to_string(k) + " > 63 qubits");

  QCircuit qc{k, p, n, {}};
  QCircuit tof = toffoli_circuit(p);

  std::vector<Affine> input_form(n + 1);
  for (int i = 1; i <= n; ++i) input_form[i] = Affine{false, std::uint64_t(1) << i};
  auto arg_form = [&](const NetArg& arg, const std::vector<Affine>& wire_form) {
    return arg.kind == NetArg::Kind::Input ? input_form[arg.index] : wire_form[arg.index];
  };

  // AND of two affine forms, writing a Toffoli into ancilla `anc` when the
  // result is genuinely quadratic.  Emits a palindromic, self-inverse block:
  // fix-ups, Toffoli, fix-ups reversed.
  int next_anc = n;
  std::vector<std::vector<Gate>> blocks;
  auto and_forms = [&](Affine a, Affine b) -> Affine {
    int anc = ++next_anc;  // consumed even by degenerate cases: k is fixed
    std::vector<Gate> block;
    Affine result;
    if (a.mask == 0 || b.mask == 0) {
      // constant operand: AND(0, y) = 0, AND(1, y) = y
      if (a.mask == 0 && !a.constant) {
        result = Affine{};
      } else if (a.mask == 0) {
        result = b;
      } else if (!b.constant) {
        result = Affine{};
      } else {
        result = a;
      }
    } else if (a == b) {
      result = a;  // AND(y, y) = y
    } else if (a.mask == b.mask) {
      result = Affine{};  // AND(y, NOT y) = 0
    } else {
      // Freeze each operand into a carrier qubit; order so neither
      // materialization disturbs the other's already-frozen carrier.
      QCircuit fix{k, p, 0, {}};
      int u, w;
      if (std::uint64_t only_a = a.mask & ~b.mask; only_a != 0) {
        u = lowest_qubit(only_a);
        w = lowest_qubit(b.mask);
        materialize(fix, a, u);
        materialize(fix, b, w);
      } else {  // a.mask is a proper subset of b.mask
        w = lowest_qubit(b.mask & ~a.mask);
        u = lowest_qubit(a.mask);
        materialize(fix, b, w);
        materialize(fix, a, u);
      }
      QCircuit core{k, p, 0, {}};
      std::vector<int> map = {0, u, w, anc};
      append_remapped(core, tof, map);
      block = fix.gates;
      block.insert(block.end(), core.gates.begin(), core.gates.end());
      block.insert(block.end(), fix.gates.rbegin(), fix.gates.rend());
      result = Affine{false, std::uint64_t(1) << anc};
    }
    blocks.push_back(std::move(block));
    return result;
  };

  std::vector<Affine> wire_form(c.wires().size());
  for (std::size_t i = 0; i < c.wires().size(); ++i) {
    const NetWire& w = c.wires()[i];
    Affine a = arg_form(w.a, wire_form);
    switch (w.op) {
      case GateOp::Not:
        wire_form[i] = Affine{!a.constant, a.mask};
        break;
      case GateOp::Xor: {
        Affine b = arg_form(w.b, wire_form);
        wire_form[i] = Affine{a.constant != b.constant, a.mask ^ b.mask};
        break;
      }
      case GateOp::And:
        wire_form[i] = and_forms(a, arg_form(w.b, wire_form));
        break;
      case GateOp::Or: {
        // De Morgan: OR(a, b) = NOT AND(NOT a, NOT b); the outer NOT is free
        // (tracked in the form), so the ancilla physically holds the AND.
        Affine b = arg_form(w.b, wire_form);
        Affine inner = and_forms(Affine{!a.constant, a.mask}, Affine{!b.constant, b.mask});
        wire_form[i] = Affine{!inner.constant, inner.mask};
        break;
      }
    }
  }

  for (int i = 1; i <= n; ++i) append_h(qc, i);
  for (const auto& block : blocks) qc.gates.insert(qc.gates.end(), block.begin(), block.end());

  // Phase flip by (-1)^{f(x)} for the affine output form: Z per mask qubit,
  // one global -1 for the constant.
  Affine out = arg_form(c.output(), wire_form);
  for (int q = 1; q <= k; ++q) {
    if (out.mask >> q & 1) qc.gates.push_back(Gate::one_qubit(q, gatemats::pauli_z(p), "Z"));
  }
  if (out.constant) {
    qc.gates.push_back(Gate::one_qubit(1, gatemats::global_phase(-HPComplex::one(p), p), "GPHASE"));
  }

  // Uncompute: each block is self-inverse, so replaying them in reverse block
  // order returns every ancilla to |0> exactly.
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    qc.gates.insert(qc.gates.end(), it->begin(), it->end());
  }
  for (int i = 1; i <= n; ++i) append_h(qc, i);
  return qc;
}

int csign_count(const QCircuit& q) {
  int count = 0;
  for (const Gate& g : q.gates) count += g.kind() == Gate::Kind::CSign;
  return count;
}

// --- simulation --------------------------------------------------------------

namespace {

void apply_circuit(const QCircuit& qc, std::vector<HPComplex>& v) {
  int k = qc.k;
  std::size_t dim = std::size_t(1) << k;
  for (const Gate& g : qc.gates) {
    if (g.kind() == Gate::Kind::OneQubit) {
      int bit = k - g.q1();  // qubit 1 is the most significant bit
      std::size_t stride = std::size_t(1) << bit;
      const Mat2& m = g.matrix();
      for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
          std::size_t i0 = base + off, i1 = i0 + stride;
          HPComplex v0 = m[0] * v[i0] + m[1] * v[i1];
          HPComplex v1 = m[2] * v[i0] + m[3] * v[i1];
          v[i0] = std::move(v0);
          v[i1] = std::move(v1);
        }
      }
    } else {
      std::size_t mask = (std::size_t(1) << (k - g.q1())) | (std::size_t(1) << (k - g.q2()));
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask) == mask) v[i] = -v[i];
      }
    }
  }
}

}  // namespace

std::vector<HPComplex> simulate_zero_state(const QCircuit& q) {
  if (q.k < 1 || q.k > 24) {
    throw BudgetError("simulate_zero_state: k = " + std::to_string(q.k) +
                      " outside [1, 24] (statevector is 2^k amplitudes)");
  }
  std::vector<HPComplex> v(std::size_t(1) << q.k, HPComplex::zero(q.p));
  v[0] = HPComplex::one(q.p);
  apply_circuit(q, v);
  return v;
}

HPComplex amp00(const QCircuit& q) { return simulate_zero_state(q)[0]; }

Matrix<HPComplex> dense_unitary(const QCircuit& q) {
  if (q.k < 1 || q.k > 12) {
    throw BudgetError("dense_unitary: k = " + std::to_string(q.k) +
                      " outside [1, 12] (matrix is 4^k entries)");
  }
  std::size_t dim = std::size_t(1) << q.k;
  Matrix<HPComplex> u(dim, HPComplex::zero(q.p));
  std::vector<HPComplex> col(dim, HPComplex::zero(q.p));
  for (std::size_t t = 0; t < dim; ++t) {
    for (std::size_t i = 0; i < dim; ++i) col[i] = HPComplex::zero(q.p);
    col[t] = HPComplex::one(q.p);
    apply_circuit(q, col);
    for (std::size_t i = 0; i < dim; ++i) u(i, t) = col[i];
  }
  return u;
}

// --- .qc text format ----------------------------------------------------------

namespace {

[[noreturn]] void qc_fail(int line, const std::string& msg) {
  throw ParseError(".qc line " + std::to_string(line) + ": " + msg);
}

double parse_double(int line, const std::string& tok) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    qc_fail(line, "expected a number, got '" + tok + "'");
  }
}

int parse_qubit(int line, const std::string& tok, int k) {
  try {
    std::size_t used = 0;
    int q = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    if (q < 1 || q > k) qc_fail(line, "qubit " + tok + " out of range [1, " + std::to_string(k) + "]");
    return q;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    qc_fail(line, "expected a qubit index, got '" + tok + "'");
  }
}

}  // namespace

QCircuit parse_qcircuit(const std::string& text, Prec p) {
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  QCircuit qc{0, p, 0, {}};
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++number;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;

    if (!have_header) {
      if (tok.size() != 2 || tok[0] != "qubits") qc_fail(number, "expected header 'qubits <k>'");
      int k = static_cast<int>(parse_double(number, tok[1]));
      if (k < 1 || std::to_string(k) != tok[1]) qc_fail(number, "qubit count must be a positive integer");
      qc.k = k;
      have_header = true;
      continue;
    }

    try {
      if (tok[0] == "CSIGN") {
        if (tok.size() != 3) qc_fail(number, "expected 'CSIGN <q1> <q2>'");
        int q1 = parse_qubit(number, tok[1], qc.k);
        int q2 = parse_qubit(number, tok[2], qc.k);
        if (q1 == q2) qc_fail(number, "CSIGN qubits must be distinct");
        qc.gates.push_back(Gate::csign(q1, q2));
      } else if (tok[0] == "H" || tok[0] == "B" || tok[0] == "Z" || tok[0] == "X") {
        if (tok.size() != 2) qc_fail(number, "expected '" + tok[0] + " <q>'");
        int q = parse_qubit(number, tok[1], qc.k);
        Mat2 m = tok[0] == "H"   ? gatemats::hadamard(p)
                 : tok[0] == "B" ? gatemats::bmatrix(p)
                 : tok[0] == "Z" ? gatemats::pauli_z(p)
                                 : gatemats::pauli_x(p);
        qc.gates.push_back(Gate::one_qubit(q, std::move(m), tok[0]));
      } else if (tok[0] == "P") {
        if (tok.size() != 4) qc_fail(number, "expected 'P <q> <re> <im>'");
        int q = parse_qubit(number, tok[1], qc.k);
        HPComplex z(HPReal::from_double(parse_double(number, tok[2]), p),
                    HPReal::from_double(parse_double(number, tok[3]), p));
        qc.gates.push_back(Gate::one_qubit(q, gatemats::phase(z, p), "P"));
      } else if (tok[0] == "U") {
        if (tok.size() != 10) qc_fail(number, "expected 'U <q>' followed by 8 numbers");
        int q = parse_qubit(number, tok[1], qc.k);
        Mat2 m;
        for (int e = 0; e < 4; ++e) {
          m[e] = HPComplex(HPReal::from_double(parse_double(number, tok[2 + 2 * e]), p),
                           HPReal::from_double(parse_double(number, tok[3 + 2 * e]), p));
        }
        qc.gates.push_back(Gate::one_qubit(q, std::move(m), "U"));
      } else {
        qc_fail(number, "unknown gate '" + tok[0] + "'");
      }
    } catch (const VerifyError& e) {
      qc_fail(number, e.what());  // non-unitary P/U matrix
    }
  }
  if (!have_header) throw ParseError(".qc line 1: missing 'qubits <k>' header");
  return qc;
}

std::string write_qcircuit(const QCircuit& q) {
  std::ostringstream out;
  out << "qubits " << q.k << "\n";
  char buf[512];
  for (const Gate& g : q.gates) {
    if (g.kind() == Gate::Kind::CSign) {
      out << "CSIGN " << g.q1() << ' ' << g.q2() << "\n";
      continue;
    }
    const std::string& label = g.label();
    if (label == "H" || label == "B" || label == "Z" || label == "X") {
      out << label << ' ' << g.q1() << "\n";
    } else if (label == "P") {
      const HPComplex& z = g.matrix()[3];
      std::snprintf(buf, sizeof buf, "P %d %.17g %.17g", g.q1(), z.re.to_double(), z.im.to_double());
      out << buf << "\n";
    } else {
      out << "U " << g.q1();
      for (int e = 0; e < 4; ++e) {
        std::snprintf(buf, sizeof buf, " %.17g %.17g", g.matrix()[e].re.to_double(),
                      g.matrix()[e].im.to_double());
        out << buf;
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace permred
