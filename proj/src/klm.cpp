#include "permred/klm.hpp"

#include "json.hpp"

namespace permred {

Matrix<HPComplex> ns1_block(Variant variant, Prec p) {
  HPReal zero(0, p), one(1, p), half = HPReal::pow2(-1, p);
  HPReal rt2 = HPReal::sqrt_ui(2, p);
  if (variant == Variant::Y) {
    // Y = [[1 - sqrt2, sqrt2], [1, 1]]
    Matrix<HPComplex> y(2, HPComplex::zero(p));
    y(0, 0) = HPComplex(one - rt2, zero);
    y(0, 1) = HPComplex(rt2, zero);
    y(1, 0) = HPComplex(one, zero);
    y(1, 1) = HPComplex(one, zero);
    return y;
  }
  // W = [[1-sqrt2,          sqrt(3/sqrt2 - 2),  2^(-1/4)       ],
  //      [sqrt(3/sqrt2-2),  sqrt2 - 1/2,        1/2 - 1/sqrt2  ],
  //      [2^(-1/4),         1/2 - 1/sqrt2,      1/2            ]]
  HPReal w01 = sqrt(HPReal(3, p) / rt2 - HPReal(2, p));
  HPReal w02 = sqrt(one / rt2);  // 2^(-1/4)
  HPReal w12 = half - one / rt2;
  Matrix<HPComplex> w(3, HPComplex::zero(p));
  w(0, 0) = HPComplex(one - rt2, zero);
  w(0, 1) = HPComplex(w01, zero);
  w(0, 2) = HPComplex(w02, zero);
  w(1, 0) = HPComplex(w01, zero);
  w(1, 1) = HPComplex(rt2 - half, zero);
  w(1, 2) = HPComplex(w12, zero);
  w(2, 0) = HPComplex(w02, zero);
  w(2, 1) = HPComplex(w12, zero);
  w(2, 2) = HPComplex(half, zero);
  return w;
}

namespace {

Matrix<HPComplex> two_mode_block(const Mat2& m, Prec p) {
  Matrix<HPComplex> b(2, HPComplex::zero(p));
  b(0, 0) = m[0];
  b(0, 1) = m[1];
  b(1, 0) = m[2];
  b(1, 1) = m[3];
  return b;
}

}  // namespace

LOCircuit compile_circuit(const QCircuit& q, Variant variant) {
  LOCircuit l;
  l.variant = variant;
  l.gamma = csign_count(q);
  l.meta_n = q.meta_n;
  l.p = q.p;
  l.layout.k = q.k;
  l.layout.m = 2 * q.k;  // ancilla modes appended as CSIGNs are lowered
  Prec p = q.p;

  Matrix<HPComplex> ns1 = ns1_block(variant, p);
  Matrix<HPComplex> hblock = two_mode_block(gatemats::hadamard(p), p);

  // NS1 on `target`, consuming fresh ancilla modes.
  auto append_ns1 = [&](int target) {
    int base = l.layout.m;
    if (variant == Variant::W) {
      // ancilla pair (|0>, |1>), keeping the global 0,1,0,1,... pattern
      l.layout.m += 2;
      l.layout.ancillas.push_back(NS1Ancillas{{base + 1, base + 2}, {0, 1}});
      l.gates.push_back(LOGate{{target, base + 1, base + 2}, ns1, true});
    } else {
      // single photon-carrying ancilla
      l.layout.m += 1;
      l.layout.ancillas.push_back(NS1Ancillas{{base + 1}, {1}});
      l.gates.push_back(LOGate{{target, base + 1}, ns1, false});
    }
  };

  for (const Gate& g : q.gates) {
    if (g.kind() == Gate::Kind::OneQubit) {
      // Dual-rail 1-qubit gate: |0> rides mode 2i, |1> rides mode 2i-1, so the
      // block acts on (2i, 2i-1) in that order to reproduce the qubit matrix.
      int i = g.q1();
      l.gates.push_back(LOGate{{2 * i, 2 * i - 1}, two_mode_block(g.matrix(), p), true});
    } else {
      // CSIGN(i, j): Hadamard across the two "1" rails, NS1 on each, Hadamard.
      int ri = 2 * g.q1() - 1, rj = 2 * g.q2() - 1;
      l.gates.push_back(LOGate{{ri, rj}, hblock, true});
      append_ns1(ri);
      append_ns1(rj);
      l.gates.push_back(LOGate{{ri, rj}, hblock, true});
    }
  }

  // Initial photon pattern: one per qubit (in the |0> rail), plus the
  // photon-carrying ancillas.
  l.layout.mask.assign(l.layout.m, 0);
  for (int i = 1; i <= q.k; ++i) l.layout.mask[2 * i - 1] = 1;  // mode 2i
  for (const NS1Ancillas& a : l.layout.ancillas) {
    for (std::size_t x = 0; x < a.modes.size(); ++x) l.layout.mask[a.modes[x] - 1] = a.occupations[x];
  }
  return l;
}

Matrix<HPComplex> mode_matrix(const LOCircuit& l) {
  std::size_t m = static_cast<std::size_t>(l.layout.m);
  Prec p = l.p;
  Matrix<HPComplex> u = identity_matrix(m, p);
  // Apply each gate on the left: rows `modes` of U are replaced by
  // block-weighted combinations of themselves.
  std::vector<std::vector<HPComplex>> updated;
  for (const LOGate& g : l.gates) {
    std::size_t d = g.modes.size();
    updated.assign(d, std::vector<HPComplex>(m, HPComplex::zero(p)));
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t b = 0; b < d; ++b) {
        const HPComplex& coef = g.block(r, b);
        if (coef.is_zero()) continue;
        std::size_t src = static_cast<std::size_t>(g.modes[b] - 1);
        for (std::size_t col = 0; col < m; ++col) updated[r][col] += coef * u(src, col);
      }
    }
    for (std::size_t r = 0; r < d; ++r) {
      std::size_t dst = static_cast<std::size_t>(g.modes[r] - 1);
      for (std::size_t col = 0; col < m; ++col) u(dst, col) = std::move(updated[r][col]);
    }
  }
  return u;
}

Matrix<HPComplex> extract_v(const Matrix<HPComplex>& u, const ModeLayout& layout) {
  std::vector<std::size_t> occupied;
  for (std::size_t i = 0; i < layout.mask.size(); ++i) {
    if (layout.mask[i]) occupied.push_back(i);
  }
  Matrix<HPComplex> v(occupied.size());
  for (std::size_t i = 0; i < occupied.size(); ++i)
    for (std::size_t j = 0; j < occupied.size(); ++j) v(i, j) = u(occupied[i], occupied[j]);
  return v;
}

BigInt entry_bound(const LOCircuit& l, const Matrix<HPComplex>& u) {
  if (l.variant == Variant::W) return BigInt(1);
  // max absolute row sum of the actual product bounds every |V entry|
  Prec p = l.p;
  HPReal worst(0, p);
  for (std::size_t i = 0; i < u.dim(); ++i) {
    HPReal row(0, p);
    for (std::size_t j = 0; j < u.dim(); ++j) row += u(i, j).abs();
    worst = std::max(worst, row);
  }
  BigInt m = worst.round_to_bigint();
  // round_to_bigint is round-to-nearest; bump to a true ceiling
  if (HPReal::from_bigint(m, p) < worst) m += 1;
  if (m < 1) m = 1;
  return m;
}

std::string write_lo_json(const LOCircuit& l) {
  nlohmann::json j;
  j["m"] = l.layout.m;
  j["k"] = l.layout.k;
  j["variant"] = variant_name(l.variant);
  j["gamma"] = l.gamma;
  j["mask"] = l.layout.mask;
  j["ancillas"] = nlohmann::json::array();
  for (const NS1Ancillas& a : l.layout.ancillas) {
    j["ancillas"].push_back({{"modes", a.modes}, {"occupations", a.occupations}});
  }
  j["gates"] = nlohmann::json::array();
  for (const LOGate& g : l.gates) {
    nlohmann::json gj;
    gj["modes"] = g.modes;
    gj["unitary"] = g.unitary;
    std::vector<std::vector<double>> re, im;
    for (std::size_t r = 0; r < g.block.dim(); ++r) {
      std::vector<double> rrow, irow;
      for (std::size_t c = 0; c < g.block.dim(); ++c) {
        rrow.push_back(g.block(r, c).re.to_double());
        irow.push_back(g.block(r, c).im.to_double());
      }
      re.push_back(std::move(rrow));
      im.push_back(std::move(irow));
    }
    gj["re"] = re;
    gj["im"] = im;
    j["gates"].push_back(std::move(gj));
  }
  return j.dump(2) + "\n";
}

}  // namespace permred
