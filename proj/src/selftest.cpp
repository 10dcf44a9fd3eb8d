#include "permred/selftest.hpp"

#include "permred/boolfunc.hpp"
#include "permred/fock.hpp"
#include "permred/klm.hpp"
#include "permred/permanent.hpp"
#include "permred/qcirc.hpp"
#include "permred/reduce.hpp"

#include <random>
#include <sstream>

namespace permred {

namespace {

// The CSIGN gadget on a bare 2-qubit CSIGN circuit, as a mode matrix plus
// layout, with an optional corruption of the NS1 block for the mutation hook.
struct GadgetContext {
  LOCircuit lo;
  Matrix<HPComplex> u;
};

GadgetContext csign_gadget(Variant variant, Prec p, bool corrupt) {
  QCircuit q{2, p, 0, {}};
  q.gates.push_back(Gate::csign(1, 2));
  GadgetContext ctx{compile_circuit(q, variant), {}};
  if (corrupt) {
    for (LOGate& g : ctx.lo.gates) {
      if (g.block.dim() == (variant == Variant::W ? 3u : 2u)) {
        std::size_t last = g.block.dim() - 1;
        g.block(last, last) += HPComplex(HPReal::from_double(1e-3, p), HPReal(0, p));
      }
    }
  }
  ctx.u = mode_matrix(ctx.lo);
  return ctx;
}

// NS1 lambda_r = amplitude of |r photons in the target> -> itself with the
// ancillas postselected, computed via the Fock oracle on the raw block.
HPComplex ns1_lambda(const Matrix<HPComplex>& block, Variant variant, int r) {
  FockState s;
  if (variant == Variant::W) {
    s = {r, 0, 1};
  } else {
    s = {r, 1};
  }
  return transition_amp(block, s, s);
}

void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
         const std::string& detail) {
  out.push_back(CheckResult{name, pass, pass ? "" : detail});
}

bool close(const HPComplex& a, double re, double im, const HPReal& tol, Prec p) {
  HPComplex want(HPReal::from_double(re, p), HPReal::from_double(im, p));
  return max_abs_diff(a, want) <= tol;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opts) {
  std::vector<CheckResult> results;
  Prec p = opts.p;
  HPReal tol = HPReal::pow2(-p + 40, 64);

  // --- NS1 gadget constants -------------------------------------------------
  {
    Matrix<HPComplex> w = ns1_block(Variant::W, p);
    if (opts.corrupt_ns1) w(2, 2) += HPComplex(HPReal::from_double(1e-3, p), HPReal(0, p));
    bool ok = true;
    std::ostringstream detail;
    double expect[3] = {0.5, 0.5, -0.5};
    for (int r = 0; r <= 2; ++r) {
      HPComplex lam = ns1_lambda(w, Variant::W, r);
      if (!close(lam, expect[r], 0.0, tol, p)) {
        ok = false;
        detail << "lambda_" << r << " = " << lam.str(8) << " want " << expect[r] << "; ";
      }
    }
    add(results, "ns1_w_lambdas", ok, detail.str());
    add(results, "ns1_w_unitary", unitarity_defect(w) <= tol,
        "||W^t W - I|| = " + unitarity_defect(w).str(6));

    Matrix<HPComplex> y = ns1_block(Variant::Y, p);
    ok = true;
    detail.str("");
    double expect_y[3] = {1.0, 1.0, -1.0};
    for (int r = 0; r <= 2; ++r) {
      HPComplex lam = ns1_lambda(y, Variant::Y, r);
      if (!close(lam, expect_y[r], 0.0, tol, p)) {
        ok = false;
        detail << "lambda_" << r << " = " << lam.str(8) << " want " << expect_y[r] << "; ";
      }
    }
    add(results, "ns1_y_lambdas", ok, detail.str());
  }

  // --- compiled CSIGN gadget: postselected dual-rail action ------------------
  for (Variant variant : {Variant::W, Variant::Y}) {
    GadgetContext ctx = csign_gadget(variant, p, opts.corrupt_ns1);
    const ModeLayout& layout = ctx.lo.layout;
    // dual-rail basis state |ab>: photon on rail (2i-1) if bit is 1, else 2i
    auto dual_rail = [&](int a, int b) {
      FockState s(layout.m, 0);
      s[a ? 0 : 1] = 1;
      s[b ? 2 : 3] = 1;
      for (const NS1Ancillas& anc : layout.ancillas) {
        for (std::size_t i = 0; i < anc.modes.size(); ++i) s[anc.modes[i] - 1] = anc.occupations[i];
      }
      return s;
    };
    double scale = variant == Variant::W ? 0.25 : 1.0;
    bool ok = true;
    std::ostringstream detail;
    for (int a = 0; a < 2 && ok; ++a) {
      for (int b = 0; b < 2 && ok; ++b) {
        for (int a2 = 0; a2 < 2 && ok; ++a2) {
          for (int b2 = 0; b2 < 2 && ok; ++b2) {
            HPComplex amp = transition_amp(ctx.u, dual_rail(a2, b2), dual_rail(a, b));
            double want = (a == a2 && b == b2) ? ((a && b) ? -scale : scale) : 0.0;
            if (!close(amp, want, 0.0, tol, p)) {
              ok = false;
              detail << "<" << a2 << b2 << "|gadget|" << a << b << "> = " << amp.str(8)
                     << " want " << want;
            }
          }
        }
      }
    }
    add(results, std::string("csign_gadget_") + variant_name(variant), ok, detail.str());
  }

  // --- Toffoli gadget vs the 8x8 permutation ---------------------------------
  {
    QCircuit tof = toffoli_circuit(p);
    Matrix<HPComplex> dense = dense_unitary(tof);
    Matrix<HPComplex> want(8, HPComplex::zero(p));
    for (std::size_t x = 0; x < 8; ++x) {
      std::size_t y = (x >> 1) == 3 ? (x ^ 1) : x;  // flip target iff both controls set
      want(y, x) = HPComplex::one(p);
    }
    HPReal dist = max_norm_diff(dense, want);
    add(results, "toffoli_matrix", dist <= tol, "max entry distance " + dist.str(6));
    add(results, "toffoli_csigns", csign_count(tof) == 6,
        "CSIGN count = " + std::to_string(csign_count(tof)));
  }

  // --- multiplication identity of phi (incl. non-unitary pairs) --------------
  {
    std::mt19937_64 rng(0x5eed0001);
    int pairs = opts.quick ? 12 : 100;
    HPReal worst(0, p);
    for (int t = 0; t < pairs; ++t) {
      int m = 2 + static_cast<int>(rng() % 3);  // 2..4
      int n = 1 + static_cast<int>(rng() % 3);  // 1..3
      Matrix<HPComplex> a = t % 2 ? random_matrix(m, rng, p) : random_unitary(m, rng, p);
      Matrix<HPComplex> b = t % 3 ? random_matrix(m, rng, p) : random_unitary(m, rng, p);
      worst = std::max(worst, check_homomorphism(a, b, n));
    }
    add(results, "phi_multiplicativity", worst <= tol, "max deviation " + worst.str(6));
  }

  // --- permanent of a unitary stays in the unit disk --------------------------
  {
    std::mt19937_64 rng(0x5eed0002);
    int count = opts.quick ? 20 : 100;
    HPReal limit = HPReal(1, p) + tol;
    bool ok = true;
    std::ostringstream detail;
    for (int t = 0; t < count && ok; ++t) {
      int m = 2 + static_cast<int>(rng() % 6);  // 2..7
      Matrix<HPComplex> u = random_unitary(m, rng, p);
      HPReal mag = per_ryser(u).abs();
      if (mag > limit) {
        ok = false;
        detail << "|Per| = " << mag.str(8) << " for a " << m << "x" << m << " unitary";
      }
    }
    add(results, "unitary_permanent_bound", ok, detail.str());
  }

  // --- phi(U) unitarity -------------------------------------------------------
  {
    std::mt19937_64 rng(0x5eed0003);
    int count = opts.quick ? 10 : 50;
    HPReal tol44 = HPReal::pow2(-p + 44, 64);
    HPReal worst(0, p);
    for (int t = 0; t < count; ++t) {
      int m = 2 + static_cast<int>(rng() % 3);
      int n = 1 + static_cast<int>(rng() % 3);
      Matrix<HPComplex> phi = phi_operator(random_unitary(m, rng, p), n);
      worst = std::max(worst, unitarity_defect(phi));
    }
    add(results, "phi_unitarity", worst <= tol44, "max defect " + worst.str(6));
  }

  // --- end-to-end round trip on small functions -------------------------------
  {
    std::vector<std::pair<std::string, long>> cases = {
        {"n 1\nrepr phasepoly\n", 2},       // constant +1
        {"n 2\nrepr phasepoly\nterm 1 2\n", 2},
    };
    bool ok = true;
    std::ostringstream detail;
    for (const auto& [text, want] : cases) {
      BoolFunc c = parse_boolfunc(text);
      for (Variant variant : {Variant::W, Variant::Y}) {
        if (opts.quick && variant == Variant::Y) continue;
        BigInt got = recover(reduce(c, variant).inst);
        if (got != want) {
          ok = false;
          detail << "recover = " << got.get_str() << " want " << want << " ("
                 << variant_name(variant) << "); ";
        }
        if (delta(c) != want) {
          ok = false;
          detail << "delta oracle disagrees; ";
        }
      }
    }
    add(results, "roundtrip_small", ok, detail.str());
  }

  return results;
}

}  // namespace permred
