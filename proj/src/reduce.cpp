#include "permred/reduce.hpp"

#include "json.hpp"

#include <sstream>

namespace permred {

long choose_b(int n, std::size_t upper_n, int gamma, const BigInt& m_bound) {
  if (upper_n == 0) throw std::invalid_argument("choose_b: N must be >= 1");
  if (m_bound < 1) throw std::invalid_argument("choose_b: entry bound must be >= 1");
  // K = N! * N * (M+1)^(N-1), evaluated exactly
  BigInt k = factorial(static_cast<unsigned long>(upper_n)) * BigInt(upper_n);
  BigInt base = m_bound + 1;
  for (std::size_t i = 1; i < upper_n; ++i) k *= base;
  return static_cast<long>(ceil_log2(k)) + n + 2 + 2 * gamma + 8;
}

Matrix<BigInt> truncate_v(const Matrix<HPComplex>& v, long b, const HPReal& im_tol) {
  if (b < 0) throw std::invalid_argument("truncate_v: b must be nonnegative");
  Matrix<BigInt> a(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i)
    for (std::size_t j = 0; j < v.dim(); ++j) {
      Dyadic d = round_to_dyadic(v(i, j), static_cast<unsigned long>(b), im_tol);
      a(i, j) = d.num;
    }
  return a;
}

QCircuit circuit_for(const BoolFunc& c, Prec p) {
  switch (c.repr()) {
    case BoolFunc::Repr::PhasePoly:
      return phase_poly_circuit(c, p);
    case BoolFunc::Repr::Network:
      return uncompute_circuit(c, p);
    case BoolFunc::Repr::TruthTable:
      throw std::invalid_argument(
          "circuit_for: a bare truth table has no gate structure to compile; "
          "re-express the function as phasepoly or network");
  }
  throw std::invalid_argument("circuit_for: unknown representation");
}

ReduceResult reduce(const BoolFunc& c, Variant variant, Prec p_override) {
  if (p_override != 0 && p_override < 53) {
    throw std::invalid_argument("reduce: precision override must be >= 53 bits");
  }

  // First pass at default precision: fixes the structure (k, Gamma, N, m),
  // the entry bound M, and therefore b.  The structure is deterministic, so
  // rebuilding at the final precision cannot change it.
  QCircuit q0 = circuit_for(c, kDefaultPrec);
  LOCircuit l0 = compile_circuit(q0, variant);
  Matrix<HPComplex> u0 = mode_matrix(l0);
  BigInt m_bound = entry_bound(l0, u0);

  int n = c.n();
  int gamma = l0.gamma;
  std::size_t upper_n = static_cast<std::size_t>(q0.k) + 2 * static_cast<std::size_t>(gamma);
  long b = choose_b(n, upper_n, gamma, m_bound);

  Prec p = p_override ? p_override : std::max<Prec>(kDefaultPrec, static_cast<Prec>(b) + 64);

  // Second pass at working precision.
  QCircuit q = (p == kDefaultPrec) ? std::move(q0) : circuit_for(c, p);
  LOCircuit l = (p == kDefaultPrec) ? std::move(l0) : compile_circuit(q, variant);
  Matrix<HPComplex> u = (p == kDefaultPrec) ? std::move(u0) : mode_matrix(l);
  Matrix<HPComplex> v = extract_v(u, l.layout);

  ReduceResult r;
  r.p = p;
  r.m = l.layout.m;
  r.M = m_bound;
  r.inst.version = 1;
  r.inst.n = n;
  r.inst.k = q.k;
  r.inst.gamma = gamma;
  r.inst.b = b;
  r.inst.N = v.dim();
  r.inst.variant = variant;
  r.inst.provenance = provenance_digest(c);
  r.inst.A = truncate_v(v, b, HPReal::pow2(-static_cast<long>(p) + 44, 64));
  r.V = std::move(v);

  if (r.inst.N != upper_n) {
    throw VerifyError("reduce: occupied-mode count " + std::to_string(r.inst.N) +
                      " != k + 2*Gamma = " + std::to_string(upper_n));
  }
  return r;
}

BigInt recover(const PermanentInstance& inst, std::size_t n_max) {
  if (n_max > 32) n_max = 32;  // hard Ryser bound
  if (inst.N > n_max) {
    BigInt cost = pow2_int(static_cast<unsigned long>(inst.N));
    throw BudgetError("recover: N = " + std::to_string(inst.N) + " exceeds budget " +
                      std::to_string(n_max) + "; Ryser would visit 2^N = " + cost.get_str() +
                      " subsets");
  }
  BigInt per = per_ryser(inst.A);

  // quotient = 2^(n + 2*Gamma) * Per(A) / 2^(b*N)   (W)
  //            2^n             * Per(A) / 2^(b*N)   (Y)
  unsigned long scale_bits = static_cast<unsigned long>(inst.n) +
                             (inst.variant == Variant::W ? 2ul * inst.gamma : 0ul);
  BigInt numer = per;
  mpz_mul_2exp(numer.get_mpz_t(), numer.get_mpz_t(), scale_bits);
  BigInt denom = pow2_int(static_cast<unsigned long>(inst.b) * inst.N);
  BigRational q(numer, denom);
  q.canonicalize();
  return round_nearest_int(q);
}

// --- serialization -----------------------------------------------------------

std::string instance_to_json(const PermanentInstance& inst) {
  nlohmann::json j;  // nlohmann::json orders keys lexicographically: stable bytes
  j["version"] = inst.version;
  j["n"] = inst.n;
  j["k"] = inst.k;
  j["gamma"] = inst.gamma;
  j["b"] = inst.b;
  j["N"] = inst.N;
  j["variant"] = variant_name(inst.variant);
  j["provenance"] = inst.provenance;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < inst.N; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t jj = 0; jj < inst.N; ++jj) row.push_back(inst.A(i, jj).get_str());
    rows.push_back(std::move(row));
  }
  j["A"] = std::move(rows);
  return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void json_fail(const std::string& msg) {
  throw ParseError(".pm.json: " + msg);
}

template <class T>
T json_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) json_fail(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    json_fail(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

PermanentInstance instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) json_fail("not valid JSON");
  PermanentInstance inst;
  inst.version = json_field<int>(j, "version");
  if (inst.version != 1) json_fail("unsupported version " + std::to_string(inst.version));
  inst.n = json_field<int>(j, "n");
  inst.k = json_field<int>(j, "k");
  inst.gamma = json_field<int>(j, "gamma");
  inst.b = json_field<long>(j, "b");
  inst.N = json_field<std::size_t>(j, "N");
  std::string variant = json_field<std::string>(j, "variant");
  if (variant == "w") {
    inst.variant = Variant::W;
  } else if (variant == "y") {
    inst.variant = Variant::Y;
  } else {
    json_fail("variant must be \"w\" or \"y\"");
  }
  inst.provenance = json_field<std::string>(j, "provenance");
  if (inst.n < 1 || inst.k < 1 || inst.gamma < 0 || inst.b < 0) json_fail("negative or zero size field");
  if (inst.N != static_cast<std::size_t>(inst.k) + 2 * static_cast<std::size_t>(inst.gamma)) {
    json_fail("N != k + 2*gamma");
  }
  auto rows = json_field<std::vector<std::vector<std::string>>>(j, "A");
  if (rows.size() != inst.N) json_fail("matrix A has " + std::to_string(rows.size()) + " rows, expected N");
  inst.A = Matrix<BigInt>(inst.N);
  for (std::size_t i = 0; i < inst.N; ++i) {
    if (rows[i].size() != inst.N) json_fail("matrix A row " + std::to_string(i) + " has wrong length");
    for (std::size_t jj = 0; jj < inst.N; ++jj) {
      try {
        inst.A(i, jj) = BigInt(rows[i][jj]);
      } catch (const std::invalid_argument&) {
        json_fail("matrix entry '" + rows[i][jj] + "' is not a decimal integer");
      }
    }
  }
  return inst;
}

Matrix<BigInt> parse_matrix_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++number;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("matrix line 1: empty input, expected dimension N");
  long n = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> n) || n < 0) throw ParseError("matrix line " + std::to_string(number) + ": expected dimension N");
    std::string extra;
    if (ls >> extra) throw ParseError("matrix line " + std::to_string(number) + ": trailing content after N");
  }
  if (n > 64) throw BudgetError("matrix dimension " + std::to_string(n) + " > 64");
  Matrix<BigInt> a(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    if (!next_line()) throw ParseError("matrix: expected " + std::to_string(n) + " rows, got " + std::to_string(i));
    std::istringstream ls(line);
    std::string tok;
    for (long j = 0; j < n; ++j) {
      if (!(ls >> tok)) {
        throw ParseError("matrix line " + std::to_string(number) + ": row has fewer than N = " +
                         std::to_string(n) + " entries");
      }
      try {
        a(i, j) = BigInt(tok);
      } catch (const std::invalid_argument&) {
        throw ParseError("matrix line " + std::to_string(number) + ": '" + tok + "' is not an integer");
      }
    }
    std::string extra;
    if (ls >> extra) throw ParseError("matrix line " + std::to_string(number) + ": row has more than N entries");
  }
  if (next_line()) throw ParseError("matrix line " + std::to_string(number) + ": trailing content");
  return a;
}

std::string write_matrix_text(const Matrix<BigInt>& a) {
  std::ostringstream out;
  out << a.dim() << "\n";
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (j) out << ' ';
      out << a(i, j).get_str();
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace permred
