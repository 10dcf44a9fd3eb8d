// permred: compile +/-1 Boolean functions down to integer-matrix permanent
// instances and verify every stage of the pipeline.
//
// Output discipline: machine-readable "key value" lines on stdout, prose on
// stderr.  Exit codes: 0 success, 2 parse error, 3 budget refusal,
// 4 verification mismatch, 1 anything else.

#include "permred/boolfunc.hpp"
#include "permred/fock.hpp"
#include "permred/klm.hpp"
#include "permred/permanent.hpp"
#include "permred/qcirc.hpp"
#include "permred/reduce.hpp"
#include "permred/selftest.hpp"
#include "permred/signsearch.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace permred;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

// --precision flag if given, else PERMRED_PRECISION, else 0 (automatic).
Prec effective_precision(long flag) {
  if (flag != 0) return static_cast<Prec>(flag);
  const char* env = std::getenv("PERMRED_PRECISION");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 53)
    throw ParseError(std::string("PERMRED_PRECISION must be an integer >= 53, got \"") + env +
                     "\"");
  return static_cast<Prec>(v);
}

Variant parse_variant(const std::string& s) {
  if (s == "w") return Variant::W;
  if (s == "y") return Variant::Y;
  throw ParseError("variant must be w or y, got \"" + s + "\"");
}

std::string default_out(const std::string& in) {
  std::string base = in;
  if (base.size() > 3 && base.compare(base.size() - 3, 3, ".bf") == 0)
    base.resize(base.size() - 3);
  return base + ".pm.json";
}

struct CompileArgs {
  std::string bf_path, out, lo_out, variant = "w";
  long precision = 0;
};

int cmd_compile(const CompileArgs& args) {
  Variant variant = parse_variant(args.variant);
  BoolFunc c = parse_boolfunc(slurp(args.bf_path));
  ReduceResult r = reduce(c, variant, effective_precision(args.precision));

  std::string out = args.out.empty() ? default_out(args.bf_path) : args.out;
  spit(out, instance_to_json(r.inst));
  if (!args.lo_out.empty()) {
    LOCircuit lo = compile_circuit(circuit_for(c, r.p), variant);
    spit(args.lo_out, write_lo_json(lo));
  }

  std::cout << "n " << r.inst.n << "\n"
            << "k " << r.inst.k << "\n"
            << "gamma " << r.inst.gamma << "\n"
            << "m " << r.m << "\n"
            << "N " << r.inst.N << "\n"
            << "b " << r.inst.b << "\n"
            << "variant " << variant_name(variant) << "\n"
            << "precision " << r.p << "\n"
            << "provenance " << r.inst.provenance << "\n"
            << "out " << out << "\n";
  return 0;
}

struct PermanentArgs {
  std::string matrix_path, algo = "ryser";
};

int cmd_permanent(const PermanentArgs& args) {
  Matrix<BigInt> a = parse_matrix_text(slurp(args.matrix_path));
  BigInt value;
  if (args.algo == "ryser") {
    value = per_ryser(a);
  } else if (args.algo == "naive") {
    value = per_naive(a);
  } else {
    throw ParseError("algo must be ryser or naive, got \"" + args.algo + "\"");
  }
  std::cout << "N " << a.dim() << "\n"
            << "permanent " << value.get_str() << "\n";
  return 0;
}

struct RecoverArgs {
  std::string inst_path;
  std::size_t n_max = 32;
};

int cmd_recover(const RecoverArgs& args) {
  PermanentInstance inst = instance_from_json(slurp(args.inst_path));
  BigInt d = recover(inst, args.n_max);
  std::cout << "N " << inst.N << "\n"
            << "delta " << d.get_str() << "\n";
  return 0;
}

struct VerifyArgs {
  std::string bf_path, variant = "w";
  long precision = 0;
  std::size_t n_max = 32;
};

int cmd_verify(const VerifyArgs& args) {
  Variant variant = parse_variant(args.variant);
  BoolFunc c = parse_boolfunc(slurp(args.bf_path));

  BigInt d_brute = delta(c);

  ReduceResult r = reduce(c, variant, effective_precision(args.precision));
  HPComplex amp = amp00(circuit_for(c, r.p));
  HPReal scaled = mul_2exp(amp.re, c.n());
  BigInt d_circuit = scaled.round_to_bigint();
  HPReal tol = HPReal::pow2(-r.p + 50, 64);
  HPReal residue = abs(scaled - HPReal::from_bigint(d_circuit, r.p));
  if (residue > tol || abs(mul_2exp(amp.im, c.n())) > tol)
    throw VerifyError("2^n * amp00 is not integral: " + scaled.str() + " + " +
                      mul_2exp(amp.im, c.n()).str() + "i");

  BigInt d_recover = recover(r.inst, args.n_max);

  std::cout << "delta_brute " << d_brute.get_str() << "\n"
            << "delta_circuit " << d_circuit.get_str() << "\n"
            << "delta_recover " << d_recover.get_str() << "\n";
  if (d_brute != d_circuit || d_brute != d_recover) {
    std::cout << "verify mismatch\n";
    throw VerifyError("delta disagreement: brute " + d_brute.get_str() + ", circuit " +
                      d_circuit.get_str() + ", recover " + d_recover.get_str());
  }
  std::cout << "verify ok\n";
  return 0;
}

struct SignSearchArgs {
  std::string bf_path, backend = "brute", variant = "w";
  long precision = 0;
  std::size_t n_max = 32;
};

int cmd_signsearch(const SignSearchArgs& args) {
  BoolFunc c = parse_boolfunc(slurp(args.bf_path));
  SignOracle::Backend backend;
  if (args.backend == "brute") {
    backend = SignOracle::Backend::Brute;
  } else if (args.backend == "permanent") {
    backend = SignOracle::Backend::Permanent;
  } else {
    throw ParseError("backend must be brute or permanent, got \"" + args.backend + "\"");
  }
  SignOracle oracle(backend, parse_variant(args.variant), args.n_max,
                    effective_precision(args.precision));
  BigInt d = determine_delta(oracle, c);
  for (const auto& [k, s] : oracle.trace())
    std::cout << "probe " << k.get_str() << " " << s << "\n";
  std::cout << "calls " << oracle.calls() << "\n"
            << "delta " << d.get_str() << "\n";
  return 0;
}

struct SelftestArgs {
  bool quick = false;
  bool corrupt_ns1 = false;
  long precision = 0;
};

int cmd_selftest(const SelftestArgs& args) {
  SelftestOptions opts;
  opts.quick = args.quick;
  opts.corrupt_ns1 = args.corrupt_ns1;
  Prec p = effective_precision(args.precision);
  if (p != 0) opts.p = p;

  std::vector<CheckResult> results = run_selftest(opts);
  std::size_t failed = 0;
  for (const CheckResult& r : results) {
    std::cout << "check " << r.name << " " << (r.pass ? "pass" : "FAIL") << "\n";
    if (!r.pass) {
      ++failed;
      std::cerr << r.name << ": " << r.detail << "\n";
    }
  }
  std::cout << "selftest " << (failed == 0 ? "pass" : "FAIL") << "\n";
  if (failed != 0)
    throw VerifyError(std::to_string(failed) + " of " + std::to_string(results.size()) +
                      " checks failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean-function -> matrix-permanent reduction toolkit"};
  app.require_subcommand(1);

  CompileArgs compile_args;
  CLI::App* compile = app.add_subcommand(
      "compile", "Compile a .bf function to a .pm.json permanent instance");
  compile->add_option("bf", compile_args.bf_path, "input .bf file")->required();
  compile->add_option("--variant", compile_args.variant, "optics variant: w or y")
      ->check(CLI::IsMember({"w", "y"}));
  compile->add_option("--out", compile_args.out, "output .pm.json path (default: input stem)");
  compile->add_option("--lo-out", compile_args.lo_out, "also dump the optical circuit as JSON");
  compile->add_option("--precision", compile_args.precision, "working precision in bits")
      ->check(CLI::Range(53l, 1l << 20));

  PermanentArgs permanent_args;
  CLI::App* permanent = app.add_subcommand(
      "permanent", "Permanent of a plain-text integer matrix");
  permanent->add_option("matrix", permanent_args.matrix_path, "matrix file")->required();
  permanent->add_option("--algo", permanent_args.algo, "ryser (N <= 32) or naive (N <= 9)")
      ->check(CLI::IsMember({"ryser", "naive"}));

  RecoverArgs recover_args;
  CLI::App* recover = app.add_subcommand(
      "recover", "Recover delta from a .pm.json instance");
  recover->add_option("instance", recover_args.inst_path, ".pm.json file")->required();
  recover->add_option("--n-max", recover_args.n_max, "largest permitted matrix dimension")
      ->check(CLI::Range(std::size_t{1}, std::size_t{32}));

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Check brute-force, circuit, and permanent deltas agree");
  verify->add_option("bf", verify_args.bf_path, "input .bf file")->required();
  verify->add_option("--variant", verify_args.variant, "optics variant: w or y")
      ->check(CLI::IsMember({"w", "y"}));
  verify->add_option("--precision", verify_args.precision, "working precision in bits")
      ->check(CLI::Range(53l, 1l << 20));
  verify->add_option("--n-max", verify_args.n_max, "largest permitted matrix dimension")
      ->check(CLI::Range(std::size_t{1}, std::size_t{32}));

  SignSearchArgs signsearch_args;
  CLI::App* signsearch = app.add_subcommand(
      "signsearch", "Determine delta through the sign oracle alone");
  signsearch->add_option("bf", signsearch_args.bf_path, "input .bf file")->required();
  signsearch->add_option("--backend", signsearch_args.backend, "brute or permanent")
      ->check(CLI::IsMember({"brute", "permanent"}));
  signsearch->add_option("--variant", signsearch_args.variant,
                         "optics variant for the permanent backend")
      ->check(CLI::IsMember({"w", "y"}));
  signsearch->add_option("--precision", signsearch_args.precision, "working precision in bits")
      ->check(CLI::Range(53l, 1l << 20));
  signsearch->add_option("--n-max", signsearch_args.n_max, "largest permitted matrix dimension")
      ->check(CLI::Range(std::size_t{1}, std::size_t{32}));

  SelftestArgs selftest_args;
  CLI::App* selftest = app.add_subcommand(
      "selftest", "Run the built-in invariant suites");
  selftest->add_flag("--quick", selftest_args.quick, "reduced trial counts");
  selftest->add_flag("--corrupt-ns1", selftest_args.corrupt_ns1)->group("");  // debug hook
  selftest->add_option("--precision", selftest_args.precision, "working precision in bits")
      ->check(CLI::Range(53l, 1l << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);  // prints help or the complaint
    return rc == 0 ? 0 : 2;
  }

  try {
    if (compile->parsed()) return cmd_compile(compile_args);
    if (permanent->parsed()) return cmd_permanent(permanent_args);
    if (recover->parsed()) return cmd_recover(recover_args);
    if (verify->parsed()) return cmd_verify(verify_args);
    if (signsearch->parsed()) return cmd_signsearch(signsearch_args);
    if (selftest->parsed()) return cmd_selftest(selftest_args);
  } catch (const permred::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const permred::BudgetError& e) {
    std::cerr << "budget refusal: " << e.what() << "\n";
    return 3;
  } catch (const permred::VerifyError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
