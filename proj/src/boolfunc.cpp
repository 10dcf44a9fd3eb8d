#include "permred/boolfunc.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace permred {

namespace {

void check_n(int n) {
  if (n < 1 || n > 24) {
    throw BudgetError("BoolFunc: n = " + std::to_string(n) +
                      " outside [1, 24] (Delta oracle is brute force over 2^n)");
  }
}

}  // namespace

BoolFunc BoolFunc::truth_table(int n, std::vector<int8_t> values) {
  check_n(n);
  if (values.size() != (std::size_t(1) << n)) {
    throw std::invalid_argument("truth_table: expected 2^n = " +
                                std::to_string(std::size_t(1) << n) + " values, got " +
                                std::to_string(values.size()));
  }
  for (int8_t v : values) {
    if (v != 1 && v != -1) throw std::invalid_argument("truth_table: values must be +1 or -1");
  }
  BoolFunc f;
  f.n_ = n;
  f.repr_ = Repr::TruthTable;
  f.values_ = std::move(values);
  return f;
}

BoolFunc BoolFunc::phase_poly(int n, std::vector<Monomial> monomials) {
  check_n(n);
  std::sort(monomials.begin(), monomials.end());
  for (std::size_t t = 0; t < monomials.size(); ++t) {
    const auto& vars = monomials[t].vars;
    if (vars.empty() || vars.size() > 3) {
      throw std::invalid_argument("phase_poly: monomial degree must be 1..3");
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] < 1 || vars[i] > n) throw std::invalid_argument("phase_poly: variable out of range");
      if (i && vars[i] <= vars[i - 1]) {
        throw std::invalid_argument("phase_poly: monomial variables must be distinct");
      }
    }
    if (t && monomials[t] == monomials[t - 1]) {
      throw std::invalid_argument("phase_poly: duplicate monomial (a monomial set has no repeats)");
    }
  }
  BoolFunc f;
  f.n_ = n;
  f.repr_ = Repr::PhasePoly;
  f.monomials_ = std::move(monomials);
  return f;
}

BoolFunc BoolFunc::network(int n, std::vector<NetWire> wires, NetArg output) {
  check_n(n);
  auto check_arg = [&](const NetArg& arg, std::size_t wire_pos) {
    if (arg.kind == NetArg::Kind::Input) {
      if (arg.index < 1 || arg.index > n) throw std::invalid_argument("network: input out of range");
    } else {
      if (arg.index < 0 || std::size_t(arg.index) >= wire_pos) {
        throw std::invalid_argument("network: wire argument must reference an earlier wire");
      }
    }
  };
  for (std::size_t w = 0; w < wires.size(); ++w) {
    check_arg(wires[w].a, w);
    if (wires[w].op != GateOp::Not) check_arg(wires[w].b, w);
  }
  check_arg(output, wires.size());
  BoolFunc f;
  f.n_ = n;
  f.repr_ = Repr::Network;
  f.wires_ = std::move(wires);
  f.output_ = output;
  return f;
}

bool BoolFunc::eval_bit(std::uint32_t x) const {
  auto input_bit = [&](int i) -> bool { return (x >> (n_ - i)) & 1; };
  switch (repr_) {
    case Repr::TruthTable:
      return values_[x] < 0;
    case Repr::PhasePoly: {
      bool f = false;
      for (const Monomial& mono : monomials_) {
        bool prod = true;
        for (int v : mono.vars) prod = prod && input_bit(v);
        f ^= prod;
      }
      return f;
    }
    case Repr::Network: {
      // Feed-forward evaluation; OR is lowered to AND/NOT (De Morgan) so the
      // quantum compiler and this oracle share one semantics for OR.
      std::vector<bool> wire_val(wires_.size());
      auto arg_val = [&](const NetArg& arg) -> bool {
        return arg.kind == NetArg::Kind::Input ? input_bit(arg.index) : wire_val[arg.index];
      };
      for (std::size_t w = 0; w < wires_.size(); ++w) {
        bool a = arg_val(wires_[w].a);
        switch (wires_[w].op) {
          case GateOp::And:
            wire_val[w] = a && arg_val(wires_[w].b);
            break;
          case GateOp::Or:
            wire_val[w] = !(!a && !arg_val(wires_[w].b));
            break;
          case GateOp::Xor:
            wire_val[w] = a != arg_val(wires_[w].b);
            break;
          case GateOp::Not:
            wire_val[w] = !a;
            break;
        }
      }
      return arg_val(output_);
    }
  }
  return false;
}

BigInt delta(const BoolFunc& c) {
  int n = c.n();
  if (n > 24) throw BudgetError("delta: n > 24");  // unreachable past the ctor; kept as a guard
  std::uint64_t count = std::uint64_t(1) << n;

  // Fixed chunk layout (function of n only) with ascending combination order,
  // matching the Ryser kernel's determinism contract.
  std::size_t nchunks = n <= 16 ? 1 : 64;
  std::vector<long long> partial(nchunks, 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long ch = 0; ch < static_cast<long long>(nchunks); ++ch) {
    std::uint64_t lo = count * ch / nchunks;
    std::uint64_t hi = count * (ch + 1) / nchunks;
    long long acc = 0;
    for (std::uint64_t x = lo; x < hi; ++x) acc += c.eval(static_cast<std::uint32_t>(x));
    partial[ch] = acc;
  }

  BigInt total = 0;
  for (std::size_t ch = 0; ch < nchunks; ++ch) total += static_cast<long>(partial[ch]);
  return total;
}

PaddedFunc pad(const BoolFunc& c, BigInt k) { return PaddedFunc{c, std::move(k)}; }

BigInt delta(const PaddedFunc& c) { return delta(c.base) + c.k; }

// --- .bf text format --------------------------------------------------------

namespace {

struct Line {
  int number;  // 1-based
  std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError(".bf line " + std::to_string(line) + ": " + msg);
}

// Strip comments, split into whitespace-separated tokens, drop blank lines.
// The one exception: a truth-table payload line is a single token anyway.
std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

int parse_int(const Line& line, const std::string& tok, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(line.number, std::string("expected integer for ") + what + ", got '" + tok + "'");
  }
}

}  // namespace

BoolFunc parse_boolfunc(const std::string& text) {
  std::vector<Line> lines = tokenize(text);
  std::size_t pos = 0;
  auto need = [&](const char* what) -> const Line& {
    if (pos >= lines.size()) {
      int ln = lines.empty() ? 1 : lines.back().number;
      fail(ln, std::string("unexpected end of input, expected ") + what);
    }
    return lines[pos++];
  };

  const Line& hline = need("header 'n <int>'");
  if (hline.tokens.size() != 2 || hline.tokens[0] != "n") {
    fail(hline.number, "expected header 'n <int>'");
  }
  int n = parse_int(hline, hline.tokens[1], "n");
  if (n < 1 || n > 24) fail(hline.number, "n = " + std::to_string(n) + " outside [1, 24]");

  const Line& rline = need("header 'repr table|phasepoly|network'");
  if (rline.tokens.size() != 2 || rline.tokens[0] != "repr") {
    fail(rline.number, "expected header 'repr table|phasepoly|network'");
  }
  const std::string& repr = rline.tokens[1];

  auto expect_end = [&]() {
    if (pos < lines.size()) fail(lines[pos].number, "unexpected trailing content");
  };

  if (repr == "table") {
    const Line& tline = need("truth-table line");
    if (tline.tokens.size() != 1) fail(tline.number, "truth table must be a single run of +/- characters");
    const std::string& s = tline.tokens[0];
    std::vector<int8_t> values;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '+') {
        values.push_back(1);
      } else if (s[i] == '-') {
        values.push_back(-1);
      } else if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
                 static_cast<unsigned char>(s[i + 1]) == 0x88 &&
                 static_cast<unsigned char>(s[i + 2]) == 0x92) {
        values.push_back(-1);  // U+2212 MINUS SIGN, tolerated on input
        i += 2;
      } else {
        fail(tline.number, std::string("invalid truth-table character '") + s[i] + "'");
      }
    }
    if (values.size() != (std::size_t(1) << n)) {
      fail(tline.number, "truth table has " + std::to_string(values.size()) + " entries, expected 2^" +
                             std::to_string(n) + " = " + std::to_string(std::size_t(1) << n));
    }
    expect_end();
    return BoolFunc::truth_table(n, std::move(values));
  }

  if (repr == "phasepoly") {
    std::vector<Monomial> monomials;
    std::vector<int> seen_lines;
    while (pos < lines.size()) {
      const Line& line = lines[pos++];
      if (line.tokens[0] != "term") fail(line.number, "expected 'term <i> [<j> [<k>]]'");
      if (line.tokens.size() < 2 || line.tokens.size() > 4) {
        fail(line.number, "monomial degree must be 1..3 (got " + std::to_string(line.tokens.size() - 1) +
                              " variables)");
      }
      Monomial mono;
      for (std::size_t t = 1; t < line.tokens.size(); ++t) {
        int v = parse_int(line, line.tokens[t], "variable index");
        if (v < 1 || v > n) fail(line.number, "variable x" + std::to_string(v) + " out of range [1, n]");
        mono.vars.push_back(v);
      }
      std::sort(mono.vars.begin(), mono.vars.end());
      for (std::size_t t = 1; t < mono.vars.size(); ++t) {
        if (mono.vars[t] == mono.vars[t - 1]) fail(line.number, "repeated variable in monomial");
      }
      for (std::size_t t = 0; t < monomials.size(); ++t) {
        if (monomials[t] == mono) {
          fail(line.number, "duplicate monomial (already given on line " +
                                std::to_string(seen_lines[t]) + ")");
        }
      }
      monomials.push_back(std::move(mono));
      seen_lines.push_back(line.number);
    }
    return BoolFunc::phase_poly(n, std::move(monomials));
  }

  if (repr == "network") {
    std::vector<NetWire> wires;
    std::map<std::string, int> wire_index;
    auto resolve = [&](const Line& line, const std::string& name) -> NetArg {
      if (name.size() >= 2 && name[0] == 'x' &&
          std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(c); })) {
        int idx = parse_int(line, name.substr(1), "input index");
        if (idx < 1 || idx > n) fail(line.number, "input " + name + " out of range (n = " + std::to_string(n) + ")");
        return NetArg{NetArg::Kind::Input, idx};
      }
      auto it = wire_index.find(name);
      if (it == wire_index.end()) {
        fail(line.number, "unknown name '" + name + "' (wires must be defined before use)");
      }
      return NetArg{NetArg::Kind::Wire, it->second};
    };

    bool have_output = false;
    NetArg output;
    while (pos < lines.size()) {
      const Line& line = lines[pos++];
      if (line.tokens[0] == "output") {
        if (line.tokens.size() != 2) fail(line.number, "expected 'output <name>'");
        output = resolve(line, line.tokens[1]);
        have_output = true;
        if (pos < lines.size()) fail(lines[pos].number, "content after 'output' line");
        break;
      }
      if (line.tokens[0] != "wire") fail(line.number, "expected 'wire <name> = <GATE> <arg> [<arg>]'");
      if (line.tokens.size() < 5 || line.tokens[2] != "=") {
        fail(line.number, "expected 'wire <name> = <GATE> <arg> [<arg>]'");
      }
      const std::string& name = line.tokens[1];
      if (wire_index.count(name)) fail(line.number, "wire '" + name + "' redefined");
      if (name.size() >= 2 && name[0] == 'x' && std::isdigit(static_cast<unsigned char>(name[1]))) {
        fail(line.number, "wire name '" + name + "' collides with input naming");
      }
      const std::string& gate = line.tokens[3];
      NetWire wire;
      wire.name = name;
      std::size_t arity;
      if (gate == "AND") {
        wire.op = GateOp::And;
        arity = 2;
      } else if (gate == "OR") {
        wire.op = GateOp::Or;
        arity = 2;
      } else if (gate == "XOR") {
        wire.op = GateOp::Xor;
        arity = 2;
      } else if (gate == "NOT") {
        wire.op = GateOp::Not;
        arity = 1;
      } else {
        fail(line.number, "unknown gate '" + gate + "' (expected AND, OR, XOR, NOT)");
      }
      if (line.tokens.size() != 4 + arity) {
        fail(line.number, gate + " takes " + std::to_string(arity) + " argument(s)");
      }
      wire.a = resolve(line, line.tokens[4]);
      if (arity == 2) wire.b = resolve(line, line.tokens[5]);
      wire_index[name] = static_cast<int>(wires.size());
      wires.push_back(std::move(wire));
    }
    if (!have_output) {
      int ln = lines.empty() ? 1 : lines.back().number;
      fail(ln, "network is missing its 'output <name>' line");
    }
    return BoolFunc::network(n, std::move(wires), output);
  }

  fail(rline.number, "unknown repr '" + repr + "' (expected table, phasepoly, or network)");
}

std::string write_boolfunc(const BoolFunc& c) {
  std::ostringstream out;
  out << "n " << c.n() << "\n";
  switch (c.repr()) {
    case BoolFunc::Repr::TruthTable: {
      out << "repr table\n";
      for (int8_t v : c.values()) out << (v > 0 ? '+' : '-');
      out << "\n";
      break;
    }
    case BoolFunc::Repr::PhasePoly: {
      out << "repr phasepoly\n";
      for (const Monomial& mono : c.monomials()) {  // stored sorted
        out << "term";
        for (int v : mono.vars) out << ' ' << v;
        out << "\n";
      }
      break;
    }
    case BoolFunc::Repr::Network: {
      out << "repr network\n";
      auto arg_name = [&](const NetArg& arg) {
        return arg.kind == NetArg::Kind::Input ? "x" + std::to_string(arg.index)
                                               : c.wires()[arg.index].name;
      };
      for (const NetWire& w : c.wires()) {
        const char* gate = w.op == GateOp::And   ? "AND"
                           : w.op == GateOp::Or  ? "OR"
                           : w.op == GateOp::Xor ? "XOR"
                                                 : "NOT";
        out << "wire " << w.name << " = " << gate << ' ' << arg_name(w.a);
        if (w.op != GateOp::Not) out << ' ' << arg_name(w.b);
        out << "\n";
      }
      out << "output " << arg_name(c.output()) << "\n";
      break;
    }
  }
  return out.str();
}

std::string provenance_digest(const BoolFunc& c) { return fnv1a64_hex(write_boolfunc(c)); }

BoolFunc to_truth_table(const BoolFunc& c) {
  if (c.n() > 20) throw BudgetError("to_truth_table: n > 20 would materialize > 1M entries");
  std::uint64_t count = std::uint64_t(1) << c.n();
  std::vector<int8_t> values(count);
  for (std::uint64_t x = 0; x < count; ++x) {
    values[x] = static_cast<int8_t>(c.eval(static_cast<std::uint32_t>(x)));
  }
  return BoolFunc::truth_table(c.n(), std::move(values));
}

}  // namespace permred
