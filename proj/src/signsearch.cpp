#include "permred/signsearch.hpp"

#include "permred/reduce.hpp"

namespace permred {

SignOracle::SignOracle(Backend backend, Variant variant, std::size_t n_max, Prec p_override)
    : backend_(backend), variant_(variant), n_max_(n_max), p_override_(p_override) {}

const BigInt& SignOracle::base_delta(const BoolFunc& c) {
  std::string key = provenance_digest(c) + (backend_ == Backend::Brute ? ":brute" : variant_name(variant_));
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  BigInt value;
  if (backend_ == Backend::Brute) {
    value = delta(c);
  } else {
    ReduceResult r = reduce(c, variant_, p_override_);
    if (r.inst.N > n_max_) {
      throw BudgetError("SignOracle: permanent backend needs N = " + std::to_string(r.inst.N) +
                        " <= " + std::to_string(n_max_));
    }
    value = recover(r.inst, n_max_);
  }
  return cache_.emplace(std::move(key), std::move(value)).first->second;
}

int SignOracle::sign(const BoolFunc& c, const BigInt& k) {
  BigInt shifted = base_delta(c) + k;  // Delta of the virtual pad C[k]
  int s = sgn(shifted);
  trace_.emplace_back(k, s);
  return s;
}

BigInt determine_delta(SignOracle& oracle, const BoolFunc& c) {
  int s0 = oracle.sign(c, BigInt(0));
  if (s0 == 0) return BigInt(0);

  // Work with |Delta|: for positive Delta probe k = -2^t, for negative
  // k = +2^t; in both cases the probed quantity is sgn(|Delta| - 2^t) * s0.
  auto probe = [&](const BigInt& magnitude) -> int {
    BigInt k = s0 > 0 ? BigInt(-magnitude) : magnitude;
    return oracle.sign(c, k) * s0;  // sgn(|Delta| - magnitude)
  };

  BigInt lo = 0;       // sgn(|Delta| - lo) > 0 throughout
  BigInt hi = 1;
  while (true) {
    int s = probe(hi);
    if (s == 0) return s0 > 0 ? hi : BigInt(-hi);
    if (s < 0) break;  // |Delta| < hi: bracket found
    lo = hi;
    hi <<= 1;
  }

  // invariant: lo < |Delta| < hi
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) >> 1;
    int s = probe(mid);
    if (s == 0) return s0 > 0 ? mid : BigInt(-mid);
    if (s > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // An integer strictly between lo and hi = lo + 1 cannot exist; the zero
  // case above must have fired.
  throw VerifyError("determine_delta: bisection collapsed without hitting zero "
                    "(oracle signs are inconsistent)");
}

}  // namespace permred
