#pragma once

// Determine Delta_C exactly given only sgn(Delta_C + k): probe k = 0, then
// double |k| until the sign flips, then bisect.  Total oracle calls are
// bounded by 2*ceil(log2(|Delta_C| + 2)) + 4.
//
// The padding C[k] is virtual throughout: the brute backend evaluates
// sgn(delta(C) + k) and the permanent backend sgn(recover(reduce(C)) + k),
// since a padded circuit is only ever observed through its Delta anyway.

#include "permred/boolfunc.hpp"
#include "permred/klm.hpp"
#include "permred/numerics.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace permred {

class SignOracle {
 public:
  enum class Backend { Brute, Permanent };

  explicit SignOracle(Backend backend, Variant variant = Variant::W, std::size_t n_max = 32,
                      Prec p_override = 0);

  // sgn(Delta_C + k) in {-1, 0, +1}.  Every invocation is recorded.
  int sign(const BoolFunc& c, const BigInt& k);

  std::size_t calls() const { return trace_.size(); }
  const std::vector<std::pair<BigInt, int>>& trace() const { return trace_; }
  void reset_trace() { trace_.clear(); }

 private:
  const BigInt& base_delta(const BoolFunc& c);

  Backend backend_;
  Variant variant_;
  std::size_t n_max_;
  Prec p_override_;
  std::map<std::string, BigInt> cache_;  // canonical digest -> Delta
  std::vector<std::pair<BigInt, int>> trace_;
};

// Sign-oracle search.  Probe schedule: k = 0; then k = -1, -2, -4, ... while
// Delta > 0 (mirrored for Delta < 0) until the sign flips or hits zero; then
// integer bisection inside the bracketing power-of-two interval.
BigInt determine_delta(SignOracle& oracle, const BoolFunc& c);

}  // namespace permred
