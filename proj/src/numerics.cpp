#include "permred/numerics.hpp"

#include <cstdio>

namespace permred {

BigInt round_nearest_int(const BigRational& q) {
  // floor division with explicit remainder; tie (2*rem == den) goes away
  // from zero, which for a tie means toward +inf if q > 0 and -inf if q < 0.
  BigInt num = q.get_num(), den = q.get_den();  // den > 0 after canonicalize
  BigInt quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  // q = quot + rem/den with 0 <= rem < den.
  BigInt twice = rem * 2;
  if (twice > den) return quot + 1;
  if (twice < den) return quot;
  // exact half: away from zero
  return (num >= 0) ? quot + 1 : quot;
}

Dyadic round_to_dyadic(const HPReal& x, unsigned long b) {
  // x * 2^b is an exact exponent shift; the single rounding is get_z.
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(x.raw()));
  mpfr_mul_2ui(t, x.raw(), b, MPFR_RNDN);
  BigInt k;
  mpfr_get_z(k.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  return Dyadic(std::move(k), b);
}

Dyadic round_to_dyadic(const HPComplex& x, unsigned long b, const HPReal& im_tol) {
  if (abs(x.im) > im_tol) {
    throw VerifyError("round_to_dyadic: imaginary residue " + abs(x.im).str(6) +
                      " exceeds tolerance " + im_tol.str(6) +
                      " (value must be real)");
  }
  return round_to_dyadic(x.re, b);
}

BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt pow2_int(unsigned long e) {
  BigInt r(1);
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), e);
  return r;
}

unsigned long ceil_log2(const BigInt& x) {
  if (x < 1) throw std::invalid_argument("ceil_log2: argument must be >= 1");
  size_t bits = mpz_sizeinbase(x.get_mpz_t(), 2);  // floor(log2 x) + 1
  bool pow_of_two = mpz_popcount(x.get_mpz_t()) == 1;
  return pow_of_two ? bits - 1 : bits;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& s) {
  std::uint64_t h = fnv1a64(s);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

}  // namespace permred
