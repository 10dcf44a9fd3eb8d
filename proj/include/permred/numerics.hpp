#pragma once

// Scalar types shared by the whole pipeline.
//
// Exact types are GMP (BigInt / BigRational).  High-precision floating point
// is MPFR wrapped in a thin RAII class that carries its precision *in bits*
// explicitly, because every tolerance in this codebase is stated as a power
// of two relative to the working precision p (e.g. 2^(-p+40)).

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace permred {

using BigInt = mpz_class;
using BigRational = mpq_class;
using Prec = mpfr_prec_t;

inline constexpr Prec kDefaultPrec = 128;

// Input that does not conform to a text format.  Message includes a line
// number where one is known.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance exceeds a documented size bound; refused up front with a cost
// estimate instead of silently running for hours.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A checked identity or cross-check failed (or a value that must be real
// carries an imaginary residue).  Indicates a bug or corrupted input, never
// a rounding artifact within documented tolerances.
struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// HPReal: arbitrary-precision real, explicit bit precision, round-to-nearest.

class HPReal {
 public:
  HPReal() : HPReal(kDefaultPrec) {}
  explicit HPReal(Prec p) {
    mpfr_init2(v_, p);
    mpfr_set_zero(v_, 1);
  }
  HPReal(long x, Prec p) {
    mpfr_init2(v_, p);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  HPReal(const HPReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  HPReal(HPReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  HPReal& operator=(const HPReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  HPReal& operator=(HPReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~HPReal() { mpfr_clear(v_); }

  static HPReal from_double(double x, Prec p) {
    HPReal r(p);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
  }
  static HPReal from_bigint(const BigInt& x, Prec p) {
    HPReal r(p);
    mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  static HPReal from_rational(const BigRational& x, Prec p) {
    HPReal r(p);
    mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  // num / den, correctly rounded once (not as two roundings).
  static HPReal from_ratio(const BigInt& num, const BigInt& den, Prec p) {
    return from_rational(BigRational(num, den), p);
  }
  // Exact power of two; representable at any precision.
  static HPReal pow2(long e, Prec p) {
    HPReal r(p);
    mpfr_set_si_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }
  static HPReal pi(Prec p) {
    HPReal r(p);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static HPReal sqrt_ui(unsigned long x, Prec p) {
    HPReal r(p);
    mpfr_sqrt_ui(r.v_, x, MPFR_RNDN);
    return r;
  }

  Prec prec() const { return mpfr_get_prec(v_); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Nearest integer, ties away from zero (matches mpfr_round).
  BigInt round_to_bigint() const {
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(v_) + 8);
    mpfr_round(t, v_);
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return z;
  }

  HPReal& operator+=(const HPReal& o) { return apply2(o, mpfr_add); }
  HPReal& operator-=(const HPReal& o) { return apply2(o, mpfr_sub); }
  HPReal& operator*=(const HPReal& o) { return apply2(o, mpfr_mul); }
  HPReal& operator/=(const HPReal& o) { return apply2(o, mpfr_div); }

  friend HPReal operator+(HPReal a, const HPReal& b) { return a += b; }
  friend HPReal operator-(HPReal a, const HPReal& b) { return a -= b; }
  friend HPReal operator*(HPReal a, const HPReal& b) { return a *= b; }
  friend HPReal operator/(HPReal a, const HPReal& b) { return a /= b; }
  friend HPReal operator-(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend int cmp(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const HPReal& a, const HPReal& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const HPReal& a, const HPReal& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const HPReal& a, const HPReal& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const HPReal& a, const HPReal& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const HPReal& a, const HPReal& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const HPReal& a, const HPReal& b) { return cmp(a, b) != 0; }

  friend HPReal abs(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend HPReal sqrt(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend HPReal cos(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_cos(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend HPReal sin(const HPReal& a) {
    HPReal r(a.prec());
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  // a * 2^e, exact (exponent shift only).
  friend HPReal mul_2exp(const HPReal& a, long e) {
    HPReal r(a.prec());
    mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }

  std::string str(size_t digits = 20) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  // Raw handle for the rare call not wrapped above (kept const-correct by
  // convention: callers must not reassign precision).
  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  using Fn2 = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  HPReal& apply2(const HPReal& o, Fn2 fn) {
    Prec p = std::max(prec(), o.prec());
    if (p != prec()) {
      HPReal widened(p);
      mpfr_set(widened.v_, v_, MPFR_RNDN);
      mpfr_swap(v_, widened.v_);
    }
    fn(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  mpfr_t v_;
};

// ---------------------------------------------------------------------------
// HPComplex: pair of HPReals.  Enough arithmetic for unitaries and amplitudes.

class HPComplex {
 public:
  HPComplex() : re(), im() {}
  explicit HPComplex(Prec p) : re(p), im(p) {}
  HPComplex(HPReal r, HPReal i) : re(std::move(r)), im(std::move(i)) {}
  HPComplex(long r, Prec p) : re(r, p), im(p) {}
  static HPComplex zero(Prec p) { return HPComplex(p); }
  static HPComplex one(Prec p) { return HPComplex(1, p); }

  Prec prec() const { return std::max(re.prec(), im.prec()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  HPComplex& operator+=(const HPComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  HPComplex& operator-=(const HPComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  HPComplex& operator*=(const HPComplex& o) {
    HPReal r = re * o.re - im * o.im;
    HPReal i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend HPComplex operator+(HPComplex a, const HPComplex& b) { return a += b; }
  friend HPComplex operator-(HPComplex a, const HPComplex& b) { return a -= b; }
  friend HPComplex operator*(HPComplex a, const HPComplex& b) { return a *= b; }
  friend HPComplex operator-(const HPComplex& a) { return HPComplex(-a.re, -a.im); }
  friend HPComplex operator*(const HPReal& s, HPComplex a) {
    a.re *= s;
    a.im *= s;
    return a;
  }
  friend HPComplex conj(const HPComplex& a) { return HPComplex(a.re, -a.im); }

  HPReal abs2() const { return re * re + im * im; }
  HPReal abs() const { return sqrt(abs2()); }

  std::string str(size_t digits = 20) const {
    return "(" + re.str(digits) + ", " + im.str(digits) + ")";
  }

  HPReal re, im;
};

// max(|dRe|, |dIm|): the entrywise distance used by every matrix check.
// (Free function: inside the class the abs() member would shadow HPReal's.)
inline HPReal max_abs_diff(const HPComplex& a, const HPComplex& b) {
  HPReal dr = abs(a.re - b.re), di = abs(a.im - b.im);
  return dr >= di ? dr : di;
}

// ---------------------------------------------------------------------------
// Dyadic: exact num / 2^exp.  Matrices produced by truncation share one
// denominator exponent b, so construction does NOT normalize; equality is by
// value, and canonical() strips factors of two (numerator odd or zero).

struct Dyadic {
  BigInt num;
  unsigned long exp = 0;  // denominator is 2^exp

  Dyadic() : num(0) {}
  Dyadic(BigInt n, unsigned long e) : num(std::move(n)), exp(e) {}
  explicit Dyadic(long n) : num(n) {}

  Dyadic canonical() const {
    if (num == 0) return Dyadic(BigInt(0), 0);
    unsigned long tz = mpz_scan1(num.get_mpz_t(), 0);
    unsigned long s = std::min(tz, exp);
    Dyadic r;
    mpz_tdiv_q_2exp(r.num.get_mpz_t(), num.get_mpz_t(), s);
    r.exp = exp - s;
    return r;
  }

  BigRational to_rational() const {
    BigInt den(1);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), exp);
    BigRational q(num, den);
    q.canonicalize();
    return q;
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    unsigned long e = std::max(a.exp, b.exp);
    BigInt an, bn;
    mpz_mul_2exp(an.get_mpz_t(), a.num.get_mpz_t(), e - a.exp);
    mpz_mul_2exp(bn.get_mpz_t(), b.num.get_mpz_t(), e - b.exp);
    return Dyadic(an + bn, e);
  }
  friend Dyadic operator-(const Dyadic& a) { return Dyadic(-a.num, a.exp); }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(a.num * b.num, a.exp + b.exp);
  }
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    if (a.exp == b.exp) return a.num == b.num;
    unsigned long e = std::max(a.exp, b.exp);
    BigInt an, bn;
    mpz_mul_2exp(an.get_mpz_t(), a.num.get_mpz_t(), e - a.exp);
    mpz_mul_2exp(bn.get_mpz_t(), b.num.get_mpz_t(), e - b.exp);
    return an == bn;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
};

// ---------------------------------------------------------------------------
// Rounding.

// Nearest integer to an exact rational; ties round away from zero
// (round(3/2) = 2, round(-3/2) = -2).
BigInt round_nearest_int(const BigRational& q);

// Nearest multiple of 2^-b to x, returned with the shared exponent b kept
// as-is (no canonicalization).  |result - x| <= 2^-(b+1).
Dyadic round_to_dyadic(const HPReal& x, unsigned long b);

// Same, for a value that must be real: rejects |Im x| > im_tol.
Dyadic round_to_dyadic(const HPComplex& x, unsigned long b, const HPReal& im_tol);

// ---------------------------------------------------------------------------
// Small integer helpers.

BigInt factorial(unsigned long n);
BigInt pow2_int(unsigned long e);
// ceil(log2(x)) for x >= 1.
unsigned long ceil_log2(const BigInt& x);

// FNV-1a 64-bit digest; used to fingerprint canonical function text.
std::uint64_t fnv1a64(const std::string& s);
std::string fnv1a64_hex(const std::string& s);

}  // namespace permred
