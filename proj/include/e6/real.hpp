#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace e6 {

// Working precision is tracked per value, in bits. Binary operations promote
// to the larger operand precision, so a computation seeded at N digits stays
// at N digits throughout.
inline mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(digits * 3.3219280948873623) + 64;
}

class Real {
 public:
  Real() : Real(192) {}
  explicit Real(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  static Real of(long x, mpfr_prec_t bits) { Real r(bits); mpfr_set_si(r.v_, x, MPFR_RNDN); return r; }
  static Real of(const mpz_class& x, mpfr_prec_t bits) { Real r(bits); mpfr_set_z(r.v_, x.get_mpz_t(), MPFR_RNDN); return r; }
  static Real of(const mpq_class& x, mpfr_prec_t bits) { Real r(bits); mpfr_set_q(r.v_, x.get_mpq_t(), MPFR_RNDN); return r; }
  static Real of_double(double x, mpfr_prec_t bits) { Real r(bits); mpfr_set_d(r.v_, x, MPFR_RNDN); return r; }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  int sgn() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  std::string str(int digits = 20) const;

 private:
  mpfr_t v_;
};

inline mpfr_prec_t join_prec(const Real& a, const Real& b) {
  return std::max(a.prec(), b.prec());
}

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
Real operator/(long a, const Real& b);

int cmp(const Real& a, const Real& b);
inline bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
inline bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }
inline bool operator<=(const Real& a, const Real& b) { return cmp(a, b) <= 0; }
inline bool operator>=(const Real& a, const Real& b) { return cmp(a, b) >= 0; }

Real rabs(const Real& a);
Real rsqrt(const Real& a);
Real rexp(const Real& a);
Real rlog(const Real& a);
Real rpow(const Real& a, const Real& b);  // a > 0
Real ratan2(const Real& y, const Real& x);
Real rsin(const Real& a);
Real rcos(const Real& a);
Real rtanh(const Real& a);
Real ratanh(const Real& a);
Real rgamma(const Real& a);
Real rfloor(const Real& a);
Real const_pi(mpfr_prec_t bits);
// 10^(-digits), used as a tolerance.
Real pow10(long digits, mpfr_prec_t bits);

}  // namespace e6
