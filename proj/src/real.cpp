#include "e6/real.hpp"

#include <cstdlib>
#include <vector>

namespace e6 {

std::string Real::str(int digits) const {
  if (mpfr_zero_p(v_)) return "0";
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
  std::string mant(s);
  mpfr_free_str(s);
  std::string sign;
  if (!mant.empty() && mant[0] == '-') { sign = "-"; mant = mant.substr(1); }
  return sign + "0." + mant + "e" + std::to_string(e);
}

#define E6_BINOP(name, fn)                                     \
  Real name(const Real& a, const Real& b) {                    \
    Real r(join_prec(a, b));                                   \
    fn(r.raw(), a.raw(), b.raw(), MPFR_RNDN);                  \
    return r;                                                  \
  }

E6_BINOP(operator+, mpfr_add)
E6_BINOP(operator-, mpfr_sub)
E6_BINOP(operator*, mpfr_mul)
E6_BINOP(operator/, mpfr_div)
E6_BINOP(rpow, mpfr_pow)
E6_BINOP(ratan2, mpfr_atan2)
#undef E6_BINOP

Real operator-(const Real& a) { Real r(a.prec()); mpfr_neg(r.raw(), a.raw(), MPFR_RNDN); return r; }
Real operator+(const Real& a, long b) { Real r(a.prec()); mpfr_add_si(r.raw(), a.raw(), b, MPFR_RNDN); return r; }
Real operator-(const Real& a, long b) { Real r(a.prec()); mpfr_sub_si(r.raw(), a.raw(), b, MPFR_RNDN); return r; }
Real operator*(const Real& a, long b) { Real r(a.prec()); mpfr_mul_si(r.raw(), a.raw(), b, MPFR_RNDN); return r; }
Real operator/(const Real& a, long b) { Real r(a.prec()); mpfr_div_si(r.raw(), a.raw(), b, MPFR_RNDN); return r; }
Real operator/(long a, const Real& b) { Real r(b.prec()); mpfr_si_div(r.raw(), a, b.raw(), MPFR_RNDN); return r; }

int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()); }

#define E6_UNOP(name, fn) \
  Real name(const Real& a) { Real r(a.prec()); fn(r.raw(), a.raw(), MPFR_RNDN); return r; }

E6_UNOP(rabs, mpfr_abs)
E6_UNOP(rsqrt, mpfr_sqrt)
E6_UNOP(rexp, mpfr_exp)
E6_UNOP(rlog, mpfr_log)
E6_UNOP(rsin, mpfr_sin)
E6_UNOP(rcos, mpfr_cos)
E6_UNOP(rtanh, mpfr_tanh)
E6_UNOP(ratanh, mpfr_atanh)
E6_UNOP(rgamma, mpfr_gamma)
#undef E6_UNOP

Real rfloor(const Real& a) {
  Real r(a.prec());
  mpfr_floor(r.raw(), a.raw());
  return r;
}

Real const_pi(mpfr_prec_t bits) { Real r(bits); mpfr_const_pi(r.raw(), MPFR_RNDN); return r; }

Real pow10(long digits, mpfr_prec_t bits) {
  Real r(bits);
  mpfr_set_si(r.raw(), 10, MPFR_RNDN);
  mpfr_pow_si(r.raw(), r.raw(), -digits, MPFR_RNDN);
  return r;
}

}  // namespace e6
