#pragma once

#include "e6/real.hpp"

namespace e6 {

// Complex numbers over Real. MPFR has no complex type on this toolchain, so
// we carry the handful of operations the uniformizer needs.
struct Cx {
  Real re, im;

  Cx() : Cx(mpfr_prec_t(192)) {}
  explicit Cx(mpfr_prec_t bits) : re(bits), im(bits) {}
  Cx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  static Cx of(long r, long i, mpfr_prec_t bits) { return Cx(Real::of(r, bits), Real::of(i, bits)); }
  static Cx of(const Real& r) { return Cx(r, Real(r.prec())); }

  mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  std::string str(int digits = 20) const { return re.str(digits) + " + " + im.str(digits) + "*I"; }
};

Cx operator+(const Cx& a, const Cx& b);
Cx operator-(const Cx& a, const Cx& b);
Cx operator*(const Cx& a, const Cx& b);
Cx operator/(const Cx& a, const Cx& b);
Cx operator-(const Cx& a);
Cx operator*(const Cx& a, const Real& b);
Cx operator*(const Cx& a, long b);
Cx operator/(const Cx& a, const Real& b);
Cx operator/(const Cx& a, long b);

Cx conj(const Cx& a);
Real abs2(const Cx& a);
Real cabs(const Cx& a);
Cx cinv(const Cx& a);

// Branch cut selection for arg and fractional powers.
//   Std:      arg in (-pi, pi]           cut on the negative real axis
//   UpperArg: arg in [-pi/2, 3pi/2)      cut on the negative imaginary axis
//   LowerArg: arg in (-3pi/2, pi/2]      cut on the positive imaginary axis
enum class Branch { Std, UpperArg, LowerArg };

Real carg(const Cx& a, Branch br = Branch::Std);
// z^(num/den) on the chosen branch; z must be nonzero.
Cx cpow_frac(const Cx& z, long num, long den, Branch br);
// z^n for integer n (exact repeated squaring on Cx).
Cx cpow_int(const Cx& z, long n);

// Hyperbolic distance between points of the upper half plane.
Real hyp_dist(const Cx& a, const Cx& b);
// Hyperbolic distance between points of the unit disk.
Real hyp_dist_disk(const Cx& a, const Cx& b);

// 2x2 complex matrix acting by Mobius transformations.
struct Mobius {
  Cx a, b, c, d;
  Cx apply(const Cx& z) const;
  Mobius compose(const Mobius& o) const;  // this after o
  Mobius inverse() const;
};

// The Mobius map sending (p1, p2, p3) to (q1, q2, q3).
Mobius mobius_three_points(const Cx& p1, const Cx& p2, const Cx& p3,
                           const Cx& q1, const Cx& q2, const Cx& q3);

}  // namespace e6
