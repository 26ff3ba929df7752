#include "e6/cx.hpp"

namespace e6 {

Cx operator+(const Cx& a, const Cx& b) { return Cx(a.re + b.re, a.im + b.im); }
Cx operator-(const Cx& a, const Cx& b) { return Cx(a.re - b.re, a.im - b.im); }

Cx operator*(const Cx& a, const Cx& b) {
  return Cx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

Cx operator/(const Cx& a, const Cx& b) {
  Real n = abs2(b);
  return Cx((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
}

Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
Cx operator*(const Cx& a, const Real& b) { return Cx(a.re * b, a.im * b); }
Cx operator*(const Cx& a, long b) { return Cx(a.re * b, a.im * b); }
Cx operator/(const Cx& a, const Real& b) { return Cx(a.re / b, a.im / b); }
Cx operator/(const Cx& a, long b) { return Cx(a.re / b, a.im / b); }

Cx conj(const Cx& a) { return Cx(a.re, -a.im); }
Real abs2(const Cx& a) { return a.re * a.re + a.im * a.im; }
Real cabs(const Cx& a) { return rsqrt(abs2(a)); }

Cx cinv(const Cx& a) {
  Real n = abs2(a);
  return Cx(a.re / n, -a.im / n);
}

Real carg(const Cx& a, Branch br) {
  Real t = ratan2(a.im, a.re);
  Real pi = const_pi(t.prec());
  if (br == Branch::UpperArg) {
    if (t < -(pi / 2)) t = t + pi * 2;
  } else if (br == Branch::LowerArg) {
    if (t > pi / 2) t = t - pi * 2;
  }
  return t;
}

Cx cpow_frac(const Cx& z, long num, long den, Branch br) {
  mpfr_prec_t p = z.prec();
  Real r = cabs(z);
  Real theta = carg(z, br);
  Real e = Real::of(num, p) / Real::of(den, p);
  Real rr = rpow(r, e);
  Real tt = theta * num / den;
  return Cx(rr * rcos(tt), rr * rsin(tt));
}

Cx cpow_int(const Cx& z, long n) {
  mpfr_prec_t p = z.prec();
  if (n == 0) return Cx::of(1, 0, p);
  bool inv = n < 0;
  unsigned long k = inv ? -(unsigned long)n : (unsigned long)n;
  Cx acc = Cx::of(1, 0, p);
  Cx base = z;
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return inv ? cinv(acc) : acc;
}

Real hyp_dist(const Cx& a, const Cx& b) {
  // cosh d = 1 + |a-b|^2 / (2 Im a Im b)
  Real q = abs2(a - b) / (a.im * b.im * 2);
  Real ch = q + 1;
  return rlog(ch + rsqrt(ch * ch - Real::of(1, ch.prec())));
}

Real hyp_dist_disk(const Cx& a, const Cx& b) {
  Cx num = a - b;
  Cx den = Cx::of(1, 0, a.prec()) - conj(a) * b;
  Real r = cabs(num) / cabs(den);
  return ratanh(r) * 2;
}

Cx Mobius::apply(const Cx& z) const { return (a * z + b) / (c * z + d); }

Mobius Mobius::compose(const Mobius& o) const {
  return Mobius{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mobius Mobius::inverse() const { return Mobius{d, -b, -c, a}; }

// Sends (p1, p2, p3) to (0, 1, infinity).
static Mobius to_standard(const Cx& p1, const Cx& p2, const Cx& p3) {
  // z -> ((z - p1)(p2 - p3)) / ((z - p3)(p2 - p1))
  Cx k1 = p2 - p3, k2 = p2 - p1;
  return Mobius{k1, -(p1 * k1), k2, -(p3 * k2)};
}

Mobius mobius_three_points(const Cx& p1, const Cx& p2, const Cx& p3,
                           const Cx& q1, const Cx& q2, const Cx& q3) {
  return to_standard(q1, q2, q3).inverse().compose(to_standard(p1, p2, p3));
}

}  // namespace e6
