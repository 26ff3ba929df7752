#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace e6 {

// Dense univariate polynomial over Q, coefficients ascending, no trailing
// zero coefficients (zero polynomial has empty coefficient vector).
struct QPoly {
  std::vector<mpq_class> c;

  QPoly() = default;
  explicit QPoly(std::vector<mpq_class> coeffs);

  static QPoly x();
  static QPoly constant(const mpq_class& v);
  static QPoly from_z(const std::vector<mpz_class>& coeffs);

  bool is_zero() const { return c.empty(); }
  int degree() const { return int(c.size()) - 1; }  // -1 for zero
  const mpq_class& lead() const { return c.back(); }
  mpq_class coeff(int i) const { return (i >= 0 && i < (int)c.size()) ? c[i] : mpq_class(0); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }

  mpq_class eval(const mpq_class& x) const;
  int sign_at(const mpq_class& x) const { return sgn(eval(x)); }
  int sign_at_minus_inf() const;
  int sign_at_plus_inf() const;

  QPoly derivative() const;
  void normalize();
};

bool operator==(const QPoly& a, const QPoly& b);
QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator*(const QPoly& a, const QPoly& b);
QPoly operator*(const QPoly& a, const mpq_class& s);
// Euclidean division; b nonzero.
void divmod(const QPoly& a, const QPoly& b, QPoly* q, QPoly* r);
QPoly poly_gcd(const QPoly& a, const QPoly& b);  // monic gcd
QPoly squarefree_part(const QPoly& a);
// f(u*x + v)
QPoly compose_affine(const QPoly& f, const mpq_class& u, const mpq_class& v);
std::string poly_to_string(const QPoly& f, const std::string& var = "x");

// Exact resultant Res_x(a, b) via fraction-free Gaussian elimination of the
// Sylvester matrix.
mpq_class resultant(const QPoly& a, const QPoly& b);

// ---- Real root machinery (Sturm sequences, exact endpoints) ----

struct SturmChain {
  std::vector<QPoly> seq;  // seq[0] squarefree
  explicit SturmChain(const QPoly& f);
  int variations_at(const mpq_class& x) const;
  int variations_at_minus_inf() const;
  int variations_at_plus_inf() const;
  // Number of distinct real roots in (a, b]; requires sqfree(a) != 0 at a.
  int count_half_open(const mpq_class& a, const mpq_class& b) const;
};

// Distinct real roots of f in the open interval (a, b); endpoints must not be
// roots. Use the infinite variants for unbounded intervals.
int count_roots_open(const QPoly& f, const mpq_class& a, const mpq_class& b);
int count_roots_below(const QPoly& f, const mpq_class& b);   // (-inf, b)
int count_roots_above(const QPoly& f, const mpq_class& a);   // (a, +inf)
int count_real_roots(const QPoly& f);

// Isolating intervals (lo, hi) for the distinct real roots of f, in
// increasing order; f nonzero at every endpoint.
std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const QPoly& f);
// Shrinks an isolating interval until hi - lo <= width.
std::pair<mpq_class, mpq_class> refine_root(const QPoly& f, std::pair<mpq_class, mpq_class> iv,
                                            const mpq_class& width);

// ---- Polynomials over F_l (l odd prime, fits in 62 bits) ----

struct FpPoly {
  uint64_t l;
  std::vector<uint64_t> c;  // ascending, trimmed
  int degree() const { return int(c.size()) - 1; }
  void trim();
};

// Reduction; throws if a denominator vanishes mod l.
FpPoly fp_from_qpoly(const QPoly& f, uint64_t l);
FpPoly fp_from_z(const std::vector<mpz_class>& coeffs, uint64_t l);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b);
FpPoly fp_mod(const FpPoly& a, const FpPoly& b);
FpPoly fp_gcd(FpPoly a, FpPoly b);  // monic
FpPoly fp_deriv(const FpPoly& a);
FpPoly fp_divexact(const FpPoly& a, const FpPoly& b);
uint64_t fp_eval(const FpPoly& a, uint64_t x);
FpPoly fp_make_monic(const FpPoly& a);

// Product of the odd-multiplicity squarefree factors (Yun decomposition).
// Requires deg a < l.
FpPoly fp_odd_multiplicity_part(const FpPoly& a);

// ---- Newton polygon ----

// Valuations of the roots of f (in an algebraic closure of Q_q) with
// multiplicities, from the lower Newton polygon; f(0) != 0 required.
std::vector<std::pair<mpq_class, int>> newton_polygon_root_valuations(const QPoly& f,
                                                                      const mpz_class& q);

}  // namespace e6
