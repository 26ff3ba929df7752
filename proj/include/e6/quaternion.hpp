#pragma once

#include <gmpxx.h>

#include <array>
#include <vector>

#include "e6/cx.hpp"
#include "e6/real.hpp"

namespace e6 {

// Element of the quaternion algebra (-1, 3 / Q) in the basis 1, i, j, ij
// with i^2 = -1, j^2 = 3, ij = -ji. This algebra is ramified exactly at 2
// and 3 (checked in the tests by Hilbert symbols), so it is the unique
// quaternion algebra of discriminant 6 up to isomorphism.
struct Quat {
  mpq_class w, x, y, z;

  Quat() : w(0), x(0), y(0), z(0) {}
  Quat(mpq_class w_, mpq_class x_, mpq_class y_, mpq_class z_)
      : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  static Quat one() { return Quat(1, 0, 0, 0); }
  static Quat gen_i() { return Quat(0, 1, 0, 0); }
  static Quat gen_j() { return Quat(0, 0, 1, 0); }
  static Quat gen_k() { return Quat(0, 0, 0, 1); }

  bool is_zero() const { return w == 0 && x == 0 && y == 0 && z == 0; }
  std::string str() const;
};

bool operator==(const Quat& a, const Quat& b);
Quat operator+(const Quat& a, const Quat& b);
Quat operator-(const Quat& a, const Quat& b);
Quat operator*(const Quat& a, const Quat& b);
Quat operator*(const Quat& a, const mpq_class& s);
Quat operator-(const Quat& a);

Quat qconj(const Quat& a);           // quaternion conjugate
mpq_class trd(const Quat& a);        // reduced trace
mpq_class nrd(const Quat& a);        // reduced norm
Quat qinv(const Quat& a);            // inverse, a != 0
// Discriminant of the (commutative) subring generated by a.
mpq_class disc_of(const Quat& a);

// 2x2 real matrix at working precision.
struct RealMat2 {
  Real a, b, c, d;
  Real det() const { return a * d - b * c; }
  Real tr() const { return a + d; }
};

// The fixed splitting of B over R:
//   i |-> [0 -1; 1 0],   j |-> [sqrt3 0; 0 -sqrt3].
RealMat2 iota_inf(const Quat& q, mpfr_prec_t bits);

// A maximal order of the algebra, constructed by saturating Z<1,i,j,ij> at
// the primes dividing its reduced discriminant until that discriminant is 6.
class MaximalOrder {
 public:
  static MaximalOrder build();

  // Basis as a Z-lattice; basis()[0] is always 1.
  const std::array<Quat, 4>& basis() const { return basis_; }
  const Quat& mu() const { return mu_; }           // mu^2 = -6, Riemann-positive sign
  const Quat& chi(int d) const;                    // Atkin-Lehner representative, d in {2,3,6}

  mpz_class reduced_discriminant() const { return discrd_; }
  mpz_class index_over_standard_lattice() const;   // index of Z<1,i,j,ij> in the order

  bool contains(const Quat& q) const;
  std::array<mpq_class, 4> coords(const Quat& q) const;
  Quat from_coords(long c0, long c1, long c2, long c3) const;

  // alpha' = mu^{-1} conj(alpha) mu, the positive anti-involution.
  Quat involution_prime(const Quat& a) const;
  // (1/6) trd(mu a conj(b)); integral and unimodular on the order.
  mpq_class riemann_form(const Quat& a, const Quat& b) const;

  // All lattice elements beta (up to translation by Z, fixed by a zero first
  // coordinate) with trd(beta)^2 - 4 nrd(beta) = D and coordinate height at
  // most height_bound, ordered by (height, lexicographic coordinates).
  std::vector<Quat> embeddings_with_disc(const mpz_class& D, long height_bound) const;

  // True if g * order * g^{-1} equals the order.
  bool normalizes(const Quat& g) const;

  // Hex fingerprint of the splitting and basis, for reproducibility metadata.
  std::string fingerprint() const;

 private:
  MaximalOrder() = default;
  std::array<Quat, 4> basis_;
  std::array<mpq_class, 16> inv_;  // inverse of the basis matrix, row major
  Quat mu_, chi2_, chi3_, chi6_;
  mpz_class discrd_;
};

}  // namespace e6
