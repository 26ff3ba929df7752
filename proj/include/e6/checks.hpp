#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "e6/poly.hpp"
#include "e6/quadorder.hpp"
#include "e6/uniformizer.hpp"

namespace e6 {

QPoly qpoly_of(const HeegnerPolynomial& P);

enum class ModShape { XPowH, MinusXPowH, One, MinusOne, Other };

struct ModShapeResult {
  ModShape shape;
  std::string residue;  // the reduced polynomial, for diagnosis
};

// Classifies P mod p (p in {2, 3}) against the family table shapes.
ModShapeResult mod_shape(const HeegnerPolynomial& P, int p);

// Does an observed shape satisfy an expected up-to-sign shape class?
bool shape_matches(ModShape expected_up_to_sign, ModShape got);

struct UnpairedDivisor {
  uint64_t l;
  std::vector<uint64_t> residues;  // F_l roots of odd multiplicity
  bool at_infinity;                // degree drop of odd parity
  int nonrational_degree;          // leftover odd-multiplicity factor degree (0 expected)
};

// Odd-multiplicity locus of P mod l, from the squarefree (Yun) decomposition;
// l >= 5 prime.
UnpairedDivisor unpaired_divisor(const HeegnerPolynomial& P, uint64_t l);

enum class Avoidance { Avoids, MayMeet };

// The quadratic obstruction to meeting the anchor divisor at p:
// anchor -3 needs 3 coprime to D and tests -3D, anchor -4 needs D odd and
// tests -4D; "avoids" when the value is not a square mod 24p.
Avoidance avoid_intersection(const mpz_class& D, const mpz_class& p, int anchor);

struct P1Point {
  bool infinite = false;
  mpq_class v;
  static P1Point inf() { P1Point p; p.infinite = true; return p; }
  static P1Point of(mpq_class q) { P1Point p; p.v = std::move(q); return p; }
};

// Local intersection number of two sections of P^1 at p: the valuation of
// the difference in whichever affine chart contains both reductions, and 0
// when they reduce to different points.
long local_intersection(const P1Point& x, const P1Point& y, const mpz_class& p);

struct IntervalProfile {
  int n1, n2, n3;  // real roots in (-inf, -16/27), (-16/27, 0), (0, inf)
  bool operator==(const IntervalProfile& o) const = default;
};

// Sturm counts over the three intervals cut out by the finite elliptic
// j-values; a root at an endpoint is an error.
IntervalProfile interval_profile(const HeegnerPolynomial& P);

struct FamilyExpectation {
  ModShape mod2, mod3;       // up-to-sign classes
  bool unpaired_at_elliptic;  // divisor (-16/27) vs empty
  IntervalProfile profile;
};

FamilyExpectation family_expectation(Family fam);

struct ChecksReport {
  bool family_known = false;
  Family fam{};
  long l = 0;
  ModShapeResult mod2, mod3;
  UnpairedDivisor unpaired;
  IntervalProfile profile{};
  bool mod2_ok = false, mod3_ok = false, unpaired_ok = false, profile_ok = false;
  bool all_ok() const { return mod2_ok && mod3_ok && unpaired_ok && profile_ok; }
};

// The four structural checks of a family polynomial in one report.
ChecksReport run_checks(const HeegnerPolynomial& P);

}  // namespace e6
