#include "e6/checks.hpp"

#include <sstream>
#include <stdexcept>

#include "e6/arith.hpp"

namespace e6 {

QPoly qpoly_of(const HeegnerPolynomial& P) { return QPoly::from_z(P.coeffs); }

ModShapeResult mod_shape(const HeegnerPolynomial& P, int p) {
  if (p != 2 && p != 3) throw std::invalid_argument("mod_shape: p must be 2 or 3");
  std::vector<long> red;
  for (const auto& c : P.coeffs) {
    mpz_class r = ((c % p) + p) % p;
    red.push_back(r.get_si());
  }
  while (!red.empty() && red.back() == 0) red.pop_back();
  std::ostringstream os;
  bool first = true;
  for (int i = int(red.size()) - 1; i >= 0; --i) {
    if (red[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || red[i] != 1) os << red[i];
    if (i > 0) os << (red[i] != 1 ? "*x" : "x");
    if (i > 1) os << "^" << i;
  }
  if (first) os << "0";
  ModShapeResult out;
  out.residue = os.str();
  int nonzero = 0, pos = -1;
  for (size_t i = 0; i < red.size(); ++i)
    if (red[i] != 0) { ++nonzero; pos = int(i); }
  out.shape = ModShape::Other;
  if (nonzero == 1) {
    bool plus = red[pos] == 1;
    if (pos == int(P.h_prime)) out.shape = plus ? ModShape::XPowH : ModShape::MinusXPowH;
    else if (pos == 0) out.shape = plus ? ModShape::One : ModShape::MinusOne;
  }
  return out;
}

bool shape_matches(ModShape expected, ModShape got) {
  switch (expected) {
    case ModShape::XPowH:
      return got == ModShape::XPowH;
    case ModShape::MinusXPowH:  // up to sign
      return got == ModShape::XPowH || got == ModShape::MinusXPowH;
    case ModShape::One:
      return got == ModShape::One;
    case ModShape::MinusOne:  // up to sign
      return got == ModShape::One || got == ModShape::MinusOne;
    case ModShape::Other:
      return got == ModShape::Other;
  }
  return false;
}

UnpairedDivisor unpaired_divisor(const HeegnerPolynomial& P, uint64_t l) {
  if (l < 5 || !is_prime(mpz_class((unsigned long)l)))
    throw std::invalid_argument("unpaired_divisor: l must be a prime >= 5");
  FpPoly f = fp_from_z(P.coeffs, l);
  UnpairedDivisor out;
  out.l = l;
  long drop = P.h_prime - f.degree();
  out.at_infinity = (drop % 2) == 1;
  FpPoly odd = fp_odd_multiplicity_part(f);
  int found = 0;
  for (uint64_t x = 0; x < l; ++x) {
    if (fp_eval(odd, x) == 0) {
      out.residues.push_back(x);
      ++found;
    }
  }
  out.nonrational_degree = odd.degree() - found;
  return out;
}

Avoidance avoid_intersection(const mpz_class& D, const mpz_class& p, int anchor) {
  if (anchor != -3 && anchor != -4) throw std::invalid_argument("anchor must be -3 or -4");
  if (anchor == -3 && D % 3 == 0)
    throw std::invalid_argument("anchor -3 requires 3 coprime to D");
  if (anchor == -4 && D % 2 == 0)
    throw std::invalid_argument("anchor -4 requires D odd");
  mpz_class value = mpz_class(anchor) * D;  // -3D or -4D, positive
  return is_square_mod(value, 24 * p) ? Avoidance::MayMeet : Avoidance::Avoids;
}

long local_intersection(const P1Point& x, const P1Point& y, const mpz_class& p) {
  auto same = [&] {
    if (x.infinite || y.infinite) return x.infinite && y.infinite;
    return x.v == y.v;
  };
  if (same()) throw std::invalid_argument("local_intersection: points must differ");
  auto nonneg = [&](const P1Point& a) {
    if (a.infinite) return false;
    if (a.v == 0) return true;
    return vp_q(a.v, p) >= 0;
  };
  auto pole_chart = [&](const P1Point& a) {
    if (a.infinite) return true;
    if (a.v == 0) return false;
    return vp_q(a.v, p) < 0;
  };
  if (nonneg(x) && nonneg(y)) return vp_q(x.v - y.v, p);
  if (pole_chart(x) && pole_chart(y)) {
    mpq_class ix = x.infinite ? mpq_class(0) : mpq_class(1 / x.v);
    mpq_class iy = y.infinite ? mpq_class(0) : mpq_class(1 / y.v);
    return vp_q(ix - iy, p);
  }
  return 0;
}

IntervalProfile interval_profile(const HeegnerPolynomial& P) {
  QPoly f = qpoly_of(P);
  mpq_class e1(-16, 27), e2(0);
  if (f.sign_at(e1) == 0 || f.sign_at(e2) == 0)
    throw std::domain_error("interval_profile: root at an elliptic endpoint");
  IntervalProfile out;
  out.n1 = count_roots_below(f, e1);
  out.n2 = count_roots_open(f, e1, e2);
  out.n3 = count_roots_above(f, e2);
  return out;
}

FamilyExpectation family_expectation(Family fam) {
  switch (fam) {
    case Family::MinusFourL:
      return {ModShape::XPowH, ModShape::MinusXPowH, true, {0, 1, 0}};
    case Family::MinusL:
      return {ModShape::One, ModShape::MinusXPowH, true, {0, 0, 1}};
    case Family::MinusThreeL:
      return {ModShape::One, ModShape::MinusOne, false, {1, 0, 1}};
  }
  throw std::logic_error("family_expectation");
}

ChecksReport run_checks(const HeegnerPolynomial& P) {
  ChecksReport r;
  Family fam;
  long l;
  r.family_known = family_of(P.D, &fam, &l);
  if (!r.family_known) return r;
  r.fam = fam;
  r.l = l;
  FamilyExpectation exp = family_expectation(fam);
  r.mod2 = mod_shape(P, 2);
  r.mod3 = mod_shape(P, 3);
  r.mod2_ok = shape_matches(exp.mod2, r.mod2.shape);
  r.mod3_ok = shape_matches(exp.mod3, r.mod3.shape);
  r.unpaired = unpaired_divisor(P, (uint64_t)l);
  if (exp.unpaired_at_elliptic) {
    // the single unpaired residue must be -16/27 mod l
    uint64_t inv27 = 0;
    {
      mpz_class m(27), li((unsigned long)l), r27;
      mpz_invert(r27.get_mpz_t(), m.get_mpz_t(), li.get_mpz_t());
      mpz_class want = ((-16 * r27) % li + li) % li;
      inv27 = want.get_ui();
    }
    r.unpaired_ok = !r.unpaired.at_infinity && r.unpaired.nonrational_degree == 0 &&
                    r.unpaired.residues.size() == 1 && r.unpaired.residues[0] == inv27;
  } else {
    r.unpaired_ok = !r.unpaired.at_infinity && r.unpaired.nonrational_degree == 0 &&
                    r.unpaired.residues.empty();
  }
  r.profile = interval_profile(P);
  r.profile_ok = r.profile == exp.profile;
  return r;
}

}  // namespace e6
