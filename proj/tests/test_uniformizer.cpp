#include <random>

#include "doctest.h"
#include "e6/uniformizer.hpp"

using namespace e6;

static const MaximalOrder& the_order() {
  static MaximalOrder ord = MaximalOrder::build();
  return ord;
}

static const TriangleUniformizer& uni50() {
  static TriangleUniformizer u(the_order(), 50);
  return u;
}

TEST_CASE("j_from_t elliptic values") {
  mpfr_prec_t bits = bits_for_digits(50);
  TPoint t1 = TPoint::finite(Cx::of(1, 0, bits));
  CHECK(cabs(j_from_t(t1).value).to_double() == doctest::Approx(0.0));
  TPoint t0 = TPoint::finite(Cx::of(0, 0, bits));
  CHECK(j_from_t(t0).value.re.to_double() == doctest::Approx(-16.0 / 27));
  CHECK(j_from_t(TPoint::inf()).infinite);
}

TEST_CASE("fixed points") {
  mpfr_prec_t bits = bits_for_digits(50);
  Quat i = Quat::gen_i();
  Cx tau = fixed_point(i, bits);
  CHECK(tau.re.to_double() == doctest::Approx(0.0));
  CHECK(tau.im.to_double() == doctest::Approx(1.0));
  // beta and -beta fix the same point
  Quat mu = the_order().mu();
  Cx a = fixed_point(mu, bits), b = fixed_point(-mu, bits);
  CHECK(cabs(a - b).to_double() == doctest::Approx(0.0));
  // conjugation equivariance: the fixed point of u beta u^-1 is iota(u) tau
  std::mt19937_64 rng(11);
  const MaximalOrder& ord = the_order();
  std::vector<Quat> units;
  for (const Quat& q : ord.embeddings_with_disc(-4, 6)) units.push_back(q);  // norm-1 elements
  REQUIRE(!units.empty());
  for (int it = 0; it < 10; ++it) {
    Quat u = units[rng() % units.size()];
    Quat beta = ord.mu();
    Cx t0 = fixed_point(beta, bits);
    Cx t1 = fixed_point(u * beta * qinv(u), bits);
    RealMat2 m = iota_inf(u, bits);
    Real zero(bits);
    Cx moved = (Cx(m.a, zero) * t0 + Cx(m.b, zero)) / (Cx(m.c, zero) * t0 + Cx(m.d, zero));
    CHECK(cabs(t1 - moved).to_double() < 1e-30);
  }
}

TEST_CASE("uniformizer anchors") {
  const TriangleUniformizer& u = uni50();
  double tol = 1e-30;
  SUBCASE("order-2 points at t = 0") {
    for (const Quat& b : the_order().embeddings_with_disc(-24, 6)) {
      TPoint t = u.t_of_tau(fixed_point(b, u.bits()));
      REQUIRE(!t.infinite);
      CHECK(cabs(t.value).to_double() < tol);
    }
  }
  SUBCASE("order-4 points at t = 1") {
    for (const Quat& b : the_order().embeddings_with_disc(-4, 6)) {
      TPoint t = u.t_of_tau(fixed_point(b, u.bits()));
      REQUIRE(!t.infinite);
      CHECK(cabs(t.value - Cx::of(1, 0, u.bits())).to_double() < tol);
    }
  }
  SUBCASE("order-6 points at t = infinity") {
    for (const Quat& b : the_order().embeddings_with_disc(-3, 6)) {
      TPoint t = u.t_of_tau(fixed_point(b, u.bits()));
      CHECK(t.infinite);
    }
  }
}

TEST_CASE("uniformizer invariance under the group") {
  const TriangleUniformizer& u = uni50();
  const auto& gens = u.elliptic_generators();
  std::mt19937_64 rng(13);
  // a non-elliptic base point
  Cx tau = Cx(Real::of(mpq_class(1, 5), u.bits()), Real::of(mpq_class(7, 4), u.bits()));
  TPoint t0 = u.t_of_tau(tau);
  REQUIRE(!t0.infinite);
  for (int it = 0; it < 20; ++it) {
    Cx moved = tau;
    int len = 1 + int(rng() % 3);
    for (int s = 0; s < len; ++s) {
      const Quat& g = gens[rng() % 10];
      RealMat2 m = iota_inf(g, u.bits());
      Real zero(u.bits());
      moved = (Cx(m.a, zero) * moved + Cx(m.b, zero)) / (Cx(m.c, zero) * moved + Cx(m.d, zero));
    }
    TPoint t1 = u.t_of_tau(moved);
    REQUIRE(!t1.infinite);
    CHECK(cabs(t1.value - t0.value).to_double() < 1e-25);
  }
}

TEST_CASE("heegner polynomials: structure of the first family members") {
  const TriangleUniformizer& u = uni50();
  SUBCASE("D = -19: degree 1, even leading, odd constant") {
    HeegnerPolynomial p = heegner_poly(u, -19);
    REQUIRE(p.h_prime == 1);
    REQUIRE(p.coeffs.size() == 2);
    CHECK(p.coeffs[1] == p.b);
    CHECK(p.coeffs[1] % 2 == 0);   // P = 1 mod 2
    CHECK(p.coeffs[0] % 2 != 0);
    CHECK(p.b > 0);
  }
  SUBCASE("D = -52: degree 1 with root in (-16/27, 0)") {
    HeegnerPolynomial p = heegner_poly(u, -52);
    REQUIRE(p.h_prime == 1);
    mpq_class root(-p.coeffs[0], p.coeffs[1]);
    root.canonicalize();
    CHECK(root > mpq_class(-16, 27));
    CHECK(root < 0);
  }
  SUBCASE("D = -219: degree 2") {
    HeegnerPolynomial p = heegner_poly(u, -219);
    CHECK(p.h_prime == 2);
    CHECK((long)p.coeffs.size() == 3);
  }
  SUBCASE("errors") {
    CHECK_THROWS(heegner_poly(u, -11));   // s = 0
    CHECK_THROWS(heegner_poly(u, -3));    // anchor
    CHECK_THROWS(heegner_poly(u, -20));   // outside the families
    HeegnerOptions opt;
    opt.force_family = true;
    CHECK_NOTHROW(heegner_poly(u, -40, opt));
  }
}

TEST_CASE("heegner polynomial coefficients are precision independent") {
  TriangleUniformizer u60(the_order(), 60);
  TriangleUniformizer u120(the_order(), 120);
  HeegnerPolynomial a = heegner_poly(u60, -19);
  HeegnerPolynomial b = heegner_poly(u120, -19);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.b == b.b);
}

TEST_CASE("table round trip") {
  const TriangleUniformizer& u = uni50();
  std::string path = "test_table_tmp.jsonl";
  std::remove(path.c_str());
  {
    HeegnerTable t(path);
    auto entries = regenerate_table(u, {mpz_class(-19)}, &t);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].status == "ok");
  }
  {
    HeegnerTable t(path);
    t.load();
    HeegnerPolynomial p;
    REQUIRE(t.lookup(-19, &p));
    HeegnerPolynomial q = heegner_poly(u, -19);
    CHECK(p.coeffs == q.coeffs);
    CHECK(p.b == q.b);
  }
  std::remove(path.c_str());
}

TEST_CASE("height cap does not change the polynomial") {
  const TriangleUniformizer& u = uni50();
  HeegnerOptions a, b;
  a.height_cap = 1024;
  b.height_cap = 2048;
  HeegnerPolynomial pa = heegner_poly(u, -52, a);
  HeegnerPolynomial pb = heegner_poly(u, -52, b);
  CHECK(pa.coeffs == pb.coeffs);
}
