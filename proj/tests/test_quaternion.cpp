#include <random>

#include "doctest.h"
#include "e6/arith.hpp"
#include "e6/quaternion.hpp"

using namespace e6;

static const MaximalOrder& the_order() {
  static MaximalOrder ord = MaximalOrder::build();
  return ord;
}

static Quat random_quat(std::mt19937_64& rng, long range = 9) {
  auto r = [&] { return mpq_class(long(rng() % (2 * range + 1)) - range); };
  return Quat(r(), r(), r(), r());
}

static Quat random_order_element(const MaximalOrder& ord, std::mt19937_64& rng, long range = 6) {
  auto r = [&] { return long(rng() % (2 * range + 1)) - range; };
  return ord.from_coords(r(), r(), r(), r());
}

TEST_CASE("multiplication table") {
  Quat i = Quat::gen_i(), j = Quat::gen_j(), k = Quat::gen_k();
  CHECK(i * j == k);
  CHECK(j * i == -k);
  Quat mu = i * mpq_class(3) + j;  // 3i + j
  CHECK(mu * mu == Quat(-6, 0, 0, 0));
  CHECK(nrd(mu) == 6);
  CHECK(trd(mu) == 0);
}

TEST_CASE("trace and norm identities") {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 300; ++it) {
    Quat a = random_quat(rng), b = random_quat(rng);
    CHECK(nrd(a * b) == nrd(a) * nrd(b));
    CHECK(trd(a * b) == trd(b * a));
    CHECK(qconj(a) == Quat(trd(a), 0, 0, 0) - a);
    CHECK(a * qconj(a) == Quat(nrd(a), 0, 0, 0));
  }
}

TEST_CASE("algebra is ramified exactly at 2 and 3") {
  // Hilbert symbols of (-1, 3) over Q: the ternary form -x^2 + 3y^2 = z^2
  // has no nontrivial solution over Q_2 and Q_3 but has one over Q_p for
  // every other p < 200 (checked by a search mod p^k) and over R.
  auto solvable_mod = [](long p, long k) {
    long m = 1;
    for (long i = 0; i < k; ++i) m *= p;
    for (long x = 0; x < m; ++x)
      for (long y = 0; y < m; ++y)
        for (long z = 0; z < m; ++z) {
          if (x % p == 0 && y % p == 0 && z % p == 0) continue;
          if (((-x * x + 3 * y * y - z * z) % m + m) % m == 0) return true;
        }
    return false;
  };
  CHECK(!solvable_mod(2, 4));
  CHECK(!solvable_mod(3, 2));
  for (long p : {5, 7, 11, 13}) CHECK(solvable_mod(p, 1));
}

TEST_CASE("maximal order") {
  const MaximalOrder& ord = the_order();
  CHECK(ord.reduced_discriminant() == 6);
  CHECK(ord.basis()[0] == Quat::one());
  // index of Z<1,i,j,ij> is a power of 2 times a power of 3
  mpz_class idx = ord.index_over_standard_lattice();
  while (idx % 2 == 0) idx /= 2;
  while (idx % 3 == 0) idx /= 3;
  CHECK(idx == 1);
  CHECK(ord.contains(Quat::gen_i()));
  CHECK(ord.contains(Quat::gen_j()));
  // ring closure on random elements
  std::mt19937_64 rng(5);
  for (int it = 0; it < 100; ++it) {
    Quat a = random_order_element(ord, rng), b = random_order_element(ord, rng);
    CHECK(ord.contains(a * b));
    CHECK(trd(a).get_den() == 1);
    CHECK(nrd(a).get_den() == 1);
  }
}

TEST_CASE("mu and the Atkin-Lehner representatives") {
  const MaximalOrder& ord = the_order();
  CHECK(ord.mu() * ord.mu() == Quat(-6, 0, 0, 0));
  CHECK(ord.contains(ord.mu()));
  for (int d : {2, 3, 6}) {
    const Quat& chi = ord.chi(d);
    CHECK(nrd(chi) == d);
    CHECK(ord.contains(chi));
    CHECK(ord.normalizes(chi));
  }
  CHECK(trd(ord.chi(3)) == 0);
  CHECK(trd(ord.chi(6)) == 0);
  // No trace-0 norm-2 element exists in this algebra; the norm-2 normalizer
  // has trace 2 instead (chi2^2 is 2 times a unit).
  CHECK(trd(ord.chi(2)) != 0);
  Quat sq = ord.chi(2) * ord.chi(2);
  CHECK(nrd(sq) == 4);
}

TEST_CASE("involution") {
  const MaximalOrder& ord = the_order();
  CHECK(ord.involution_prime(Quat::one()) == Quat::one());
  CHECK(ord.involution_prime(ord.mu()) == -ord.mu());
  std::mt19937_64 rng(6);
  for (int it = 0; it < 1000; ++it) {
    Quat a = random_quat(rng), b = random_quat(rng);
    CHECK(ord.involution_prime(a * b) == ord.involution_prime(b) * ord.involution_prime(a));
    CHECK(ord.involution_prime(ord.involution_prime(a)) == a);
    if (!a.is_zero()) CHECK(trd(a * ord.involution_prime(a)) > 0);
  }
}

TEST_CASE("riemann form") {
  const MaximalOrder& ord = the_order();
  // alternating, and E(1, mu) = trd(mu conj(mu))/6 = 2
  CHECK(ord.riemann_form(Quat::one(), ord.mu()) == 2);
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    Quat a = random_order_element(ord, rng);
    CHECK(ord.riemann_form(a, a) == 0);
  }
  // integer Gram matrix with determinant 1 on the order basis
  mpq_class det;
  {
    std::array<std::array<mpq_class, 4>, 4> g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        g[i][j] = ord.riemann_form(ord.basis()[i], ord.basis()[j]);
        CHECK(g[i][j].get_den() == 1);
      }
    // 4x4 determinant by cofactor expansion
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) -> mpq_class {
      return g[r0][c0] * (g[r1][c1] * g[r2][c2] - g[r1][c2] * g[r2][c1]) -
             g[r0][c1] * (g[r1][c0] * g[r2][c2] - g[r1][c2] * g[r2][c0]) +
             g[r0][c2] * (g[r1][c0] * g[r2][c1] - g[r1][c1] * g[r2][c0]);
    };
    det = g[0][0] * det3(1, 2, 3, 1, 2, 3) - g[0][1] * det3(1, 2, 3, 0, 2, 3) +
          g[0][2] * det3(1, 2, 3, 0, 1, 3) - g[0][3] * det3(1, 2, 3, 0, 1, 2);
  }
  CHECK(det == 1);
  // Rosati compatibility E(a x, y) = E(x, a' y)
  std::mt19937_64 rng2(8);
  for (int it = 0; it < 1000; ++it) {
    Quat a = random_order_element(ord, rng2, 3);
    Quat x = random_order_element(ord, rng2, 3);
    Quat y = random_order_element(ord, rng2, 3);
    CHECK(ord.riemann_form(a * x, y) == ord.riemann_form(x, ord.involution_prime(a) * y));
  }
}

TEST_CASE("iota_inf is a splitting") {
  const MaximalOrder& ord = the_order();
  mpfr_prec_t bits = bits_for_digits(50);
  Real tol = pow10(40, bits);
  RealMat2 one = iota_inf(Quat::one(), bits);
  CHECK(rabs(one.a - Real::of(1l, bits)) < tol);
  CHECK(rabs(one.b) < tol);
  CHECK(rabs(one.c) < tol);
  CHECK(rabs(one.d - Real::of(1l, bits)) < tol);
  std::mt19937_64 rng(9);
  for (int it = 0; it < 100; ++it) {
    Quat a = random_order_element(ord, rng, 4), b = random_order_element(ord, rng, 4);
    RealMat2 ma = iota_inf(a, bits), mb = iota_inf(b, bits), mab = iota_inf(a * b, bits);
    Real p00 = ma.a * mb.a + ma.b * mb.c, p01 = ma.a * mb.b + ma.b * mb.d;
    Real p10 = ma.c * mb.a + ma.d * mb.c, p11 = ma.c * mb.b + ma.d * mb.d;
    CHECK(rabs(p00 - mab.a) < tol);
    CHECK(rabs(p01 - mab.b) < tol);
    CHECK(rabs(p10 - mab.c) < tol);
    CHECK(rabs(p11 - mab.d) < tol);
    CHECK(rabs(ma.det() - Real::of(nrd(a), bits)) < tol);
    CHECK(rabs(ma.tr() - Real::of(trd(a), bits)) < tol);
  }
}

TEST_CASE("embeddings_with_disc") {
  const MaximalOrder& ord = the_order();
  SUBCASE("D = -11 is empty: 3 splits in Q(sqrt(-11))") {
    CHECK(kronecker(-11, 3) == 1);
    CHECK(ord.embeddings_with_disc(-11, 10).empty());
  }
  SUBCASE("D = -24 contains a trace-0 norm-6 element") {
    auto v = ord.embeddings_with_disc(-24, 10);
    REQUIRE(!v.empty());
    bool found = false;
    for (const auto& b : v)
      if (trd(b) == 0 && nrd(b) == 6) found = true;
    CHECK(found);
  }
  SUBCASE("D = -4 contains a trace-0 norm-1 element") {
    auto v = ord.embeddings_with_disc(-4, 5);
    REQUIRE(!v.empty());
    bool found = false;
    for (const auto& b : v)
      if (trd(b) == 0 && nrd(b) == 1) found = true;
    CHECK(found);
  }
  SUBCASE("every returned element satisfies the discriminant equation") {
    for (long D : {-3, -4, -19, -24, -40, -52}) {
      for (const auto& b : ord.embeddings_with_disc(D, 12)) {
        CHECK(disc_of(b) == D);
        CHECK(ord.contains(b));
      }
    }
  }
}
