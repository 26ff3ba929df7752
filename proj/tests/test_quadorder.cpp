#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "e6/arith.hpp"
#include "e6/quadorder.hpp"

using namespace e6;

TEST_CASE("class numbers by reduced forms") {
  std::vector<ReducedForm> forms;
  CHECK(class_number(-4, &forms) == 1);
  CHECK(forms[0].a == 1);
  CHECK(class_number(-52, &forms) == 2);
  CHECK(class_number(-219, &forms) == 4);
  CHECK(class_number(-19) == 1);
  CHECK(class_number(-43) == 1);
  CHECK(class_number(-148) == 2);
  CHECK(class_number(-24) == 2);
}

TEST_CASE("class number against a naive oracle") {
  // independent enumeration straight from the reduction inequalities
  auto oracle = [](long D) {
    long count = 0;
    for (long a = 1; a * a <= (-D); ++a)
      for (long b = -a; b <= a; ++b) {
        if ((b * b - D) % (4 * a) != 0) continue;
        long c = (b * b - D) / (4 * a);
        bool reduced = (std::abs(b) <= a) && (a <= c);
        if (b == -a || (a == c && b < 0)) reduced = false;
        if (std::gcd(std::gcd(a, b), c) != 1) reduced = false;
        if (reduced) ++count;
      }
    return count;
  };
  for (long D = -3; D >= -2000; --D) {
    long m4 = ((D % 4) + 4) % 4;
    if (m4 != 0 && m4 != 1) continue;
    CHECK(class_number(D) == oracle(D));
  }
}

TEST_CASE("quad_order_data on the family head discriminants") {
  QuadOrderData d52 = quad_order_data(-52);
  CHECK(d52.h == 2);
  CHECK(d52.eichler_2 == 0);
  CHECK(d52.eichler_3 == -1);
  CHECK(d52.s == 4);
  CHECK(d52.w2_size == 2);
  CHECK(d52.h_prime == 1);

  QuadOrderData d19 = quad_order_data(-19);
  CHECK(d19.h == 1);
  CHECK(d19.w2_size == 1);
  CHECK(d19.h_prime == 1);

  QuadOrderData d219 = quad_order_data(-219);
  CHECK(d219.h == 4);
  CHECK(d219.w2_size == 2);
  CHECK(d219.h_prime == 2);

  QuadOrderData d11 = quad_order_data(-11);
  CHECK(d11.s == 0);  // 3 splits

  // non-fundamental: conductor 2 kills the embedding count
  QuadOrderData d16 = quad_order_data(-16);
  CHECK(d16.conductor == 2);
  CHECK(d16.eichler_2 == 1);
  CHECK(d16.s == 0);

  // h' may be non-integral outside the families; flagged, not rounded
  QuadOrderData d24 = quad_order_data(-24);
  CHECK(d24.w2_size == 4);
  CHECK(!d24.h_prime_integral);
  CHECK(d24.h_prime == mpq_class(1, 2));
}

TEST_CASE("parity table families") {
  CHECK(parity_check(Family::MinusFourL, 13).consistent);
  CHECK(parity_check(Family::MinusL, 19).consistent);
  CHECK(parity_check(Family::MinusThreeL, 73).consistent);
  CHECK_THROWS(parity_check(Family::MinusFourL, 19));
  for (uint32_t l : primes_upto(499)) {
    if (l < 5) continue;
    if (l % 24 == 13) CHECK(parity_check(Family::MinusFourL, l).consistent);
    if (l % 24 == 19) CHECK(parity_check(Family::MinusL, l).consistent);
    if (l % 24 == 1) CHECK(parity_check(Family::MinusThreeL, l).consistent);
  }
}

TEST_CASE("family recognition") {
  Family f;
  long l;
  REQUIRE(family_of(-52, &f, &l));
  CHECK(f == Family::MinusFourL);
  CHECK(l == 13);
  REQUIRE(family_of(-19, &f, &l));
  CHECK(f == Family::MinusL);
  REQUIRE(family_of(-219, &f, &l));
  CHECK(f == Family::MinusThreeL);
  CHECK(l == 73);
  CHECK(!family_of(-20, &f, &l));
  CHECK(!family_of(-4, &f, &l));
}

TEST_CASE("is_square_mod") {
  CHECK(!is_square_mod(156, 72));
  CHECK(!is_square_mod(76, 48));
  CHECK(!is_square_mod(57, 72));
  for (long m : {1l, 2l, 7l, 48l, 72l}) CHECK(is_square_mod(1, m));
  CHECK(is_square_mod(0, 9));
  CHECK(is_square_mod(4, 12));
  // multiplicative over coprime moduli
  for (long a = -30; a <= 30; ++a)
    for (long m1 : {5l, 8l, 9l})
      for (long m2 : {7l, 11l}) {
        CHECK(is_square_mod(a, m1 * m2) == (is_square_mod(a, m1) && is_square_mod(a, m2)));
      }
  // agreement with exhaustive search
  for (long m = 1; m <= 60; ++m)
    for (long a = -20; a <= 20; ++a) {
      bool brute = false;
      for (long x = 0; x < m; ++x)
        if (((x * x - a) % m + m) % m == 0) brute = true;
      CHECK(is_square_mod(a, m) == brute);
    }
}

TEST_CASE("fundamental units") {
  QuadUnit u2 = fundamental_unit(2);
  CHECK(u2.a == 1);
  CHECK(u2.b == 1);
  CHECK(u2.norm == -1);
  QuadUnit u3 = fundamental_unit(3);
  CHECK(u3.a == 2);
  CHECK(u3.b == 1);
  QuadUnit u6 = fundamental_unit(6);
  CHECK(u6.a == 5);
  CHECK(u6.b == 2);
}

TEST_CASE("equidistribution diagnostic") {
  EquidistResult r = equidist_diagnostic(30);
  REQUIRE(!r.pairs.empty());
  bool has23 = false;
  for (const auto& p : r.pairs) {
    CHECK(kronecker(2, (long)p.l) == 1);
    CHECK(kronecker(3, (long)p.l) == 1);
    CHECK(p.n1 >= 0);
    CHECK(p.n1 < 1);
    CHECK(p.n3 >= 0);
    CHECK(p.n3 < 1);
    if (p.l == 23) has23 = true;
  }
  CHECK(has23);
  // pairs sorted by l
  for (size_t i = 1; i < r.pairs.size(); ++i) CHECK(r.pairs[i - 1].l < r.pairs[i].l);
  // the statistic is well-defined modulo the unit: multiplying pi by eps^2
  // shifts the raw log by 2 ln eps, which reduces away
  QuadUnit e1 = fundamental_unit(2);
  double loge = std::log(e1.a.get_d() + e1.b.get_d() * std::sqrt(2.0));
  double raw = std::log(5 + std::sqrt(2.0)) - 0.5 * std::log(23.0);
  double shifted = raw + 2 * loge;
  double m1 = std::fmod(raw, loge);
  double m2 = std::fmod(shifted, loge);
  if (m1 < 0) m1 += loge;
  if (m2 < 0) m2 += loge;
  CHECK(std::abs(m1 - m2) < 1e-9);
}
