// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Covers the finite tables, the structural lemma checks, the oracle
// equivalences, and the end-to-end certificate runs.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "e6/arith.hpp"
#include "e6/checks.hpp"
#include "e6/quadorder.hpp"
#include "e6/quaternion.hpp"
#include "e6/search.hpp"
#include "e6/uniformizer.hpp"

using namespace e6;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int idx, const char* what, bool ok, double secs, const std::string& note = "") {
  printf("%s  criterion %2d: %-58s (%6.1fs)%s%s\n", ok ? "PASS" : "FAIL", idx, what, secs,
         note.empty() ? "" : "  ", note.c_str());
  fflush(stdout);
  if (!ok) ++g_failures;
}

const MaximalOrder& the_order() {
  static MaximalOrder ord = MaximalOrder::build();
  return ord;
}

// 1: parity table for every l < 500 in the three congruence classes
void criterion1() {
  Timer t;
  bool ok = true;
  int checked = 0;
  for (uint32_t l : primes_upto(499)) {
    if (l < 5) continue;
    Family fam;
    if (l % 24 == 13) fam = Family::MinusFourL;
    else if (l % 24 == 19) fam = Family::MinusL;
    else if (l % 24 == 1) fam = Family::MinusThreeL;
    else continue;
    ++checked;
    if (!parity_check(fam, l).consistent) ok = false;
  }
  ok = ok && checked > 30 && t.secs() < 60;
  report(1, "parity of h and h' matches the family table, l < 500", ok, t.secs(),
         "classes checked: " + std::to_string(checked));
}

// 2: s(O_D) != 0 iff an embedding generator exists within height 64
void criterion2() {
  Timer t;
  const MaximalOrder& ord = the_order();
  int agree = 0, total = 0;
  for (long D = -3; D >= -300; --D) {
    long m4 = ((D % 4) + 4) % 4;
    if (m4 != 0 && m4 != 1) continue;
    QuadOrderData qd = quad_order_data(D);
    if (qd.conductor != 1) continue;  // fundamental only
    ++total;
    bool has = !ord.embeddings_with_disc(D, 64).empty();
    if (has == (qd.s != 0)) ++agree;
  }
  report(2, "embedding count s vs height-64 enumeration, |D| <= 300", agree == total, t.secs(),
         std::to_string(agree) + "/" + std::to_string(total));
}

// 3: Riemann form unimodular, Rosati and positivity samples, splitting residuals
void criterion3() {
  Timer t;
  const MaximalOrder& ord = the_order();
  bool ok = true;
  {
    std::array<std::array<mpq_class, 4>, 4> g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        g[i][j] = ord.riemann_form(ord.basis()[i], ord.basis()[j]);
        if (g[i][j].get_den() != 1) ok = false;
      }
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) -> mpq_class {
      return g[r0][c0] * (g[r1][c1] * g[r2][c2] - g[r1][c2] * g[r2][c1]) -
             g[r0][c1] * (g[r1][c0] * g[r2][c2] - g[r1][c2] * g[r2][c0]) +
             g[r0][c2] * (g[r1][c0] * g[r2][c1] - g[r1][c1] * g[r2][c0]);
    };
    mpq_class det = g[0][0] * det3(1, 2, 3, 1, 2, 3) - g[0][1] * det3(1, 2, 3, 0, 2, 3) +
                    g[0][2] * det3(1, 2, 3, 0, 1, 3) - g[0][3] * det3(1, 2, 3, 0, 1, 2);
    if (det != 1) ok = false;
  }
  std::mt19937_64 rng(101);
  auto rnd = [&](long range) {
    return ord.from_coords(long(rng() % (2 * range + 1)) - range,
                           long(rng() % (2 * range + 1)) - range,
                           long(rng() % (2 * range + 1)) - range,
                           long(rng() % (2 * range + 1)) - range);
  };
  for (int it = 0; it < 1000; ++it) {
    Quat a = rnd(4), x = rnd(4), y = rnd(4);
    if (ord.riemann_form(a * x, y) != ord.riemann_form(x, ord.involution_prime(a) * y)) ok = false;
    if (!a.is_zero() && !(trd(a * ord.involution_prime(a)) > 0)) ok = false;
  }
  mpfr_prec_t bits = bits_for_digits(50);
  Real tol = pow10(40, bits);
  for (int it = 0; it < 100; ++it) {
    Quat a = rnd(4), b = rnd(4);
    RealMat2 ma = iota_inf(a, bits), mb = iota_inf(b, bits), mab = iota_inf(a * b, bits);
    Real r00 = rabs(ma.a * mb.a + ma.b * mb.c - mab.a);
    Real r01 = rabs(ma.a * mb.b + ma.b * mb.d - mab.b);
    Real r10 = rabs(ma.c * mb.a + ma.d * mb.c - mab.c);
    Real r11 = rabs(ma.c * mb.b + ma.d * mb.d - mab.d);
    if (!(r00 < tol && r01 < tol && r10 < tol && r11 < tol)) ok = false;
    if (!(rabs(ma.det() - Real::of(nrd(a), bits)) < tol)) ok = false;
  }
  report(3, "Riemann form unimodular; Rosati, positivity, splitting residuals", ok, t.secs());
}

// 4: elliptic anchors at 50 digits with residual < 1e-30
void criterion4() {
  Timer t;
  const MaximalOrder& ord = the_order();
  TriangleUniformizer u(ord, 50);
  bool ok = true;
  double bound = 1e-30;
  for (const Quat& b : ord.embeddings_with_disc(-24, 6)) {
    TPoint tp = u.t_of_tau(fixed_point(b, u.bits()));
    if (tp.infinite || cabs(tp.value).to_double() >= bound) ok = false;
  }
  for (const Quat& b : ord.embeddings_with_disc(-4, 6)) {
    TPoint tp = u.t_of_tau(fixed_point(b, u.bits()));
    if (tp.infinite || cabs(tp.value - Cx::of(1, 0, u.bits())).to_double() >= bound) ok = false;
  }
  for (const Quat& b : ord.embeddings_with_disc(-3, 6)) {
    TPoint tp = u.t_of_tau(fixed_point(b, u.bits()));
    if (!tp.infinite) ok = false;
  }
  report(4, "uniformizer anchors t(-24, -4, -3) = 0, 1, inf at 1e-30", ok, t.secs());
}

// 5: the five family polynomials, their stability and structural checks
void criterion5() {
  Timer t;
  const MaximalOrder& ord = the_order();
  TriangleUniformizer u60(ord, 60), u120(ord, 120);
  bool ok = true;
  std::string note;
  for (long D : {-52l, -148l, -19l, -43l, -219l}) {
    HeegnerPolynomial a = heegner_poly(u60, D);
    HeegnerPolynomial b = heegner_poly(u120, D);
    QuadOrderData qd = quad_order_data(D);
    if (a.coeffs != b.coeffs || a.b != b.b) {
      ok = false;
      note += "stability@" + std::to_string(D) + " ";
    }
    if (mpq_class(a.h_prime) != qd.h_prime) {
      ok = false;
      note += "degree@" + std::to_string(D) + " ";
    }
    ChecksReport r = run_checks(a);
    if (!r.family_known || !r.all_ok()) {
      ok = false;
      note += "checks@" + std::to_string(D) + " ";
    }
  }
  ok = ok && t.secs() < 600;
  report(5, "P_D for D in {-52,-148,-19,-43,-219}: stable, all table rows", ok, t.secs(), note);
}

// 6: the three non-square claims
void criterion6() {
  Timer t;
  bool ok = !is_square_mod(156, 72) && !is_square_mod(76, 48) && !is_square_mod(57, 72);
  report(6, "is_square_mod(156,72) = (76,48) = (57,72) = false", ok, t.secs());
}

// 7: end-to-end certificates for the three cases, with tamper detection
void criterion7() {
  const MaximalOrder& ord = the_order();
  TriangleUniformizer u(ord, 60);
  HeegnerTable table;
  struct Run {
    const char* poly;
    int forced;  // 0 = automatic
    int expect_case;
  };
  // the stated case labels; for j0 = 1 and sqrt 2 an earlier case of the
  // theorem also applies, so the stated case is pinned explicitly
  std::vector<Run> runs = {{"x + 1/2", 0, 1}, {"x - 1", 2, 2}, {"x^2 - 2", 3, 3}};
  for (const Run& run : runs) {
    Timer t;
    bool ok = true;
    std::string note = run.poly;
    try {
      ModuliInput in = parse_moduli(parse_poly_string(run.poly));
      SearchConfig cfg;
      cfg.l_max = 5000;
      cfg.forced_case = run.forced;
      cfg.table = &table;
      Certificate cert = find_superspecial(u, in, cfg);
      note += " -> case " + std::to_string(cert.case_no) + ", l = " + std::to_string(cert.l) +
              ", p = " + cert.p.get_str();
      if (cert.case_no != run.expect_case) ok = false;
      if (!verify_certificate(cert, u, &table).pass) ok = false;
      Certificate back = certificate_from_json(certificate_to_json(cert));
      if (!verify_certificate(back, u, &table).pass) ok = false;
      auto tampered_fails = [&](Certificate c) {
        VerifyResult v = verify_certificate(c, u, &table);
        return !v.pass && !v.reasons.empty();
      };
      Certificate c1 = cert;
      c1.p = (cert.p == 7) ? 11 : 7;
      Certificate c2 = cert;
      c2.N += 6;
      Certificate c3 = cert;
      c3.D -= 24 * 4;
      Certificate c4 = cert;
      c4.l += 24;
      Certificate c5 = cert;
      c5.dchain *= 5;
      Certificate c6 = cert;
      c6.case_no = cert.case_no % 3 + 1;
      Certificate c7 = cert;
      c7.vpN += 1;
      Certificate c8 = cert;
      if (!c8.chain.empty()) c8.chain[0].value = -c8.chain[0].value;
      bool td = tampered_fails(c1) && tampered_fails(c2) && tampered_fails(c3) &&
                tampered_fails(c4) && tampered_fails(c5) && tampered_fails(c6) &&
                tampered_fails(c7) && (c8.chain.empty() || tampered_fails(c8));
      if (!td) {
        ok = false;
        note += " [tampering undetected]";
      }
      if (t.secs() >= 300) ok = false;
    } catch (const std::exception& e) {
      ok = false;
      note += std::string(" exception: ") + e.what();
    }
    report(7, "certificate and tamper detection", ok, t.secs(), note);
  }
}

// 8: transcripted reciprocity evaluation vs direct Kronecker, 10^4 pairs
void criterion8() {
  Timer t;
  std::mt19937_64 rng(2024);
  int mismatches = 0;
  for (int it = 0; it < 10000; ++it) {
    mpz_class D = mpz_class(long(rng() % 4000000)) - 2000000;
    mpz_class N = mpz_class(long(rng() % 4000000)) + 1;
    while (gcd(N, mpz_class(6)) != 1) ++N;
    std::vector<SymbolStep> steps;
    if (kronecker_transcript(D, N, &steps) != kronecker(D, N)) ++mismatches;
  }
  report(8, "stepwise reciprocity = direct Kronecker on 10^4 pairs", mismatches == 0, t.secs(),
         std::to_string(mismatches) + " mismatches");
}

// 9: oracle equivalences
void criterion9() {
  Timer t;
  bool ok = true;
  // class numbers against the naive enumeration, |D| <= 10^4
  for (long D = -3; D >= -10000; --D) {
    long m4 = ((D % 4) + 4) % 4;
    if (m4 != 0 && m4 != 1) continue;
    long count = 0;
    for (long a = 1; a * a <= -D; ++a)
      for (long b = -a; b <= a; ++b) {
        if ((b * b - D) % (4 * a) != 0) continue;
        long c = (b * b - D) / (4 * a);
        bool reduced = (std::abs(b) <= a) && (a <= c);
        if (b == -a || (a == c && b < 0)) reduced = false;
        if (std::gcd(std::gcd(a, b), c) != 1) reduced = false;
        if (reduced) ++count;
      }
    if (class_number(D) != count) ok = false;
  }
  // Newton polygon valuations against products with known roots
  std::mt19937_64 rng(77);
  for (int it = 0; it < 100; ++it) {
    long q = std::vector<long>{2, 3, 5}[rng() % 3];
    QPoly f({mpq_class(1)});
    std::vector<long> expect;
    int deg = 2 + int(rng() % 4);
    for (int k = 0; k < deg; ++k) {
      mpq_class r(long(rng() % 400) + 1, long(rng() % 400) + 1);
      r.canonicalize();
      expect.push_back(vp_q(r, q));
      f = f * QPoly({-r, mpq_class(1)});
    }
    std::sort(expect.begin(), expect.end());
    std::vector<long> got;
    for (const auto& [val, mult] : newton_polygon_root_valuations(f, q)) {
      if (val.get_den() != 1) {
        ok = false;
        continue;
      }
      for (int m = 0; m < mult; ++m) got.push_back(mpz_class(val.get_num()).get_si());
    }
    std::sort(got.begin(), got.end());
    if (got != expect) ok = false;
  }
  // local intersection against agreement length of reductions mod p^n
  mpz_class p(5);
  auto reduce_mod = [&](const mpq_class& x, const mpz_class& pn) -> mpz_class {
    mpz_class den_inv;
    mpz_class den = x.get_den() % pn;
    if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), pn.get_mpz_t()) == 0) return mpz_class(-1);
    mpz_class r = (x.get_num() % pn * den_inv) % pn;
    return ((r + pn) % pn);
  };
  for (int it = 0; it < 100; ++it) {
    mpq_class x(long(rng() % 4000) - 2000, long(rng() % 60) + 1);
    mpq_class y(long(rng() % 4000) - 2000, long(rng() % 60) + 1);
    x.canonicalize();
    y.canonicalize();
    if (x == y || x == 0 || y == 0) continue;
    long lhs = local_intersection(P1Point::of(x), P1Point::of(y), p);
    mpq_class a = x, b = y;
    if (vp_q(x, p) < 0 || vp_q(y, p) < 0) {
      if (vp_q(x, p) < 0 && vp_q(y, p) < 0) {
        a = 1 / x;
        b = 1 / y;
      } else {
        if (lhs != 0) ok = false;
        continue;
      }
    }
    long agree = 0;
    mpz_class pn = 1;
    for (int n = 1; n <= 40; ++n) {
      pn *= p;
      mpz_class ra = reduce_mod(a, pn), rb = reduce_mod(b, pn);
      if (ra < 0 || rb < 0 || ra != rb) break;
      agree = n;
    }
    if (lhs != agree) ok = false;
  }
  report(9, "oracles: class numbers to 10^4, Newton polygons, intersections", ok, t.secs());
}

// 10: fundamental units and the discrepancy trend
void criterion10() {
  Timer t;
  QuadUnit u2 = fundamental_unit(2), u3 = fundamental_unit(3), u6 = fundamental_unit(6);
  bool units_ok = u2.a == 1 && u2.b == 1 && u3.a == 2 && u3.b == 1 && u6.a == 5 && u6.b == 2;
  EquidistResult small = equidist_diagnostic(1000);
  EquidistResult big = equidist_diagnostic(100000);
  bool trend = big.discrepancy < small.discrepancy;
  std::string note = "D*(10^3) = " + std::to_string(small.discrepancy) +
                     ", D*(10^5) = " + std::to_string(big.discrepancy) +
                     (trend ? "" : "  [trend warning, non-fatal]");
  report(10, "fundamental units exact; discrepancy decreasing (qualitative)", units_ok, t.secs(),
         note);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (g_failures) {
    printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  printf("all acceptance criteria passed\n");
  return 0;
}
