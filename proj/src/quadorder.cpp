#include "e6/quadorder.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "e6/arith.hpp"

namespace e6 {

long class_number(const mpz_class& D, std::vector<ReducedForm>* forms) {
  if (D >= 0) throw std::invalid_argument("class_number: D must be negative");
  mpz_class m4 = ((D % 4) + 4) % 4;
  if (m4 != 0 && m4 != 1) throw std::invalid_argument("class_number: D must be 0 or 1 mod 4");
  if (forms) forms->clear();
  long h = 0;
  mpz_class absD = -D;
  for (mpz_class a = 1; 3 * a * a <= absD; ++a) {
    for (mpz_class b = -a + 1; b <= a; ++b) {
      if (((b - D) % 2) != 0) continue;
      mpz_class t = b * b - D;
      if (t % (4 * a) != 0) continue;
      mpz_class c = t / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (gcd(gcd(a, b), c) != 1) continue;
      ++h;
      if (forms) forms->push_back({a, b, c});
    }
  }
  return h;
}

static bool is_fundamental(const mpz_class& D) {
  if (D >= 0 || D == 0) return false;
  mpz_class m4 = ((D % 4) + 4) % 4;
  auto squarefree = [](const mpz_class& n) {
    mpz_class m = abs(n);
    for (mpz_class p = 2; p * p <= m; ++p)
      if (m % (p * p) == 0) return false;
    return true;
  };
  if (m4 == 1) return squarefree(D);
  if (m4 == 0) {
    mpz_class q = D / 4;
    mpz_class qm4 = ((q % 4) + 4) % 4;
    return (qm4 == 2 || qm4 == 3) && squarefree(q);
  }
  return false;
}

QuadOrderData quad_order_data(const mpz_class& D) {
  QuadOrderData out;
  out.D = D;
  out.h = class_number(D);
  // Conductor: largest f with D = f^2 D0, D0 fundamental.
  mpz_class f_best = 0;
  for (mpz_class f = 1; f * f <= -D; ++f) {
    if (D % (f * f) != 0) continue;
    if (is_fundamental(D / (f * f))) f_best = f;
  }
  if (f_best == 0) throw std::logic_error("no fundamental core for discriminant");
  out.conductor = f_best;
  out.fundamental_disc = D / (f_best * f_best);

  auto eichler = [&](long p) -> int {
    if (out.conductor % p == 0) return 1;
    return kronecker(out.fundamental_disc, p);
  };
  out.eichler_2 = eichler(2);
  out.eichler_3 = eichler(3);
  out.s = out.h * (1 - out.eichler_2) * (1 - out.eichler_3);
  int ramified = 0;
  for (long p : {2l, 3l})
    if (kronecker(out.fundamental_disc, p) == 0 && out.conductor % p != 0) ++ramified;
  out.w2_size = 1 << ramified;
  out.h_prime = mpq_class(out.h, out.w2_size);
  out.h_prime.canonicalize();
  out.h_prime_integral = out.h_prime.get_den() == 1;
  return out;
}

mpz_class family_disc(Family f, long l) {
  switch (f) {
    case Family::MinusFourL: return mpz_class(-4 * l);
    case Family::MinusL: return mpz_class(-l);
    case Family::MinusThreeL: return mpz_class(-3 * l);
  }
  throw std::logic_error("family_disc");
}

long family_congruence(Family f) {
  switch (f) {
    case Family::MinusFourL: return 13;
    case Family::MinusL: return 19;
    case Family::MinusThreeL: return 1;
  }
  throw std::logic_error("family_congruence");
}

bool family_of(const mpz_class& D, Family* fam, long* l) {
  if (D >= 0) return false;
  for (Family f : {Family::MinusFourL, Family::MinusL, Family::MinusThreeL}) {
    long k = (f == Family::MinusFourL) ? 4 : (f == Family::MinusL ? 1 : 3);
    if (D % k != 0) continue;
    mpz_class cand = -D / k;
    if (!cand.fits_slong_p()) continue;
    long lc = cand.get_si();
    if (lc < 5 || !is_prime(cand)) continue;
    if (lc % 24 != family_congruence(f)) continue;
    *fam = f;
    *l = lc;
    return true;
  }
  return false;
}

ParityCheck parity_check(Family fam, long l) {
  if (!is_prime(mpz_class(l)) || l % 24 != family_congruence(fam))
    throw std::invalid_argument("parity_check: l not prime in the required class mod 24");
  QuadOrderData qd = quad_order_data(family_disc(fam, l));
  ParityCheck pc;
  pc.h = qd.h;
  pc.h_prime = qd.h_prime;
  std::ostringstream os;
  bool ok = qd.h_prime_integral;
  long hp = qd.h_prime_integral ? mpz_class(qd.h_prime.get_num()).get_si() : -1;
  switch (fam) {
    case Family::MinusFourL:
      ok = ok && (qd.h % 4 == 2) && (hp % 2 == 1);
      os << "family -4l: expected h = 2 mod 4 and h' odd; got h = " << qd.h << ", h' = " << hp;
      break;
    case Family::MinusL:
      ok = ok && (qd.h % 2 == 1) && (hp % 2 == 1);
      os << "family -l: expected h odd and h' odd; got h = " << qd.h << ", h' = " << hp;
      break;
    case Family::MinusThreeL:
      ok = ok && (qd.h % 4 == 0) && (hp % 2 == 0);
      os << "family -3l: expected h = 0 mod 4 and h' even; got h = " << qd.h << ", h' = " << hp;
      break;
  }
  pc.consistent = ok;
  pc.detail = os.str();
  return pc;
}

static bool square_mod_prime_power(const mpz_class& a0, long p, long k) {
  mpz_class pk;
  mpz_pow_ui(pk.get_mpz_t(), mpz_class(p).get_mpz_t(), k);
  mpz_class a = ((a0 % pk) + pk) % pk;
  if (a == 0) return true;
  long v = vp_z(a, p);
  if (v >= k) return true;
  if (v % 2 == 1) return false;
  mpz_class u = a;
  for (long i = 0; i < v; ++i) u /= p;
  if (p != 2) return kronecker(u, p) == 1;
  long rem = k - v;
  if (rem == 1) return true;
  if (rem == 2) return u % 4 == 1;
  return u % 8 == 1;
}

bool is_square_mod(const mpz_class& a, const mpz_class& m) {
  if (m < 1) throw std::invalid_argument("is_square_mod: modulus must be positive");
  Factorization f = factorize(m);
  if (!f.complete) throw std::runtime_error("is_square_mod: could not factor modulus");
  for (const auto& [p, k] : f.factors) {
    if (!p.fits_slong_p()) throw std::runtime_error("is_square_mod: prime too large");
    if (!square_mod_prime_power(a, p.get_si(), k)) return false;
  }
  return true;
}

QuadUnit fundamental_unit(long m) {
  if (m != 2 && m != 3 && m != 6) throw std::invalid_argument("fundamental_unit: m in {2,3,6}");
  for (mpz_class b = 1;; ++b) {
    for (int n : {-1, +1}) {
      mpz_class a2 = m * b * b + n;
      if (a2 < 0) continue;
      if (mpz_perfect_square_p(a2.get_mpz_t())) {
        QuadUnit u;
        u.m = m;
        u.a = sqrt(a2);
        u.b = b;
        u.norm = n;
        return u;
      }
    }
  }
}

// Minimal positive (a, b) with |a^2 - m b^2| = l, by scanning b.
static bool split_prime(long m, uint32_t l, mpz_class* aa, mpz_class* bb) {
  mpz_class L = l;
  for (long iter = 0; iter < 2; ++iter) {
    mpz_class cap = 8 * (iter + 1) * (mpz_class(long(std::sqrt(double(l) / m))) + 2);
    for (mpz_class b = 1; b <= cap; ++b) {
      mpz_class base = m * b * b;
      for (int sg : {-1, +1}) {
        mpz_class a2 = base + sg * L;
        if (a2 <= 0) continue;
        if (mpz_perfect_square_p(a2.get_mpz_t())) {
          *aa = sqrt(a2);
          *bb = b;
          return true;
        }
      }
    }
  }
  return false;
}

static uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = (__uint128_t)r * a % p;
    a = (__uint128_t)a * a % p;
    e >>= 1;
  }
  return r;
}

// Tonelli-Shanks square root mod an odd prime; requires (n/p) = 1.
static uint64_t sqrt_mod(uint64_t n, uint64_t p) {
  n %= p;
  if (p % 4 == 3) return powmod_u64(n, (p + 1) / 4, p);
  uint64_t q = p - 1, s = 0;
  while (q % 2 == 0) { q /= 2; ++s; }
  uint64_t z = 2;
  while (kronecker(mpz_class((unsigned long)z), mpz_class((unsigned long)p)) != -1) ++z;
  uint64_t m = s, c = powmod_u64(z, q, p), t = powmod_u64(n, q, p),
           r = powmod_u64(n, (q + 1) / 2, p);
  while (t != 1) {
    uint64_t i = 0, tt = t;
    while (tt != 1) { tt = (__uint128_t)tt * tt % p; ++i; }
    uint64_t b = powmod_u64(c, 1ull << (m - i - 1), p);
    m = i;
    c = (__uint128_t)b * b % p;
    t = (__uint128_t)t * c % p;
    r = (__uint128_t)r * b % p;
  }
  return r;
}

EquidistResult equidist_diagnostic(uint32_t bound) {
  if (bound < 10) throw std::invalid_argument("equidist_diagnostic: bound too small");
  EquidistResult res;
  QuadUnit e1 = fundamental_unit(2), e3 = fundamental_unit(6);
  double log_e1 = std::log(e1.a.get_d() + e1.b.get_d() * std::sqrt(2.0));
  double log_e3 = std::log(e3.a.get_d() + e3.b.get_d() * std::sqrt(6.0));
  for (uint32_t l : primes_upto(bound ? bound - 1 : 0)) {
    if (l < 5) continue;
    if (kronecker(2, l) != 1 || kronecker(3, l) != 1) continue;  // split in both fields
    mpz_class a1, b1, a3, b3;
    if (!split_prime(2, l, &a1, &b1) || !split_prime(6, l, &a3, &b3))
      throw std::runtime_error("equidist: norm form search exhausted at l = " + std::to_string(l));
    // 1/2 log |pi / pi'| = log(a + b sqrt m) - (1/2) log l, reduced mod the
    // unit log. The generator found belongs to one of the two conjugate
    // primes above l; pin the prime containing sqrt(m) - r for the canonical
    // root r in (0, l/2), flipping to the conjugate class when needed.
    auto stat = [&](const mpz_class& a, const mpz_class& b, long m, double sqm, double loge) {
      double v = std::log(a.get_d() + b.get_d() * sqm) - 0.5 * std::log(double(l));
      uint64_t r = sqrt_mod((uint64_t)m, l);
      if (r > l / 2) r = l - r;
      uint64_t am = mpz_class(a % l).get_ui(), bm = mpz_class(b % l).get_ui();
      if (am != (__uint128_t)r * bm % l) v = -v;  // conjugate prime: negate
      v = std::fmod(v, loge);
      if (v < 0) v += loge;
      return v;
    };
    UnitLogPair p;
    p.l = l;
    p.u1 = stat(a1, b1, 2, std::sqrt(2.0), log_e1);
    p.u3 = stat(a3, b3, 6, std::sqrt(6.0), log_e3);
    p.n1 = p.u1 / log_e1;
    p.n3 = p.u3 / log_e3;
    res.pairs.push_back(p);
  }
  // Star discrepancy estimated on a 64x64 corner grid.
  const int G = 64;
  std::vector<std::vector<int>> hist(G + 1, std::vector<int>(G + 1, 0));
  for (const auto& p : res.pairs) {
    int i = std::min(G - 1, int(p.n1 * G));
    int j = std::min(G - 1, int(p.n3 * G));
    hist[i + 1][j + 1]++;
  }
  for (int i = 1; i <= G; ++i)
    for (int j = 1; j <= G; ++j)
      hist[i][j] += hist[i - 1][j] + hist[i][j - 1] - hist[i - 1][j - 1];
  double disc = 0;
  double n = double(res.pairs.size());
  if (n > 0) {
    for (int i = 0; i <= G; ++i)
      for (int j = 0; j <= G; ++j) {
        double emp = hist[i][j] / n;
        double vol = (double(i) / G) * (double(j) / G);
        disc = std::max(disc, std::fabs(emp - vol));
      }
  }
  res.discrepancy = disc;
  return res;
}

}  // namespace e6
