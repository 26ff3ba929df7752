#include "e6/arith.hpp"

#include <stdexcept>

namespace e6 {

long vp_z(const mpz_class& n, const mpz_class& p) {
  if (n == 0) throw std::invalid_argument("vp_z: zero argument");
  mpz_class m = abs(n), q, r;
  long v = 0;
  for (;;) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    if (r != 0) return v;
    m = q;
    ++v;
  }
}

long vp_q(const mpq_class& x, const mpz_class& p) {
  if (x == 0) throw std::invalid_argument("vp_q: zero argument");
  long v = 0;
  if (x.get_num() != 0) v += vp_z(x.get_num(), p);
  v -= vp_z(x.get_den(), p);
  return v;
}

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::vector<uint32_t> primes_upto(uint32_t n) {
  std::vector<bool> comp(n + 1, false);
  std::vector<uint32_t> out;
  for (uint32_t i = 2; i <= n; ++i) {
    if (!comp[i]) {
      out.push_back(i);
      for (uint64_t j = uint64_t(i) * i; j <= n; j += i) comp[j] = true;
    }
  }
  return out;
}

static mpz_class pollard_brent(const mpz_class& n, unsigned long seed) {
  // Brent's cycle variant of Pollard rho; returns a nontrivial factor or n.
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(seed);
  mpz_class y = rng.get_z_range(n - 3) + 2;
  mpz_class c = rng.get_z_range(n - 2) + 1;
  mpz_class x, ys, q = 1, g = 1;
  unsigned long r = 1, m = 128;
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
    unsigned long k = 0;
    while (k < r && g == 1) {
      ys = y;
      unsigned long lim = std::min(m, r - k);
      for (unsigned long i = 0; i < lim; ++i) {
        y = (y * y + c) % n;
        q = q * abs(x - y) % n;
      }
      g = gcd(q, n);
      k += m;
    }
    r *= 2;
    if (r > (1ul << 22)) return n;
  }
  if (g == n) {
    do {
      ys = (ys * ys + c) % n;
      g = gcd(abs(x - ys), n);
    } while (g == 1);
  }
  return g;
}

static void factor_rec(const mpz_class& n, int rounds, std::vector<mpz_class>* primes,
                       std::vector<mpz_class>* stuck) {
  if (n == 1) return;
  if (is_prime(n)) { primes->push_back(n); return; }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class r = sqrt(n);
    factor_rec(r, rounds, primes, stuck);
    factor_rec(r, rounds, primes, stuck);
    return;
  }
  for (int i = 0; i < rounds; ++i) {
    mpz_class g = pollard_brent(n, 0x9e3779b9u + 101u * i);
    if (g != n && g != 1) {
      factor_rec(g, rounds, primes, stuck);
      factor_rec(n / g, rounds, primes, stuck);
      return;
    }
  }
  stuck->push_back(n);
}

Factorization factorize(const mpz_class& n, uint32_t trial_bound, int rho_rounds) {
  Factorization f;
  f.complete = true;
  mpz_class m = abs(n);
  if (m == 0) throw std::invalid_argument("factorize: zero");
  std::vector<mpz_class> primes;
  for (uint32_t p : primes_upto(trial_bound == 0 ? 2 : std::min<uint32_t>(trial_bound, 1000000))) {
    if (m == 1) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      while (mpz_divisible_ui_p(m.get_mpz_t(), p)) { m /= p; primes.push_back(p); }
    }
    if (mpz_class(p) * p > m) break;
  }
  std::vector<mpz_class> stuck;
  factor_rec(m, rho_rounds, &primes, &stuck);
  if (!stuck.empty()) f.complete = false;
  std::sort(primes.begin(), primes.end());
  for (size_t i = 0; i < primes.size();) {
    size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    f.factors.emplace_back(primes[i], long(j - i));
    i = j;
  }
  for (const auto& s : stuck) f.factors.emplace_back(s, 1);  // composite, flagged via complete
  return f;
}

int kronecker(const mpz_class& a, const mpz_class& n) {
  return kronecker_transcript(a, n, nullptr);
}

static void push_step(std::vector<SymbolStep>* steps, const char* rule, const mpz_class& top,
                      const mpz_class& bottom, int sign) {
  if (steps) steps->push_back(SymbolStep{rule, top, bottom, sign});
}

int kronecker_transcript(const mpz_class& a0, const mpz_class& n0, std::vector<SymbolStep>* steps) {
  mpz_class a = a0, n = n0;
  int result = 1;
  if (n == 0) {
    int v = (a == 1 || a == -1) ? 1 : 0;
    push_step(steps, "terminal", a, n, v);
    return v;
  }
  if (n < 0) {
    int s = (a < 0) ? -1 : 1;
    result *= s;
    n = -n;
    push_step(steps, "unit", a, n, s);
  }
  long v2 = mpz_scan1(n.get_mpz_t(), 0);
  if (v2 > 0) {
    if (mpz_even_p(a.get_mpz_t())) {
      push_step(steps, "terminal", a, n, 0);
      return 0;
    }
    n >>= v2;
    if (v2 & 1) {
      unsigned long am8 = mpz_fdiv_ui(a.get_mpz_t(), 8);
      int s = (am8 == 3 || am8 == 5) ? -1 : 1;
      result *= s;
      push_step(steps, "strip2", a, n, s);
    } else {
      push_step(steps, "strip2", a, n, 1);
    }
  }
  // n odd positive from here; run binary reciprocity.
  a = ((a % n) + n) % n;
  push_step(steps, "reduce", a, n, 1);
  int t = 1;
  while (a != 0) {
    long k = mpz_scan1(a.get_mpz_t(), 0);
    if (k > 0) {
      a >>= k;
      if (k & 1) {
        unsigned long nm8 = mpz_fdiv_ui(n.get_mpz_t(), 8);
        if (nm8 == 3 || nm8 == 5) t = -t;
      }
      push_step(steps, "strip2", a, n, t);
    }
    // flip (a/n) -> (n/a), both odd
    int s = 1;
    if (mpz_fdiv_ui(a.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(n.get_mpz_t(), 4) == 3) s = -1;
    std::swap(a, n);
    t *= s;
    a = a % n;
    push_step(steps, "flip", a, n, t);
  }
  int v = (n == 1) ? t : 0;
  result *= v;
  push_step(steps, "terminal", a, n, result);
  return result;
}

bool rational_reconstruct(const Real& x, const mpz_class& qmax, const Real& tol, mpq_class* out) {
  mpfr_prec_t p = x.prec();
  // A convergent p/q of a generic number only approximates to about 1/q^2.
  // Accepting requires beating that rate by a wide margin as well as the
  // caller's tolerance, so junk convergents inside the tolerance window are
  // rejected and trigger precision escalation instead.
  auto accept = [&](const mpq_class& cand) {
    Real err = rabs(x - Real::of(cand, p));
    if (!(err < tol)) return false;
    Real q2 = Real::of(mpz_class(cand.get_den() * cand.get_den()), p);
    return err * q2 < pow10(6, p);
  };
  mpz_class p0 = 1, q0 = 0, p1, q1;
  Real cur = x;
  {
    Real fl = rfloor(cur);
    mpz_class a;
    mpfr_get_z(a.get_mpz_t(), fl.raw(), MPFR_RNDN);
    p1 = a;
    q1 = 1;
    cur = cur - fl;
  }
  for (int it = 0; it < 4 * (int)p; ++it) {
    mpq_class cand(p1, q1);
    cand.canonicalize();
    if (accept(cand)) { *out = cand; return true; }
    if (cur.is_zero()) break;
    cur = 1l / cur;
    Real fl = rfloor(cur);
    mpz_class a;
    mpfr_get_z(a.get_mpz_t(), fl.raw(), MPFR_RNDN);
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > qmax) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    cur = cur - fl;
  }
  mpq_class cand(p1, q1);
  cand.canonicalize();
  if (accept(cand)) { *out = cand; return true; }
  return false;
}

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  q.canonicalize();
  return q;
}

}  // namespace e6
