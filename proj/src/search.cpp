#include "e6/search.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "e6/arith.hpp"
#include "e6/checks.hpp"
#include "e6/quadorder.hpp"

namespace e6 {

namespace {

// F_p polynomial power x^q mod f with q a big integer, for the mod-p
// irreducibility certificate.
FpPoly fp_xpow_mod(const mpz_class& e, const FpPoly& f) {
  FpPoly r{f.l, {1}};
  FpPoly x{f.l, {0, 1}};
  FpPoly base = fp_mod(x, f);
  mpz_class k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t())) r = fp_mod(fp_mul(r, base), f);
    base = fp_mod(fp_mul(base, base), f);
    k >>= 1;
  }
  return r;
}

bool irreducible_mod_p(const QPoly& f, uint64_t p) {
  FpPoly fp;
  try {
    fp = fp_from_qpoly(f, p);
  } catch (const std::domain_error&) {
    return false;
  }
  if (fp.degree() != f.degree()) return false;
  // squarefree and no factor of degree <= deg/2
  FpPoly d = fp_deriv(fp);
  if (d.c.empty()) return false;
  if (fp_gcd(fp, d).degree() != 0) return false;
  int n = fp.degree();
  mpz_class q = p;
  for (int i = 1; 2 * i <= n; ++i) {
    mpz_class qi;
    mpz_pow_ui(qi.get_mpz_t(), q.get_mpz_t(), i);
    FpPoly xq = fp_xpow_mod(qi, fp);
    // gcd(x^{p^i} - x, f)
    FpPoly diff = xq;
    if (diff.c.size() < 2) diff.c.resize(2, 0);
    diff.c[1] = (diff.c[1] + p - 1) % p;
    diff.trim();
    if (fp_gcd(fp, diff).degree() != 0) return false;
  }
  return true;
}

}  // namespace

QPoly parse_poly_string(const std::string& s) {
  size_t i = 0;
  auto skip = [&] { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; };
  auto number = [&]() -> mpq_class {
    size_t start = i;
    while (i < s.size() && (std::isdigit((unsigned char)s[i]) || s[i] == '/')) ++i;
    if (start == i) throw std::invalid_argument("polynomial parse error at '" + s.substr(start) + "'");
    return parse_rational(s.substr(start, i - start));
  };
  std::vector<mpq_class> coeffs;
  auto add = [&](long k, const mpq_class& c) {
    if ((long)coeffs.size() <= k) coeffs.resize(k + 1, mpq_class(0));
    coeffs[k] += c;
  };
  skip();
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    skip();
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      sign = (s[i] == '-') ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      throw std::invalid_argument("expected + or - in polynomial");
    }
    first = false;
    mpq_class coef = 1;
    bool have_coef = false;
    if (i < s.size() && std::isdigit((unsigned char)s[i])) {
      coef = number();
      have_coef = true;
      skip();
      if (i < s.size() && s[i] == '*') { ++i; skip(); }
    }
    long k = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      k = 1;
      skip();
      if (i < s.size() && s[i] == '^') {
        ++i;
        skip();
        mpq_class e = number();
        if (e.get_den() != 1 || e < 0) throw std::invalid_argument("bad exponent");
        k = mpz_class(e.get_num()).get_si();
      }
    } else if (!have_coef) {
      throw std::invalid_argument("expected coefficient or x");
    }
    add(k, sign * coef);
    skip();
  }
  if (coeffs.empty()) throw std::invalid_argument("empty polynomial");
  return QPoly(std::move(coeffs));
}

ModuliInput parse_moduli(const QPoly& minpoly, long degree_mult) {
  if (minpoly.degree() < 1) throw std::invalid_argument("minimal polynomial must be nonconstant");
  if (!minpoly.is_monic()) throw std::invalid_argument("minimal polynomial must be monic");
  if (degree_mult < 1) throw std::invalid_argument("degree multiplier must be positive");
  if (minpoly.coeff(0) == 0)
    throw std::invalid_argument("j0 = 0 is the order-4 elliptic point; excluded");
  {
    mpq_class at = minpoly.eval(mpq_class(-16, 27));
    if (at == 0) throw std::invalid_argument("j0 = -16/27 is the order-2 elliptic point; excluded");
  }
  if (minpoly.degree() > 1) {
    if (poly_gcd(minpoly, minpoly.derivative()).degree() != 0)
      throw std::invalid_argument("minimal polynomial is not squarefree");
    bool certified = false;
    for (uint32_t p : primes_upto(200)) {
      if (p < 5) continue;
      if (irreducible_mod_p(minpoly, p)) { certified = true; break; }
    }
    if (!certified)
      throw std::invalid_argument(
          "could not certify irreducibility modulo any small prime (best-effort check)");
  }

  ModuliInput in;
  in.minpoly = minpoly;
  in.degree_mult = degree_mult;
  in.g = minpoly.degree();
  in.field_degree = in.g * degree_mult;
  // Nm over Q(j0) = (-1)^g a0; over L raise to degree_mult.
  mpq_class nm0 = (in.g % 2 == 0) ? minpoly.coeff(0) : mpq_class(-minpoly.coeff(0));
  mpq_class nm = 1;
  for (long i = 0; i < degree_mult; ++i) nm *= nm0;
  nm.canonicalize();
  in.n = nm.get_num();
  in.d = nm.get_den();
  if (gcd(gcd(in.n, in.d), mpz_class(6)) != 1)
    throw std::invalid_argument("hypothesis gcd(n, d, 6) = 1 fails for Nm(j0) = " + nm.get_str());
  in.real_roots = isolate_real_roots(minpoly);
  return in;
}

const char* val_signs_name(ValSigns v) {
  switch (v) {
    case ValSigns::AllNonpositive: return "all_nonpositive";
    case ValSigns::AllNonnegative: return "all_nonnegative";
    case ValSigns::AllZero: return "all_zero";
    case ValSigns::Mixed: return "mixed";
  }
  return "?";
}

ValSigns local_valuation_signs(const ModuliInput& input, long q) {
  auto vals = newton_polygon_root_valuations(input.minpoly, q);
  bool has_neg = false, has_pos = false;
  for (const auto& [v, mult] : vals) {
    if (v < 0) has_neg = true;
    if (v > 0) has_pos = true;
  }
  if (!has_neg && !has_pos) return ValSigns::AllZero;
  if (!has_neg) return ValSigns::AllNonnegative;
  if (!has_pos) return ValSigns::AllNonpositive;
  return ValSigns::Mixed;
}

mpq_class norm_27j_plus_16(const ModuliInput& input) {
  // prod (27 r + 16) = 27^g (-1)^g f(-16/27), then the degree_mult power.
  mpq_class v = input.minpoly.eval(mpq_class(-16, 27));
  mpz_class p27;
  mpz_ui_pow_ui(p27.get_mpz_t(), 27, input.g);
  v *= p27;
  if (input.g % 2 == 1) v = -v;
  mpq_class out = 1;
  for (long i = 0; i < input.degree_mult; ++i) out *= v;
  out.canonicalize();
  return out;
}

namespace {

void add_primes_of(const mpz_class& n, std::vector<long>* out) {
  if (n == 0) throw std::invalid_argument("prime_set: zero norm");
  Factorization f = factorize(abs(n));
  if (!f.complete) throw std::runtime_error("prime_set: factorization incomplete");
  for (const auto& [p, e] : f.factors) {
    if (!p.fits_slong_p()) throw std::runtime_error("prime_set: prime exceeds machine range");
    out->push_back(p.get_si());
  }
}

// Primes where some conjugate has nonzero valuation: a denominator prime of
// some coefficient, or a prime dividing the constant term of an integral
// polynomial.
void occurring_primes(const QPoly& f, std::vector<long>* out) {
  mpz_class den = 1;
  for (const auto& c : f.c) den = lcm(den, c.get_den());
  if (den > 1) add_primes_of(den, out);
  // Slope-zero requires v_q(a0) = 0 once all coefficients are q-integral.
  mpq_class a0 = f.coeff(0);
  mpz_class num = a0.get_num();
  if (num != 0) {
    Factorization fn = factorize(abs(num));
    if (!fn.complete) throw std::runtime_error("prime_set: factorization incomplete");
    for (const auto& [p, e] : fn.factors) {
      bool integral = true;
      for (const auto& c : f.c)
        if (c.get_den() % p == 0) { integral = false; break; }
      if (integral && a0.get_den() % p != 0) {
        if (!p.fits_slong_p()) throw std::runtime_error("prime_set: prime exceeds machine range");
        out->push_back(p.get_si());
      }
    }
  }
}

}  // namespace

std::vector<long> prime_set(const ModuliInput& input) {
  std::vector<long> out = {2, 3};
  occurring_primes(input.minpoly, &out);
  // minimal polynomial of 27 j0 + 16
  QPoly shifted = compose_affine(input.minpoly, mpq_class(1, 27), mpq_class(-16, 27));
  mpz_class p27;
  mpz_ui_pow_ui(p27.get_mpz_t(), 27, input.g);
  shifted = shifted * mpq_class(p27);
  occurring_primes(shifted, &out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int case_select(const ModuliInput& input, CaseTrace* trace) {
  CaseTrace tr{};
  tr.v2 = local_valuation_signs(input, 2);
  tr.v3 = local_valuation_signs(input, 3);
  mpq_class dQ = mpq_class(input.d) * norm_27j_plus_16(input);
  tr.v3_d_nmQ = vp_q(dQ, 3);
  tr.parity_odd = ((input.field_degree + tr.v3_d_nmQ) % 2 + 2) % 2 == 1;
  mpq_class e1(-16, 27), e2(0);
  tr.roots_in_I1 = count_roots_below(input.minpoly, e1);
  tr.roots_in_I2 = count_roots_open(input.minpoly, e1, e2);
  tr.roots_in_I3 = count_roots_above(input.minpoly, e2);
  auto le = [](ValSigns v) { return v == ValSigns::AllNonpositive || v == ValSigns::AllZero; };
  auto ge = [](ValSigns v) { return v == ValSigns::AllNonnegative || v == ValSigns::AllZero; };
  tr.cond[1] = le(tr.v2) && le(tr.v3) && (tr.parity_odd || tr.roots_in_I2 > 0);
  tr.cond[2] = ge(tr.v2) && le(tr.v3) && tr.roots_in_I3 > 0;
  tr.cond[3] = (input.field_degree % 2 == 0) && ge(tr.v2) && ge(tr.v3) &&
               (tr.roots_in_I1 > 0 || tr.roots_in_I3 > 0);
  if (trace) *trace = tr;
  for (int c = 1; c <= 3; ++c)
    if (tr.cond[c]) return c;
  return 0;
}

mpz_class choose_clearing_d(const ModuliInput& input, int case_no,
                            const std::vector<long>& primeset) {
  mpz_class d = 1;
  for (long q : primeset) {
    bool allowed = true;
    if (case_no == 2 && q == 2) allowed = false;
    if (case_no == 3 && (q == 2 || q == 3)) allowed = false;
    auto vals = newton_polygon_root_valuations(input.minpoly, q);
    // The worst subset product of conjugates has valuation minus the sum of
    // the negative root valuations; e_q = ceil of that sum over L. Taking
    // the exact sum (rather than a per-root bound) keeps dQ odd in case 1.
    mpq_class need = 0;
    for (const auto& [v, m] : vals)
      if (v < 0) need += mpq_class(-v) * m;
    if (need == 0) continue;
    if (!allowed)
      throw std::runtime_error("case " + std::to_string(case_no) +
                               " forbids clearing the prime " + std::to_string(q) +
                               " but j0 has a pole there (hypothesis violation)");
    need *= input.degree_mult;
    mpz_class e = (need.get_num() + need.get_den() - 1) / need.get_den();
    mpz_class qe;
    mpz_pow_ui(qe.get_mpz_t(), mpz_class(q).get_mpz_t(), e.get_ui());
    d *= qe;
  }
  return d;
}

NormProfile norm_profile(const ModuliInput& input, const HeegnerPolynomial& P,
                         const mpz_class& dchain) {
  NormProfile out;
  out.h_prime = P.h_prime;
  QPoly pmonic = qpoly_of(P) * mpq_class(mpz_class(1), P.b);
  mpq_class res = resultant(input.minpoly, pmonic);
  if (res == 0) { out.degenerate = true; return out; }
  // Nm(P_D(j0)) = b^(g e) * res^e
  mpq_class nm = 1;
  for (long i = 0; i < input.degree_mult; ++i) nm *= res;
  mpz_class bpow;
  mpz_pow_ui(bpow.get_mpz_t(), P.b.get_mpz_t(), (unsigned long)(input.g * input.degree_mult));
  nm *= bpow;
  nm.canonicalize();
  out.nmP = nm;
  out.s = sgn(nm);
  out.nmQ = norm_27j_plus_16(input);
  out.s_prime = sgn(out.nmQ);

  mpz_class dh;
  mpz_pow_ui(dh.get_mpz_t(), dchain.get_mpz_t(), (unsigned long)P.h_prime);
  mpq_class Nq = mpq_class(dh) * abs(nm);
  Nq.canonicalize();
  if (Nq.get_den() != 1)
    throw std::runtime_error("N = d^{h'} |Nm P_D(j0)| is not integral; clearing d too small");
  out.N = Nq.get_num();

  mpq_class dQq = mpq_class(dchain) * abs(out.nmQ);
  dQq.canonicalize();
  if (dQq.get_den() != 1)
    throw std::runtime_error("d |Nm(27 j0 + 16)| is not integral; clearing d too small");
  out.dQ = dQq.get_num();
  out.v3_dQ = (out.dQ == 0) ? 0 : vp_z(out.dQ, 3);
  out.v2_Q = vp_q(abs(out.nmQ), 2);
  out.coprime6 = gcd(out.N, mpz_class(6)) == 1;
  return out;
}

std::vector<long> sieve_l(int case_no, const std::vector<long>& primeset, long l_max) {
  if (case_no < 1 || case_no > 3) throw std::invalid_argument("sieve_l: case out of range");
  long cls = case_no == 1 ? 13 : (case_no == 2 ? 19 : 1);
  std::vector<long> out;
  for (uint32_t l : primes_upto((uint32_t)l_max)) {
    if (l < 5 || (long)l % 24 != cls) continue;
    bool ok = true;
    for (long q : primeset) {
      if (q == 2 || q == 3) continue;
      if (case_no == 1 && kronecker(mpz_class(-(long)l), q) != 1) ok = false;
      if (case_no == 2 &&
          (kronecker(q, (long)l) != 1 || kronecker(mpz_class(-(long)l), q) != 1))
        ok = false;
      if (case_no == 3 && kronecker(mpz_class(-3 * (long)l), q) != 1) ok = false;
      if (!ok) break;
    }
    if (ok) out.push_back((long)l);
  }
  return out;
}

// ---- placement machinery ----

namespace {

using Iv = std::pair<mpq_class, mpq_class>;

mpq_class width(const Iv& iv) { return iv.second - iv.first; }

// position of the single root in iv relative to the non-root rational c
int root_vs_rational(const QPoly& f, Iv* iv, const mpq_class& c) {
  if (f.sign_at(c) == 0) throw std::domain_error("comparison endpoint is a root");
  for (int it = 0; it < 300; ++it) {
    if (iv->second <= c) return -1;
    if (iv->first >= c) return +1;
    *iv = refine_root(f, *iv, width(*iv) / 4);
  }
  throw std::runtime_error("interval refinement did not separate root from endpoint");
}

// -1 if root(f, a) < root(g, b), +1 if greater; roots are distinct.
int root_vs_root(const QPoly& f, Iv* a, const QPoly& g, Iv* b) {
  for (int it = 0; it < 300; ++it) {
    if (a->second <= b->first) return -1;
    if (b->second <= a->first) return +1;
    *a = refine_root(f, *a, width(*a) / 4);
    *b = refine_root(g, *b, width(*b) / 4);
  }
  throw std::runtime_error("interval refinement did not separate two roots");
}

struct AbsIv {
  mpq_class lo, hi;
};

AbsIv abs_shift(const Iv& iv, const mpq_class& c) {
  mpq_class a = iv.first + c, b = iv.second + c;
  if (a >= 0) return {a, b};
  if (b <= 0) return {-b, -a};
  return {mpq_class(0), std::max(mpq_class(-a), b)};
}

// |root(f,a) + c| < |root(g,b) + c| ?
bool abs_less(const QPoly& f, Iv* a, const QPoly& g, Iv* b, const mpq_class& c) {
  for (int it = 0; it < 300; ++it) {
    AbsIv A = abs_shift(*a, c), B = abs_shift(*b, c);
    if (A.hi < B.lo) return true;
    if (B.hi < A.lo) return false;
    *a = refine_root(f, *a, width(*a) / 4);
    *b = refine_root(g, *b, width(*b) / 4);
  }
  throw std::runtime_error("interval refinement did not separate absolute values");
}

int count_open_safe(const QPoly& f, mpq_class a, mpq_class b) {
  // nudge endpoints off roots of f if needed
  mpq_class step = (b - a) / 1024;
  for (int k = 0; k < 64 && f.sign_at(a) == 0; ++k) a += step / (k + 1);
  for (int k = 0; k < 64 && f.sign_at(b) == 0; ++k) b -= step / (k + 1);
  return count_roots_open(f, a, b);
}

// isolating interval of the unique root of P in (lo, hi); lo/hi may be
// unbounded via has_lo/has_hi
Iv root_interval_in(const QPoly& f, bool has_lo, const mpq_class& lo, bool has_hi,
                    const mpq_class& hi) {
  auto roots = isolate_real_roots(f);
  for (auto& iv : roots) {
    Iv copy = iv;
    if (has_lo && root_vs_rational(f, &copy, lo) < 0) continue;
    if (has_hi && root_vs_rational(f, &copy, hi) > 0) continue;
    return copy;
  }
  throw std::runtime_error("expected root not found in the interval");
}

}  // namespace

Placement root_placement(int case_no, const ModuliInput& input, const HeegnerPolynomial& P,
                         const NormProfile& profile) {
  Placement out;
  QPoly f = qpoly_of(P);
  const QPoly& m = input.minpoly;
  mpq_class e16(-16, 27), zero(0);
  try {
    if (case_no == 1) {
      Iv r = root_interval_in(f, true, e16, true, zero);  // the I2 root
      long kappa = ((input.field_degree + profile.v3_dQ) % 2 + 2) % 2;
      if (kappa == 1) {
        // r + 16/27 smaller than every |j_i + 16/27|
        bool ok = true;
        for (auto jv : input.real_roots) {
          Iv jiv = jv;
          if (!abs_less(f, &r, m, &jiv, mpq_class(16, 27))) { ok = false; break; }
        }
        out.ok = ok;
        out.description = "root in (-16/27, -16/27 + min |j_i + 16/27|)";
      } else {
        // minimal real conjugate in I2, root in (j_t, j_{t+1})
        int t = -1;
        for (size_t i = 0; i < input.real_roots.size(); ++i) {
          Iv jiv = input.real_roots[i];
          if (root_vs_rational(m, &jiv, e16) > 0 && root_vs_rational(m, &jiv, zero) < 0) {
            t = int(i);
            break;
          }
        }
        if (t < 0) { out.ok = false; out.description = "no real conjugate in (-16/27, 0)"; }
        else {
          Iv jt = input.real_roots[t];
          bool above = root_vs_root(f, &r, m, &jt) > 0;
          bool below_next = true;
          if (t + 1 < (int)input.real_roots.size()) {
            Iv jn = input.real_roots[t + 1];
            below_next = root_vs_root(f, &r, m, &jn) < 0;
          }
          out.ok = above && below_next;
          out.description = "root in (j_t, j_{t+1}) with j_t minimal in (-16/27, 0)";
        }
      }
    } else if (case_no == 2) {
      Iv r = root_interval_in(f, true, zero, false, zero);  // the I3 root
      long kappa = ((input.field_degree + profile.v3_dQ + profile.v2_Q) % 2 + 2) % 2;
      long n = count_roots_open(m, e16, zero);
      int t = -1;
      for (size_t i = 0; i < input.real_roots.size(); ++i) {
        Iv jiv = input.real_roots[i];
        if (root_vs_rational(m, &jiv, zero) > 0) { t = int(i); break; }
      }
      if (t < 0) { out.ok = false; out.description = "no real conjugate in (0, inf)"; }
      else {
        Iv jt = input.real_roots[t];
        bool in_0_jt = ((kappa + n) % 2) == 1;
        if (in_0_jt) {
          out.ok = root_vs_root(f, &r, m, &jt) < 0;
          out.description = "root in (0, j_t)";
        } else {
          bool above = root_vs_root(f, &r, m, &jt) > 0;
          bool below_next = true;
          if (t + 1 < (int)input.real_roots.size()) {
            Iv jn = input.real_roots[t + 1];
            below_next = root_vs_root(f, &r, m, &jn) < 0;
          }
          out.ok = above && below_next;
          out.description = "root in (j_t, j_{t+1}) with j_t minimal in (0, inf)";
        }
      }
    } else if (case_no == 3) {
      Iv r1 = root_interval_in(f, false, zero, true, e16);  // the I1 root
      Iv r3 = root_interval_in(f, true, zero, false, zero); // the I3 root
      long inner = -1, outer = -2;
      for (int it = 0; it < 300 && inner != outer; ++it) {
        inner = count_open_safe(m, r1.second, r3.first);
        outer = count_open_safe(m, r1.first, r3.second);
        if (inner != outer) {
          r1 = refine_root(f, r1, width(r1) / 4);
          r3 = refine_root(f, r3, width(r3) / 4);
        }
      }
      if (inner != outer) throw std::runtime_error("could not pin conjugate count between roots");
      out.ok = (inner % 2) == 1;
      out.description = "odd number of real conjugates between the two real roots";
    } else {
      throw std::invalid_argument("root_placement: case out of range");
    }
  } catch (const std::runtime_error& e) {
    out.indeterminate = true;
    out.description = e.what();
  }
  return out;
}

// ---- reciprocity chains ----

namespace {

ChainEntry sym(const std::string& name, const mpz_class& top, const mpz_class& bottom) {
  return ChainEntry{name, top, bottom, kronecker(top, bottom)};
}

void chain_assert(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("reciprocity chain step failed: " + what);
}

}  // namespace

ChainResult jacobi_chain(int case_no, const mpz_class& D, long l, const ModuliInput& input,
                         const NormProfile& profile) {
  ChainResult out;
  const mpz_class& N = profile.N;
  if (N == 1) throw std::invalid_argument("jacobi_chain: N = 1 has no prime divisor");
  if (gcd(N, mpz_class(6)) != 1) throw std::invalid_argument("jacobi_chain: gcd(N, 6) != 1");
  if (N % l == 0) throw std::invalid_argument("jacobi_chain: l divides N (use p = l)");
  int direct = kronecker(D, N);
  long L = input.field_degree;

  if (case_no == 1) {
    ChainEntry m1N = sym("(-1/N)", -1, N);
    ChainEntry lN = sym("(l/N)", l, N);
    ChainEntry Nl = sym("(N/l)", N, l);
    chain_assert(lN.value == Nl.value, "(l/N) = (N/l), l = 1 mod 4");
    ChainEntry dQl = sym("(dQ/l)", profile.dQ, l);
    chain_assert(Nl.value == dQl.value, "(N/l) = (dQ/l), mod-l pairing");
    ChainEntry ldQ = sym("(l/dQ)", l, profile.dQ);
    chain_assert(dQl.value == ldQ.value, "(dQ/l) = (l/dQ), l = 1 mod 4");
    ChainEntry m1dQ = sym("(-1/dQ)", -1, profile.dQ);
    ChainEntry mldQ = sym("(-l/dQ)", mpz_class(-l), profile.dQ);
    chain_assert(ldQ.value == m1dQ.value * mldQ.value, "(l/dQ) = (-1/dQ)(-l/dQ)");
    int three_part = (profile.v3_dQ % 2) ? -1 : 1;
    chain_assert(mldQ.value == three_part, "(-l/dQ) = (-1)^{v3(dQ)} via the sieve conditions");
    out.steps = {m1N, lN, Nl, dQl, ldQ, m1dQ, mldQ};
    out.value = m1N.value * lN.value;
    chain_assert(out.value == direct, "chain value = direct Kronecker");
    int predicted = profile.s * profile.s_prime * (((L + profile.v3_dQ) % 2) ? -1 : 1);
    chain_assert(out.value == predicted, "chain value = s s' (-1)^{[L]+v3(dQ)}");
  } else if (case_no == 2) {
    ChainEntry mlN = sym("(-l/N)", mpz_class(-l), N);
    ChainEntry Nl = sym("(N/l)", N, l);
    chain_assert(mlN.value == Nl.value, "(-l/N) = (N/l), N odd positive");
    mpz_class three_pow;
    mpz_pow_ui(three_pow.get_mpz_t(), mpz_class(3).get_mpz_t(), (unsigned long)L);
    mpz_class sub = profile.s * profile.s_prime * three_pow * profile.dQ;
    ChainEntry subl = sym("(ss' 3^[L] dQ / l)", sub, l);
    chain_assert(Nl.value == subl.value, "(N/l) = (ss' 3^[L] dQ / l), mod-l pairing");
    int predicted = profile.s * profile.s_prime *
                    (((L + profile.v3_dQ + profile.v2_Q) % 2) ? -1 : 1);
    chain_assert(subl.value == predicted, "symbol = s s' (-1)^{[L]+v3(dQ)+v2(Q)}");
    out.steps = {mlN, Nl, subl};
    out.value = mlN.value;
    chain_assert(out.value == direct, "chain value = direct Kronecker");
  } else if (case_no == 3) {
    chain_assert(profile.s == -1, "case 3 requires Nm(P_D(j0)) < 0");
    ChainEntry DN = sym("(-3l/N)", D, N);
    mpz_class threel = 3 * mpz_class(l);
    ChainEntry N3l = sym("(N/3l)", N, threel);
    chain_assert(DN.value == N3l.value, "(-3l/N) = (N/3l)");
    ChainEntry m13l = sym("(-1/3l)", -1, threel);
    mpz_class M = -N;  // signed d^{h'} Nm(P_D(j0)), here negative
    ChainEntry M3l = sym("(M/3l)", M, threel);
    chain_assert(N3l.value == m13l.value * M3l.value, "(N/3l) = (-1/3l)(M/3l)");
    ChainEntry M3 = sym("(M/3)", M, 3);
    ChainEntry Ml = sym("(M/l)", M, l);
    chain_assert(M3.value == 1, "M = 1 mod 3 so (M/3) = 1");
    chain_assert(Ml.value == 1, "M is a square mod l (even h' and squared factor)");
    chain_assert(m13l.value == -1, "(-1/3l) = -1");
    out.steps = {DN, N3l, m13l, M3l, M3, Ml};
    out.value = DN.value;
    chain_assert(out.value == direct, "chain value = direct Kronecker");
    chain_assert(out.value == -1, "case 3 chain value is -1");
  } else {
    throw std::invalid_argument("jacobi_chain: case out of range");
  }
  return out;
}

// ---- the search ----

Certificate find_superspecial(const TriangleUniformizer& uni, const ModuliInput& input,
                              const SearchConfig& cfg, SearchStats* stats) {
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  CaseTrace trace;
  int case_no = case_select(input, &trace);
  if (cfg.forced_case != 0) {
    if (!trace.cond[cfg.forced_case])
      throw std::invalid_argument("forced case " + std::to_string(cfg.forced_case) +
                                  " is not applicable to this input");
    case_no = cfg.forced_case;
  }
  if (case_no == 0)
    throw std::runtime_error("none of the three search cases applies to this input");

  std::vector<long> S = prime_set(input);
  mpz_class dchain = choose_clearing_d(input, case_no, S);
  std::vector<long> ls = sieve_l(case_no, S, cfg.l_max);
  st.sieved = (long)ls.size();

  for (long l : ls) {
    ++st.tried;
    mpz_class D = case_no == 1 ? mpz_class(-4 * l)
                               : (case_no == 2 ? mpz_class(-l) : mpz_class(-3 * l));
    HeegnerPolynomial P;
    bool have = false;
    if (cfg.table && cfg.table->lookup(D, &P) && P.fingerprint == uni.fingerprint()) have = true;
    if (!have) {
      try {
        P = heegner_poly(uni, D);
      } catch (const std::exception& e) {
        st.notes.push_back("l=" + std::to_string(l) + ": " + e.what());
        continue;
      }
      if (cfg.table) cfg.table->put(P, cfg.persist_table);
    }
    ChecksReport checks = run_checks(P);
    if (!checks.all_ok()) {
      st.notes.push_back("l=" + std::to_string(l) + ": structural checks failed");
      continue;
    }
    NormProfile profile = norm_profile(input, P, dchain);
    if (profile.degenerate)
      throw std::runtime_error("j0 is a CM point: it is a root of the Heegner polynomial for D = " +
                               D.get_str());
    if (!profile.coprime6) {
      st.notes.push_back("l=" + std::to_string(l) + ": gcd(N, 6) != 1");
      continue;
    }
    if (profile.N == 1) {
      st.notes.push_back("l=" + std::to_string(l) + ": N = 1");
      continue;
    }
    long L = input.field_degree;
    bool sign_ok;
    if (case_no == 1)
      sign_ok = profile.s * profile.s_prime * (((L + profile.v3_dQ) % 2) ? -1 : 1) == -1;
    else if (case_no == 2)
      sign_ok = profile.s * profile.s_prime *
                    (((L + profile.v3_dQ + profile.v2_Q) % 2) ? -1 : 1) == -1;
    else
      sign_ok = profile.s == -1;
    if (!sign_ok) {
      st.notes.push_back("l=" + std::to_string(l) + ": sign condition fails");
      continue;
    }

    Placement place = root_placement(case_no, input, P, profile);

    Certificate cert;
    cert.case_no = case_no;
    cert.D = D;
    cert.l = l;
    cert.minpoly = input.minpoly.c;
    cert.degree_mult = input.degree_mult;
    cert.dchain = dchain;
    cert.N = profile.N;
    cert.placement_ok = place.ok;
    cert.placement_note = place.description;
    cert.nm_S = S;
    cert.digits = uni.digits();
    cert.fingerprint = uni.fingerprint();
    if (cfg.table) cert.table_hash = cfg.table->content_hash();

    auto excluded = [&](const mpz_class& p) {
      for (const auto& q : cfg.excluded_p)
        if (q == p) return true;
      return false;
    };
    if (profile.N % l == 0) {
      if (excluded(mpz_class(l))) {
        st.notes.push_back("l=" + std::to_string(l) + ": p = l excluded by request");
        continue;
      }
      cert.p = l;
      cert.chain.push_back(sym("(D/l)", D, l));
      cert.kron_D_p = cert.chain.back().value;  // 0: p = l divides D
      cert.vpN = vp_z(profile.N, l);
      return cert;
    }
    ChainResult chain;
    try {
      chain = jacobi_chain(case_no, D, l, input, profile);
    } catch (const std::logic_error& e) {
      st.notes.push_back("l=" + std::to_string(l) + ": " + e.what());
      continue;
    }
    if (chain.value != -1) {
      st.notes.push_back("l=" + std::to_string(l) + ": chain value +1");
      continue;
    }
    cert.chain = chain.steps;
    Factorization fac = factorize(profile.N);
    bool found = false, any_witness = false;
    for (const auto& [p, e] : fac.factors) {
      if (!is_prime(p)) continue;  // unfactored cofactor entry
      if (kronecker(D, p) != -1) continue;
      any_witness = true;
      if (excluded(p)) continue;
      cert.p = p;
      cert.vpN = vp_z(profile.N, p);
      cert.kron_D_p = -1;
      found = true;
      break;
    }
    if (!found) {
      if (any_witness) {
        st.notes.push_back("l=" + std::to_string(l) + ": all witnesses excluded by request");
      } else if (fac.complete) {
        throw std::logic_error("(D/N) = -1 but no prime divisor with symbol -1 was found");
      } else {
        st.notes.push_back("l=" + std::to_string(l) + ": N resisted factoring");
      }
      continue;
    }
    return cert;
  }
  throw std::runtime_error("search exhausted at l_max = " + std::to_string(cfg.l_max) +
                           " after " + std::to_string(st.tried) + " candidates");
}

// ---- serialization ----

std::string certificate_to_json(const Certificate& c) {
  nlohmann::json j;
  j["case"] = c.case_no;
  j["D"] = c.D.get_str();
  j["l"] = c.l;
  j["p"] = c.p.get_str();
  std::vector<std::string> mp;
  for (const auto& q : c.minpoly) mp.push_back(q.get_str());
  j["minpoly"] = mp;
  j["degree_mult"] = c.degree_mult;
  j["dchain"] = c.dchain.get_str();
  j["N"] = c.N.get_str();
  j["vpN"] = c.vpN;
  j["kronecker_D_p"] = c.kron_D_p;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : c.chain)
    steps.push_back({{"symbol", s.symbol},
                     {"top", s.top.get_str()},
                     {"bottom", s.bottom.get_str()},
                     {"value", s.value}});
  j["chain"] = steps;
  j["placement_ok"] = c.placement_ok;
  j["placement_note"] = c.placement_note;
  j["nm_S"] = c.nm_S;
  j["toolchain"] = {{"precision", c.digits},
                    {"table_hash", c.table_hash},
                    {"iota_fingerprint", c.fingerprint}};
  return j.dump(2);
}

Certificate certificate_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Certificate c;
  c.case_no = j.at("case").get<int>();
  c.D = mpz_class(j.at("D").get<std::string>());
  c.l = j.at("l").get<long>();
  c.p = mpz_class(j.at("p").get<std::string>());
  for (const auto& q : j.at("minpoly")) c.minpoly.push_back(parse_rational(q.get<std::string>()));
  c.degree_mult = j.at("degree_mult").get<long>();
  c.dchain = mpz_class(j.at("dchain").get<std::string>());
  c.N = mpz_class(j.at("N").get<std::string>());
  c.vpN = j.value("vpN", 0l);
  c.kron_D_p = j.value("kronecker_D_p", 0);
  if (j.contains("chain"))
    for (const auto& s : j["chain"])
      c.chain.push_back(ChainEntry{s.at("symbol").get<std::string>(),
                                   mpz_class(s.at("top").get<std::string>()),
                                   mpz_class(s.at("bottom").get<std::string>()),
                                   s.at("value").get<int>()});
  c.placement_ok = j.value("placement_ok", false);
  c.placement_note = j.value("placement_note", "");
  if (j.contains("nm_S")) for (const auto& q : j["nm_S"]) c.nm_S.push_back(q.get<long>());
  if (j.contains("toolchain")) {
    c.digits = j["toolchain"].value("precision", 0);
    c.table_hash = j["toolchain"].value("table_hash", "");
    c.fingerprint = j["toolchain"].value("iota_fingerprint", "");
  }
  return c;
}

VerifyResult verify_certificate(const Certificate& cert, const TriangleUniformizer& uni,
                                HeegnerTable* table) {
  VerifyResult out;
  ModuliInput input;
  try {
    input = parse_moduli(QPoly(cert.minpoly), cert.degree_mult);
  } catch (const std::exception& e) {
    out.fail(std::string("moduli input invalid: ") + e.what());
    return out;
  }
  if (cert.case_no < 1 || cert.case_no > 3) {
    out.fail("case out of range");
    return out;
  }
  // l prime in the right congruence class; D of the case shape.
  if (!is_prime(mpz_class(cert.l)) || cert.l < 5) out.fail("l is not a prime >= 5");
  long cls = cert.case_no == 1 ? 13 : (cert.case_no == 2 ? 19 : 1);
  if (cert.l % 24 != cls) out.fail("l is not in the case congruence class mod 24");
  mpz_class Dexp = cert.case_no == 1 ? mpz_class(-4 * cert.l)
                                     : (cert.case_no == 2 ? mpz_class(-cert.l)
                                                          : mpz_class(-3 * cert.l));
  if (cert.D != Dexp) out.fail("D does not match the case shape");
  if (!out.pass) return out;

  std::vector<long> S = prime_set(input);
  if (cert.nm_S != S) out.fail("recorded Nm(S) differs from recomputation");

  mpz_class dchain;
  try {
    dchain = choose_clearing_d(input, cert.case_no, S);
  } catch (const std::exception& e) {
    out.fail(std::string("clearing d: ") + e.what());
    return out;
  }
  if (dchain != cert.dchain) out.fail("dchain differs from recomputation");

  HeegnerPolynomial P;
  bool have = false;
  if (table && table->lookup(cert.D, &P) && P.fingerprint == uni.fingerprint()) have = true;
  if (!have) {
    try {
      P = heegner_poly(uni, cert.D);
      if (table) table->put(P, false);
    } catch (const std::exception& e) {
      out.fail(std::string("Heegner polynomial: ") + e.what());
      return out;
    }
  }
  ChecksReport checks = run_checks(P);
  if (!checks.all_ok()) out.fail("structural checks on P_D fail");

  NormProfile profile = norm_profile(input, P, dchain);
  if (profile.degenerate) {
    out.fail("j0 is a root of P_D (degenerate)");
    return out;
  }
  if (profile.N != cert.N) out.fail("N differs from exact recomputation");
  if (!profile.coprime6) out.fail("gcd(N, 6) != 1");

  // p itself
  if (!is_prime(cert.p)) out.fail("p is not prime");
  if (cert.p == 2 || cert.p == 3) out.fail("p divides 6");
  for (long q : S)
    if (cert.p == q) out.fail("p lies in Nm(S): excluded prime");
  long vpN = 0;
  if (profile.N != 0 && cert.p > 1 && profile.N % cert.p == 0) vpN = vp_z(profile.N, cert.p);
  if (vpN <= 0) out.fail("v_p(N) = 0");
  else if (vpN != cert.vpN) out.fail("recorded v_p(N) is wrong");
  // v_p of the norm itself (dchain is coprime to p once p is outside S)
  if (vpN > 0 && vp_q(abs(profile.nmP), cert.p) <= 0)
    out.fail("v_p(Nm P_D(j0)) = 0");
  int k = kronecker(cert.D, cert.p);
  if (k != cert.kron_D_p) out.fail("recorded kronecker(D, p) is wrong");
  if (k == 1) out.fail("kronecker(D, p) = +1: no supersingularity certificate");
  if (k == 0 && cert.p != cert.l) out.fail("kronecker(D, p) = 0 but p != l");

  // chain transcript: every recorded symbol must re-evaluate to its value
  for (const auto& s : cert.chain)
    if (kronecker(s.top, s.bottom) != s.value)
      out.fail("chain entry " + s.symbol + " does not re-evaluate to " +
               std::to_string(s.value));
  return out;
}

}  // namespace e6
