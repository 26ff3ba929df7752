#include "e6/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "e6/arith.hpp"

namespace e6 {

QPoly::QPoly(std::vector<mpq_class> coeffs) : c(std::move(coeffs)) { normalize(); }

QPoly QPoly::x() { return QPoly({mpq_class(0), mpq_class(1)}); }
QPoly QPoly::constant(const mpq_class& v) { return QPoly({v}); }

QPoly QPoly::from_z(const std::vector<mpz_class>& coeffs) {
  std::vector<mpq_class> q(coeffs.begin(), coeffs.end());
  return QPoly(std::move(q));
}

void QPoly::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

mpq_class QPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int QPoly::sign_at_minus_inf() const {
  if (is_zero()) return 0;
  int s = sgn(lead());
  return (degree() % 2 == 0) ? s : -s;
}

int QPoly::sign_at_plus_inf() const { return is_zero() ? 0 : sgn(lead()); }

QPoly QPoly::derivative() const {
  if (c.size() <= 1) return QPoly();
  std::vector<mpq_class> d(c.size() - 1);
  for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * long(i);
  return QPoly(std::move(d));
}

bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<mpq_class> r(std::max(a.c.size(), b.c.size()), mpq_class(0));
  for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
  return QPoly(std::move(r));
}

QPoly operator-(const QPoly& a, const QPoly& b) {
  std::vector<mpq_class> r(std::max(a.c.size(), b.c.size()), mpq_class(0));
  for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
  return QPoly(std::move(r));
}

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return QPoly();
  std::vector<mpq_class> r(a.c.size() + b.c.size() - 1, mpq_class(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return QPoly(std::move(r));
}

QPoly operator*(const QPoly& a, const mpq_class& s) {
  if (s == 0) return QPoly();
  std::vector<mpq_class> r = a.c;
  for (auto& x : r) x *= s;
  return QPoly(std::move(r));
}

void divmod(const QPoly& a, const QPoly& b, QPoly* q, QPoly* r) {
  if (b.is_zero()) throw std::invalid_argument("divmod by zero polynomial");
  std::vector<mpq_class> rem = a.c;
  int db = b.degree();
  std::vector<mpq_class> quo(a.degree() >= db ? a.degree() - db + 1 : 0, mpq_class(0));
  for (int i = int(rem.size()) - 1; i >= db; --i) {
    if (rem[i] == 0) continue;
    mpq_class f = rem[i] / b.lead();
    quo[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.c[j];
  }
  if (q) *q = QPoly(std::move(quo));
  if (r) *r = QPoly(std::move(rem));
}

QPoly poly_gcd(const QPoly& a, const QPoly& b) {
  QPoly f = a, g = b;
  while (!g.is_zero()) {
    QPoly r;
    divmod(f, g, nullptr, &r);
    f = g;
    g = r;
  }
  if (!f.is_zero() && f.lead() != 1) f = f * (mpq_class(1) / f.lead());
  return f;
}

QPoly squarefree_part(const QPoly& a) {
  if (a.degree() <= 1) return a;
  QPoly g = poly_gcd(a, a.derivative());
  if (g.degree() <= 0) return a;
  QPoly q;
  divmod(a, g, &q, nullptr);
  return q;
}

QPoly compose_affine(const QPoly& f, const mpq_class& u, const mpq_class& v) {
  QPoly arg({v, u});
  QPoly acc;
  for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) acc = acc * arg + QPoly::constant(*it);
  return acc;
}

std::string poly_to_string(const QPoly& f, const std::string& var) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = f.degree(); i >= 0; --i) {
    mpq_class a = f.coeff(i);
    if (a == 0) continue;
    if (!first) os << (a > 0 ? " + " : " - ");
    else if (a < 0) os << "-";
    mpq_class m = abs(a);
    first = false;
    if (i == 0 || m != 1) os << m.get_str();
    if (i > 0) {
      if (m != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// Clears denominators: returns integer coefficient vector and the common
// denominator d with f = F/d.
static void to_integer(const QPoly& f, std::vector<mpz_class>* F, mpz_class* d) {
  mpz_class den = 1;
  for (const auto& a : f.c) den = lcm(den, a.get_den());
  F->clear();
  for (const auto& a : f.c) F->push_back(mpz_class(a.get_num() * (den / a.get_den())));
  *d = den;
}

static mpz_class bareiss_det(std::vector<std::vector<mpz_class>> m) {
  size_t n = m.size();
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : mpz_class(-m[n - 1][n - 1]);
}

mpq_class resultant(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  int m = a.degree(), n = b.degree();
  if (m == 0) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), mpq_class(a.c[0]).get_num_mpz_t(), n);
    mpz_pow_ui(r.get_den_mpz_t(), mpq_class(a.c[0]).get_den_mpz_t(), n);
    r.canonicalize();
    return r;
  }
  if (n == 0) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), mpq_class(b.c[0]).get_num_mpz_t(), m);
    mpz_pow_ui(r.get_den_mpz_t(), mpq_class(b.c[0]).get_den_mpz_t(), m);
    r.canonicalize();
    return r;
  }
  std::vector<mpz_class> A, B;
  mpz_class da, db;
  to_integer(a, &A, &da);
  to_integer(b, &B, &db);
  size_t N = size_t(m + n);
  std::vector<std::vector<mpz_class>> syl(N, std::vector<mpz_class>(N, mpz_class(0)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) syl[r][r + (m - k)] = A[k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) syl[n + r][r + (n - k)] = B[k];
  mpz_class det = bareiss_det(std::move(syl));
  // Res(F/da, G/db) = Res(F, G) / (da^n db^m)
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), da.get_mpz_t(), n);
  mpz_class t;
  mpz_pow_ui(t.get_mpz_t(), db.get_mpz_t(), m);
  scale *= t;
  mpq_class res(det, scale);
  res.canonicalize();
  return res;
}

// ---- Sturm ----

SturmChain::SturmChain(const QPoly& f) {
  QPoly s0 = squarefree_part(f);
  seq.push_back(s0);
  if (s0.degree() >= 1) {
    seq.push_back(s0.derivative());
    while (seq.back().degree() >= 1) {
      QPoly r;
      divmod(seq[seq.size() - 2], seq.back(), nullptr, &r);
      if (r.is_zero()) break;
      seq.push_back(r * mpq_class(-1));
    }
  }
}

static int count_variations(const std::vector<int>& signs) {
  int v = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

int SturmChain::variations_at(const mpq_class& x) const {
  std::vector<int> s;
  for (const auto& p : seq) s.push_back(p.sign_at(x));
  return count_variations(s);
}

int SturmChain::variations_at_minus_inf() const {
  std::vector<int> s;
  for (const auto& p : seq) s.push_back(p.sign_at_minus_inf());
  return count_variations(s);
}

int SturmChain::variations_at_plus_inf() const {
  std::vector<int> s;
  for (const auto& p : seq) s.push_back(p.sign_at_plus_inf());
  return count_variations(s);
}

int SturmChain::count_half_open(const mpq_class& a, const mpq_class& b) const {
  return variations_at(a) - variations_at(b);
}

int count_roots_open(const QPoly& f, const mpq_class& a, const mpq_class& b) {
  QPoly s = squarefree_part(f);
  if (s.sign_at(a) == 0 || s.sign_at(b) == 0)
    throw std::domain_error("count_roots_open: endpoint is a root");
  SturmChain ch(s);
  return ch.variations_at(a) - ch.variations_at(b);
}

int count_roots_below(const QPoly& f, const mpq_class& b) {
  QPoly s = squarefree_part(f);
  if (s.sign_at(b) == 0) throw std::domain_error("count_roots_below: endpoint is a root");
  SturmChain ch(s);
  return ch.variations_at_minus_inf() - ch.variations_at(b);
}

int count_roots_above(const QPoly& f, const mpq_class& a) {
  QPoly s = squarefree_part(f);
  if (s.sign_at(a) == 0) throw std::domain_error("count_roots_above: endpoint is a root");
  SturmChain ch(s);
  return ch.variations_at(a) - ch.variations_at_plus_inf();
}

int count_real_roots(const QPoly& f) {
  SturmChain ch(squarefree_part(f));
  return ch.variations_at_minus_inf() - ch.variations_at_plus_inf();
}

// Cauchy bound: all real roots lie in (-B, B).
static mpq_class cauchy_bound(const QPoly& f) {
  mpq_class m = 0;
  for (int i = 0; i < f.degree(); ++i) m = std::max(m, mpq_class(abs(f.coeff(i))));
  return m / abs(f.lead()) + 1;
}

std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const QPoly& f) {
  std::vector<std::pair<mpq_class, mpq_class>> out;
  QPoly s = squarefree_part(f);
  if (s.degree() <= 0) return out;
  SturmChain ch(s);
  mpq_class B = cauchy_bound(s);
  // Nudge endpoints off roots (bound is strict, so +-B are safe).
  struct Seg { mpq_class a, b; int n; };
  std::vector<Seg> stack;
  int total = ch.variations_at(-B) - ch.variations_at(B);
  if (total > 0) stack.push_back({-B, B, total});
  while (!stack.empty()) {
    Seg sg = stack.back();
    stack.pop_back();
    if (sg.n == 1) {
      out.push_back({sg.a, sg.b});
      continue;
    }
    mpq_class mid = (sg.a + sg.b) / 2;
    while (s.sign_at(mid) == 0) mid = (sg.a + mid * 2) / 3;  // shift off the root
    int left = ch.variations_at(sg.a) - ch.variations_at(mid);
    int right = sg.n - left;
    if (left > 0) stack.push_back({sg.a, mid, left});
    if (right > 0) stack.push_back({mid, sg.b, right});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

std::pair<mpq_class, mpq_class> refine_root(const QPoly& f, std::pair<mpq_class, mpq_class> iv,
                                            const mpq_class& width) {
  QPoly s = squarefree_part(f);
  int sa = s.sign_at(iv.first);
  if (sa == 0) throw std::domain_error("refine_root: endpoint is a root");
  while (iv.second - iv.first > width) {
    mpq_class mid = (iv.first + iv.second) / 2;
    int sm = s.sign_at(mid);
    if (sm == 0) {
      // Land next to the exact root; narrow both sides around it.
      mpq_class h = std::min(width, mpq_class(iv.second - iv.first)) / 4;
      iv = {mid - h, mid + h};
      if (s.sign_at(iv.first) == 0 || s.sign_at(iv.second) == 0)
        throw std::domain_error("refine_root: degenerate interval");
      return iv;
    }
    if (sm == sa) iv.first = mid;
    else iv.second = mid;
  }
  return iv;
}

// ---- F_l ----

static uint64_t mulmod(uint64_t a, uint64_t b, uint64_t l) {
  return (uint64_t)((__uint128_t)a * b % l);
}

static uint64_t powmod_u(uint64_t a, uint64_t e, uint64_t l) {
  uint64_t r = 1 % l;
  a %= l;
  while (e) {
    if (e & 1) r = mulmod(r, a, l);
    a = mulmod(a, a, l);
    e >>= 1;
  }
  return r;
}

static uint64_t invmod_u(uint64_t a, uint64_t l) { return powmod_u(a % l, l - 2, l); }

void FpPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

FpPoly fp_from_qpoly(const QPoly& f, uint64_t l) {
  FpPoly r;
  r.l = l;
  for (const auto& a : f.c) {
    mpz_class num = a.get_num() % mpz_class((unsigned long)l);
    mpz_class den = a.get_den() % mpz_class((unsigned long)l);
    if (den == 0) throw std::domain_error("fp_from_qpoly: denominator divisible by l");
    uint64_t n = mpz_class((num + (unsigned long)l) % (unsigned long)l).get_ui();
    uint64_t d = mpz_class(den).get_ui();
    r.c.push_back(mulmod(n, invmod_u(d, l), l));
  }
  r.trim();
  return r;
}

FpPoly fp_from_z(const std::vector<mpz_class>& coeffs, uint64_t l) {
  FpPoly r;
  r.l = l;
  for (const auto& a : coeffs) {
    mpz_class m = a % mpz_class((unsigned long)l);
    if (m < 0) m += (unsigned long)l;
    r.c.push_back(m.get_ui());
  }
  r.trim();
  return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
  FpPoly r;
  r.l = a.l;
  if (a.c.empty() || b.c.empty()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = (r.c[i + j] + (__uint128_t)a.c[i] * b.c[j]) % a.l;
  r.trim();
  return r;
}

FpPoly fp_mod(const FpPoly& a, const FpPoly& b) {
  FpPoly r = a;
  uint64_t l = a.l;
  uint64_t inv = invmod_u(b.c.back(), l);
  int db = b.degree();
  while (r.degree() >= db) {
    uint64_t f = mulmod(r.c.back(), inv, l);
    int shift = r.degree() - db;
    for (int j = 0; j <= db; ++j) {
      uint64_t sub = mulmod(f, b.c[j], l);
      uint64_t& tgt = r.c[shift + j];
      tgt = (tgt + l - sub) % l;
    }
    r.trim();
    if (r.c.empty()) break;
  }
  return r;
}

FpPoly fp_divexact(const FpPoly& a, const FpPoly& b) {
  FpPoly r = a, q;
  q.l = a.l;
  uint64_t l = a.l;
  uint64_t inv = invmod_u(b.c.back(), l);
  int db = b.degree();
  if (a.degree() < db) return q;
  q.c.assign(a.degree() - db + 1, 0);
  while (r.degree() >= db) {
    uint64_t f = mulmod(r.c.back(), inv, l);
    int shift = r.degree() - db;
    q.c[shift] = f;
    for (int j = 0; j <= db; ++j) {
      uint64_t sub = mulmod(f, b.c[j], l);
      uint64_t& tgt = r.c[shift + j];
      tgt = (tgt + l - sub) % l;
    }
    r.trim();
    if (r.c.empty()) break;
  }
  if (!r.c.empty()) throw std::logic_error("fp_divexact: nonzero remainder");
  q.trim();
  return q;
}

FpPoly fp_make_monic(const FpPoly& a) {
  FpPoly r = a;
  if (r.c.empty()) return r;
  uint64_t inv = invmod_u(r.c.back(), r.l);
  for (auto& x : r.c) x = mulmod(x, inv, r.l);
  return r;
}

FpPoly fp_gcd(FpPoly a, FpPoly b) {
  while (!b.c.empty()) {
    FpPoly r = fp_mod(a, b);
    a = b;
    b = r;
  }
  return fp_make_monic(a);
}

FpPoly fp_deriv(const FpPoly& a) {
  FpPoly r;
  r.l = a.l;
  for (size_t i = 1; i < a.c.size(); ++i) r.c.push_back(mulmod(a.c[i], i % a.l, a.l));
  r.trim();
  return r;
}

uint64_t fp_eval(const FpPoly& a, uint64_t x) {
  uint64_t acc = 0;
  for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = (mulmod(acc, x, a.l) + *it) % a.l;
  return acc;
}

FpPoly fp_odd_multiplicity_part(const FpPoly& f0) {
  FpPoly f = fp_make_monic(f0);
  if (f.degree() >= (int)f.l) throw std::domain_error("fp_odd_multiplicity_part: degree >= l");
  FpPoly one{f.l, {1}};
  if (f.degree() <= 0) return one;
  // Yun: f = prod a_i^i; multiply together the a_i with i odd.
  FpPoly fp = fp_deriv(f);
  FpPoly g = fp_gcd(f, fp);
  FpPoly w = fp_divexact(f, g);
  FpPoly out = one;
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = fp_gcd(w, g);
    FpPoly ai = fp_divexact(w, y);  // factor of multiplicity i
    if (i % 2 == 1 && ai.degree() > 0) out = fp_mul(out, ai);
    g = fp_divexact(g, y);
    w = y;
    ++i;
  }
  return out;
}

// ---- Newton polygon ----

std::vector<std::pair<mpq_class, int>> newton_polygon_root_valuations(const QPoly& f,
                                                                      const mpz_class& q) {
  if (f.is_zero() || f.coeff(0) == 0)
    throw std::invalid_argument("newton_polygon: needs f(0) != 0");
  struct Pt { long i; mpq_class v; };
  std::vector<Pt> pts;
  for (int i = 0; i <= f.degree(); ++i) {
    if (f.coeff(i) == 0) continue;
    pts.push_back({i, mpq_class(vp_q(f.coeff(i), q))});
  }
  // Lower convex hull, left to right.
  std::vector<Pt> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const Pt& a = hull[hull.size() - 2];
      const Pt& b = hull[hull.size() - 1];
      // remove b if it lies on or above segment (a, p)
      if ((b.v - a.v) * (p.i - a.i) >= (p.v - a.v) * (b.i - a.i)) hull.pop_back();
      else break;
    }
    hull.push_back(p);
  }
  std::vector<std::pair<mpq_class, int>> out;
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    mpq_class slope = (hull[k + 1].v - hull[k].v) / mpq_class(hull[k + 1].i - hull[k].i);
    out.emplace_back(-slope, int(hull[k + 1].i - hull[k].i));
  }
  return out;
}

}  // namespace e6
