#include "e6/quaternion.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace e6 {

bool operator==(const Quat& a, const Quat& b) {
  return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

Quat operator+(const Quat& a, const Quat& b) { return Quat(a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z); }
Quat operator-(const Quat& a, const Quat& b) { return Quat(a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z); }
Quat operator-(const Quat& a) { return Quat(-a.w, -a.x, -a.y, -a.z); }
Quat operator*(const Quat& a, const mpq_class& s) { return Quat(a.w * s, a.x * s, a.y * s, a.z * s); }

// Multiplication table: ij = k, ji = -k, ik = -j, ki = j, jk = -3i, kj = 3i,
// i^2 = -1, j^2 = k^2 = 3.
Quat operator*(const Quat& a, const Quat& b) {
  return Quat(a.w * b.w - a.x * b.x + 3 * a.y * b.y + 3 * a.z * b.z,
              a.w * b.x + a.x * b.w - 3 * a.y * b.z + 3 * a.z * b.y,
              a.w * b.y + a.y * b.w - a.x * b.z + a.z * b.x,
              a.w * b.z + a.z * b.w + a.x * b.y - a.y * b.x);
}

Quat qconj(const Quat& a) { return Quat(a.w, -a.x, -a.y, -a.z); }
mpq_class trd(const Quat& a) { return a.w * 2; }
mpq_class nrd(const Quat& a) { return a.w * a.w + a.x * a.x - 3 * a.y * a.y - 3 * a.z * a.z; }

Quat qinv(const Quat& a) {
  mpq_class n = nrd(a);
  if (n == 0) throw std::domain_error("qinv: non-invertible element");
  return qconj(a) * (mpq_class(1) / n);
}

mpq_class disc_of(const Quat& a) {
  mpq_class t = trd(a);
  return t * t - 4 * nrd(a);
}

std::string Quat::str() const {
  std::ostringstream os;
  os << "(" << w.get_str() << ", " << x.get_str() << ", " << y.get_str() << ", " << z.get_str()
     << ")";
  return os.str();
}

RealMat2 iota_inf(const Quat& q, mpfr_prec_t bits) {
  Real s3 = rsqrt(Real::of(3l, bits));
  Real w = Real::of(q.w, bits), x = Real::of(q.x, bits), y = Real::of(q.y, bits),
       z = Real::of(q.z, bits);
  return RealMat2{w + y * s3, -x + z * s3, x + z * s3, w - y * s3};
}

// ---- lattice helpers (integer rows in the (1, i, j, ij) coordinates) ----

namespace {

using Row = std::array<mpz_class, 4>;

// Row-style Hermite form; the row span is preserved. Rows enter scaled by a
// common denominator.
std::vector<Row> hnf(std::vector<Row> rows) {
  size_t r = 0;
  for (size_t col = 0; col < 4 && r < rows.size(); ++col) {
    for (;;) {
      size_t piv = rows.size();
      for (size_t k = r; k < rows.size(); ++k) {
        if (rows[k][col] != 0 && (piv == rows.size() || abs(rows[k][col]) < abs(rows[piv][col])))
          piv = k;
      }
      if (piv == rows.size()) break;
      std::swap(rows[r], rows[piv]);
      bool clean = true;
      for (size_t k = r + 1; k < rows.size(); ++k) {
        if (rows[k][col] == 0) continue;
        mpz_class q = rows[k][col] / rows[r][col];  // truncated division is fine here
        for (int j = 0; j < 4; ++j) rows[k][j] -= q * rows[r][j];
        if (rows[k][col] != 0) clean = false;
      }
      if (clean) {
        if (rows[r][col] < 0)
          for (int j = 0; j < 4; ++j) rows[r][j] = -rows[r][j];
        ++r;
        break;
      }
    }
  }
  rows.resize(r);
  return rows;
}

std::array<mpq_class, 4> quat_coords(const Quat& q) { return {q.w, q.x, q.y, q.z}; }

Quat quat_from(const std::array<mpq_class, 4>& c) { return Quat(c[0], c[1], c[2], c[3]); }

// 4x4 inverse over Q by Gaussian elimination; rows = matrix rows.
std::array<mpq_class, 16> invert4(const std::array<std::array<mpq_class, 4>, 4>& m) {
  std::array<std::array<mpq_class, 8>, 4> a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = m[i][j];
    for (int j = 0; j < 4; ++j) a[i][4 + j] = (i == j) ? 1 : 0;
  }
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int i = col; i < 4; ++i)
      if (a[i][col] != 0) { piv = i; break; }
    if (piv < 0) throw std::logic_error("invert4: singular matrix");
    std::swap(a[col], a[piv]);
    mpq_class inv = 1 / a[col][col];
    for (int j = 0; j < 8; ++j) a[col][j] *= inv;
    for (int i = 0; i < 4; ++i) {
      if (i == col || a[i][col] == 0) continue;
      mpq_class f = a[i][col];
      for (int j = 0; j < 8; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::array<mpq_class, 16> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[4 * i + j] = a[i][4 + j];
  return out;
}

mpq_class det4(const std::array<std::array<mpq_class, 4>, 4>& m0) {
  auto m = m0;
  mpq_class det = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int i = col; i < 4; ++i)
      if (m[i][col] != 0) { piv = i; break; }
    if (piv < 0) return 0;
    if (piv != col) { std::swap(m[col], m[piv]); det = -det; }
    det *= m[col][col];
    mpq_class inv = 1 / m[col][col];
    for (int i = col + 1; i < 4; ++i) {
      if (m[i][col] == 0) continue;
      mpq_class f = m[i][col] * inv;
      for (int j = col; j < 4; ++j) m[i][j] -= f * m[col][j];
    }
  }
  return det;
}

struct Lattice {
  std::array<Quat, 4> basis;
  std::array<mpq_class, 16> inv;

  void set_basis(const std::array<Quat, 4>& b) {
    basis = b;
    std::array<std::array<mpq_class, 4>, 4> m;
    for (int i = 0; i < 4; ++i) m[i] = quat_coords(b[i]);
    inv = invert4(m);
  }

  std::array<mpq_class, 4> coords(const Quat& q) const {
    auto v = quat_coords(q);
    std::array<mpq_class, 4> out;
    for (int j = 0; j < 4; ++j) {
      out[j] = 0;
      for (int k = 0; k < 4; ++k) out[j] += v[k] * inv[4 * k + j];
    }
    return out;
  }

  bool contains(const Quat& q) const {
    for (const auto& c : coords(q))
      if (c.get_den() != 1) return false;
    return true;
  }

  mpq_class covolume() const {
    std::array<std::array<mpq_class, 4>, 4> m;
    for (int i = 0; i < 4; ++i) m[i] = quat_coords(basis[i]);
    return abs(det4(m));
  }

  bool ring_closed() const {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (!contains(basis[i] * basis[j])) return false;
    return true;
  }

  mpz_class reduced_discriminant() const {
    std::array<std::array<mpq_class, 4>, 4> g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g[i][j] = trd(basis[i] * qconj(basis[j]));
    mpq_class d = abs(det4(g));
    if (d.get_den() != 1) throw std::logic_error("trace form not integral on order");
    mpz_class n = d.get_num();
    if (!mpz_perfect_square_p(n.get_mpz_t()))
      throw std::logic_error("trace form determinant not a square");
    return sqrt(n);
  }

  // Rebuild the basis from generators (rows may exceed 4).
  void from_generators(const std::vector<Quat>& gens) {
    mpz_class den = 1;
    for (const auto& g : gens)
      for (const auto& c : quat_coords(g)) den = lcm(den, c.get_den());
    std::vector<Row> rows;
    for (const auto& g : gens) {
      Row r;
      auto v = quat_coords(g);
      for (int j = 0; j < 4; ++j) {
        mpq_class s = v[j] * den;
        r[j] = s.get_num();
      }
      rows.push_back(r);
    }
    auto h = hnf(std::move(rows));
    if (h.size() != 4) throw std::logic_error("lattice generators not of full rank");
    std::array<Quat, 4> b;
    for (int i = 0; i < 4; ++i) {
      std::array<mpq_class, 4> c;
      for (int j = 0; j < 4; ++j) c[j] = mpq_class(h[i][j], den);
      for (auto& q : c) q.canonicalize();
      b[i] = quat_from(c);
    }
    set_basis(b);
  }
};

// Positive-definiteness of E(J., .) at the base point tau = i, where J is
// the complex structure induced by the splitting. Decides the sign of mu.
bool riemann_positive(const Lattice& lat, const Quat& mu) {
  const mpfr_prec_t bits = 256;
  Cx tau = Cx::of(0, 1, bits);
  // v_k = iota(e_k) (tau, 1)^t as a vector in R^4
  std::array<std::array<Real, 4>, 4> V{};
  for (int k = 0; k < 4; ++k) {
    RealMat2 m = iota_inf(lat.basis[k], bits);
    Cx top = Cx(m.a, Real(bits)) * tau + Cx(m.b, Real(bits));
    Cx bot = Cx(m.c, Real(bits)) * tau + Cx(m.d, Real(bits));
    V[k] = {top.re, top.im, bot.re, bot.im};
  }
  // Solve M x = rhs_k where columns of M are the vectors V[l].
  // Build the augmented system once per k with Gaussian elimination.
  auto solve = [&](const std::array<Real, 4>& rhs) {
    std::array<std::array<Real, 5>, 4> a{};
    for (int r = 0; r < 4; ++r) {
      for (int l = 0; l < 4; ++l) a[r][l] = V[l][r];
      a[r][4] = rhs[r];
    }
    for (int col = 0; col < 4; ++col) {
      int piv = col;
      for (int i = col + 1; i < 4; ++i)
        if (rabs(a[i][col]) > rabs(a[piv][col])) piv = i;
      std::swap(a[col], a[piv]);
      for (int i = 0; i < 4; ++i) {
        if (i == col) continue;
        Real f = a[i][col] / a[col][col];
        for (int j = col; j < 5; ++j) a[i][j] = a[i][j] - f * a[col][j];
      }
    }
    std::array<Real, 4> x{};
    for (int i = 0; i < 4; ++i) x[i] = a[i][4] / a[i][i];
    return x;
  };
  // E-Gram on the basis (exact), and C with J e_k = sum C_kl e_l.
  std::array<std::array<Real, 4>, 4> M{};
  std::array<std::array<mpq_class, 4>, 4> G;
  mpq_class six(6);
  for (int m = 0; m < 4; ++m)
    for (int l = 0; l < 4; ++l) G[m][l] = trd(mu * lat.basis[m] * qconj(lat.basis[l])) / six;
  for (int k = 0; k < 4; ++k) {
    std::array<Real, 4> rhs = {-V[k][1], V[k][0], -V[k][3], V[k][2]};  // i * v_k
    auto c = solve(rhs);
    for (int l = 0; l < 4; ++l) {
      Real acc(bits);
      for (int m = 0; m < 4; ++m) acc = acc + c[m] * Real::of(G[m][l], bits);
      M[k][l] = acc;
    }
  }
  // Positive pivots in symmetric Gaussian elimination.
  for (int col = 0; col < 4; ++col) {
    if (!(M[col][col].sgn() > 0)) return false;
    for (int i = col + 1; i < 4; ++i) {
      Real f = M[i][col] / M[col][col];
      for (int j = col; j < 4; ++j) M[i][j] = M[i][j] - f * M[col][j];
    }
  }
  return true;
}

}  // namespace

MaximalOrder MaximalOrder::build() {
  Lattice lat;
  lat.set_basis({Quat::one(), Quat::gen_i(), Quat::gen_j(), Quat::gen_k()});

  // Saturate at 2 and 3 until the reduced discriminant is 6.
  for (int guard = 0; guard < 16; ++guard) {
    mpz_class d = lat.reduced_discriminant();
    if (d == 6) break;
    bool improved = false;
    for (int p : {2, 3}) {
      if (improved) break;
      std::array<long, 4> v{};
      for (v[0] = 0; v[0] < p && !improved; ++v[0])
        for (v[1] = 0; v[1] < p && !improved; ++v[1])
          for (v[2] = 0; v[2] < p && !improved; ++v[2])
            for (v[3] = 0; v[3] < p && !improved; ++v[3]) {
              if (v[0] == 0 && v[1] == 0 && v[2] == 0 && v[3] == 0) continue;
              Quat x;
              for (int k = 0; k < 4; ++k) x = x + lat.basis[k] * mpq_class(v[k]);
              x = x * mpq_class(1, p);
              if (trd(x).get_den() != 1 || nrd(x).get_den() != 1) continue;
              if (lat.contains(x)) continue;
              Lattice bigger;
              std::vector<Quat> gens(lat.basis.begin(), lat.basis.end());
              gens.push_back(x);
              bigger.from_generators(gens);
              if (!bigger.ring_closed()) continue;
              lat = bigger;
              improved = true;
            }
    }
    if (!improved && lat.reduced_discriminant() != 6)
      throw std::logic_error("saturation stalled before reaching discriminant 6");
  }
  if (lat.reduced_discriminant() != 6) throw std::logic_error("saturation did not terminate");

  // Normalize the basis so that basis[0] = 1.
  {
    mpq_class target = lat.covolume();
    bool done = false;
    for (int drop = 0; drop < 4 && !done; ++drop) {
      std::array<Quat, 4> cand;
      cand[0] = Quat::one();
      int at = 1;
      for (int k = 0; k < 4; ++k)
        if (k != drop) cand[at++] = lat.basis[k];
      std::array<std::array<mpq_class, 4>, 4> m;
      for (int i = 0; i < 4; ++i) m[i] = quat_coords(cand[i]);
      if (abs(det4(m)) == target) {
        lat.set_basis(cand);
        done = true;
      }
    }
    if (!done) throw std::logic_error("could not normalize basis to contain 1");
  }

  MaximalOrder ord;
  ord.basis_ = lat.basis;
  ord.inv_ = lat.inv;
  ord.discrd_ = lat.reduced_discriminant();

  // mu: first trace-zero norm-6 element by (height, lex); sign fixed by
  // positivity of the Riemann form.
  auto search = [&](const mpq_class& want_nrd, bool want_trace0, bool need_normalizes,
                    const MaximalOrder& o) -> Quat {
    for (long h = 1; h <= 8; ++h) {
      for (long c0 = -h; c0 <= h; ++c0)
        for (long c1 = -h; c1 <= h; ++c1)
          for (long c2 = -h; c2 <= h; ++c2)
            for (long c3 = -h; c3 <= h; ++c3) {
              if (std::max({labs(c0), labs(c1), labs(c2), labs(c3)}) != h) continue;
              Quat q = o.from_coords(c0, c1, c2, c3);
              if (want_trace0 && trd(q) != 0) continue;
              if (nrd(q) != want_nrd) continue;
              if (need_normalizes && !o.normalizes(q)) continue;
              return q;
            }
    }
    throw std::logic_error("element search exhausted");
  };

  ord.mu_ = search(6, true, true, ord);
  if (!riemann_positive(lat, ord.mu_)) {
    ord.mu_ = -ord.mu_;
    if (!riemann_positive(lat, ord.mu_))
      throw std::logic_error("neither sign of mu gives a positive Riemann form");
  }
  // No trace-zero element of norm 2 exists in this algebra (Q(sqrt(-2))
  // does not embed: 3 splits there), so the norm-2 normalizer has trace 2.
  ord.chi2_ = search(2, false, true, ord);
  ord.chi3_ = search(3, true, true, ord);
  ord.chi6_ = ord.mu_;
  return ord;
}

const Quat& MaximalOrder::chi(int d) const {
  switch (d) {
    case 2: return chi2_;
    case 3: return chi3_;
    case 6: return chi6_;
    default: throw std::invalid_argument("chi: d must divide 6");
  }
}

mpz_class MaximalOrder::index_over_standard_lattice() const {
  std::array<std::array<mpq_class, 4>, 4> m;
  for (int i = 0; i < 4; ++i) m[i] = {basis_[i].w, basis_[i].x, basis_[i].y, basis_[i].z};
  mpq_class cov = abs(det4(m));
  mpq_class idx = 1 / cov;
  if (idx.get_den() != 1) throw std::logic_error("standard lattice not contained in order");
  return idx.get_num();
}

bool MaximalOrder::contains(const Quat& q) const {
  for (const auto& c : coords(q))
    if (c.get_den() != 1) return false;
  return true;
}

std::array<mpq_class, 4> MaximalOrder::coords(const Quat& q) const {
  std::array<mpq_class, 4> v = {q.w, q.x, q.y, q.z}, out;
  for (int j = 0; j < 4; ++j) {
    out[j] = 0;
    for (int k = 0; k < 4; ++k) out[j] += v[k] * inv_[4 * k + j];
  }
  return out;
}

Quat MaximalOrder::from_coords(long c0, long c1, long c2, long c3) const {
  Quat q;
  long c[4] = {c0, c1, c2, c3};
  for (int k = 0; k < 4; ++k) q = q + basis_[k] * mpq_class(c[k]);
  return q;
}

Quat MaximalOrder::involution_prime(const Quat& a) const {
  return qinv(mu_) * qconj(a) * mu_;
}

mpq_class MaximalOrder::riemann_form(const Quat& a, const Quat& b) const {
  return trd(mu_ * a * qconj(b)) / mpq_class(6);
}

bool MaximalOrder::normalizes(const Quat& g) const {
  if (nrd(g) == 0) return false;
  Quat gi = qinv(g);
  for (const auto& e : basis_)
    if (!contains(g * e * gi)) return false;
  return true;
}

std::vector<Quat> MaximalOrder::embeddings_with_disc(const mpz_class& D, long height_bound) const {
  // disc(sum q_a g_a) is an integer quadratic form in the coordinates on
  // g_1..g_3 = basis_[1..3]; the coefficient on 1 only shifts the trace.
  int64_t d2[3][3];
  mpq_class two(2);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      mpq_class v =
          two * (trd(basis_[a + 1]) * trd(basis_[b + 1]) - 2 * trd(basis_[a + 1] * qconj(basis_[b + 1])));
      if (v.get_den() != 1 || !v.get_num().fits_slong_p())
        throw std::logic_error("disc form not small integers");
      d2[a][b] = v.get_num().get_si();
    }
  int64_t t2[3];
  for (int a = 0; a < 3; ++a) {
    mpq_class t = trd(basis_[a + 1]) * 2;
    if (t.get_den() != 1) throw std::logic_error("trace form not half-integral");
    t2[a] = t.get_num().get_si();
  }
  if (!D.fits_slong_p()) throw std::invalid_argument("embeddings_with_disc: D too large");
  int64_t target = 2 * D.get_si();

  struct Hit { long h, q, r, s; };
  std::vector<Hit> hits;
  for (long q = -height_bound; q <= height_bound; ++q)
    for (long r = -height_bound; r <= height_bound; ++r) {
      int64_t partial = d2[0][0] * q * q + (d2[0][1] + d2[1][0]) * q * r + d2[1][1] * r * r;
      int64_t lin = (d2[0][2] + d2[2][0]) * q + (d2[1][2] + d2[2][1]) * r;
      for (long s = -height_bound; s <= height_bound; ++s) {
        if (partial + lin * s + d2[2][2] * s * s != target) continue;
        // Normalize the trace into {0, 1} with the coefficient on 1.
        int64_t tt = (t2[0] * q + t2[1] * r + t2[2] * s) / 2;
        long c0 = -(long)((tt - (((tt % 2) + 2) % 2)) / 2);
        long h = std::max({labs(c0), labs(q), labs(r), labs(s)});
        if (h > height_bound) continue;
        hits.push_back({h, q, r, s});
      }
    }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return std::tie(a.h, a.q, a.r, a.s) < std::tie(b.h, b.q, b.r, b.s);
  });
  std::vector<Quat> out;
  for (const auto& hit : hits) {
    Quat base = from_coords(0, hit.q, hit.r, hit.s);
    mpq_class t = trd(base);
    mpq_class c0 = -(t - ((t.get_num() % 2 + 2) % 2)) / 2;
    Quat beta = base + Quat::one() * c0;
    if (disc_of(beta) != mpq_class(D)) throw std::logic_error("disc mismatch in enumeration");
    out.push_back(beta);
  }
  return out;
}

std::string MaximalOrder::fingerprint() const {
  std::ostringstream os;
  os << "iota:i->[[0,-1],[1,0]];j->[[s3,0],[0,-s3]];basis:";
  for (const auto& b : basis_) os << b.str();
  os << ";mu:" << mu_.str() << ";chi2:" << chi2_.str() << ";chi3:" << chi3_.str();
  uint64_t h = 1469598103934665603ull;
  for (char c : os.str()) {
    h ^= (unsigned char)c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return std::string(buf);
}

}  // namespace e6
