#include "e6/uniformizer.hpp"

#include <complex>
#include <sstream>
#include <stdexcept>

namespace e6 {

TPoint j_from_t(const TPoint& t) {
  if (t.infinite) return TPoint::inf();
  mpfr_prec_t p = t.value.prec();
  Cx one = Cx::of(1, 0, p);
  return TPoint::finite((t.value - one) * Real::of(mpq_class(16, 27), p));
}

Cx fixed_point(const Quat& beta, mpfr_prec_t bits) {
  mpq_class D = disc_of(beta);
  if (D >= 0) throw std::domain_error("fixed_point: element is not elliptic");
  RealMat2 m = iota_inf(beta, bits);
  Real twoC = m.c * 2;
  if (twoC.is_zero()) throw std::logic_error("fixed_point: degenerate matrix");
  Real re = (m.a - m.d) / twoC;
  Real im = rsqrt(Real::of(-D, bits)) / rabs(twoC);
  return Cx(re, im);
}

namespace {

struct ChartReal {
  // parameters of the local solution pair y1 = F(A,B;C;z),
  // y2 = z^(1-C) F(A2,B2;C2;z); 1 - C = 1/expden
  Real A, B, C, A2, B2, C2, one_minus_C;
  long expden;
  Branch branch;
  Real kappa;
};

std::complex<double> cx_to_d(const Cx& z) { return {z.re.to_double(), z.im.to_double()}; }

double hyp_dist_d(std::complex<double> a, std::complex<double> b) {
  double q = std::norm(a - b) / (2 * a.imag() * b.imag());
  return std::acosh(1 + q);
}

using cd = std::complex<double>;

// Double precision mirror of a chart, used to locate the solution before the
// full-precision Newton runs.
struct DChart {
  double A, B, C, A2, B2, C2, kappa;
  long expden;
  Branch branch;
};

cd dpow_branch(cd z, double e, Branch br) {
  double th = std::arg(z);
  const double pi = 3.14159265358979323846;
  if (br == Branch::UpperArg && th < -pi / 2) th += 2 * pi;
  if (br == Branch::LowerArg && th > pi / 2) th -= 2 * pi;
  return std::pow(std::abs(z), e) * cd(std::cos(e * th), std::sin(e * th));
}

bool dhyp(double A, double B, double C, cd z, cd* out) {
  cd term = 1, sum = 1;
  for (int n = 0; n < 6000; ++n) {
    term *= z * ((A + n) * (B + n) / ((C + n) * (n + 1)));
    sum += term;
    if (std::abs(term) < 1e-17 * (std::abs(sum) + 1)) { *out = sum; return true; }
  }
  return false;
}

bool dtaylor_step(const DChart& ch, cd z0, cd h, cd* val, cd* der) {
  cd u0 = *val, u1 = *der;
  cd g1 = 1.0 - 2.0 * z0;
  cd g0 = ch.C - (ch.A + ch.B + 1) * z0;
  cd dbase = z0 * (1.0 - z0);
  cd sum = u0 + u1 * h, dsum = u1, hp = h;
  for (int n = 0; n < 2000; ++n) {
    double alpha = (ch.A + n) * (ch.B + n);
    cd beta = (g1 * double(n) + g0) * double(n + 1);
    cd u2 = (u0 * alpha - u1 * beta) / (dbase * double((n + 2) * (n + 1)));
    dsum += u2 * hp * double(n + 2);
    hp *= h;
    cd tv = u2 * hp;
    sum += tv;
    u0 = u1;
    u1 = u2;
    if (std::abs(tv) < 1e-17 * (std::abs(sum) + 1)) { *val = sum; *der = dsum; return true; }
  }
  return false;
}

bool dpair(const DChart& ch, cd z, cd* y1, cd* y1p, cd* y2, cd* y2p) {
  auto series = [&](cd at) {
    cd f0, f0p, f2, f2p;
    if (!dhyp(ch.A, ch.B, ch.C, at, &f0)) return false;
    if (!dhyp(ch.A + 1, ch.B + 1, ch.C + 1, at, &f0p)) return false;
    if (!dhyp(ch.A2, ch.B2, ch.C2, at, &f2)) return false;
    if (!dhyp(ch.A2 + 1, ch.B2 + 1, ch.C2 + 1, at, &f2p)) return false;
    f0p *= ch.A * ch.B / ch.C;
    f2p *= ch.A2 * ch.B2 / ch.C2;
    cd p1 = dpow_branch(at, 1.0 / ch.expden, ch.branch);
    *y1 = f0;
    *y1p = f0p;
    *y2 = p1 * f2;
    *y2p = p1 * (f2 * (1.0 / ch.expden) / at + f2p);
    return true;
  };
  if (std::abs(z) <= 0.70) return series(z);
  cd cur = (0.65 / std::abs(z)) * z;
  if (!series(cur)) return false;
  for (int it = 0; it < 200; ++it) {
    cd delta = z - cur;
    double rem = std::abs(delta);
    if (rem == 0) return true;
    double hmax = 0.30 * std::min(std::abs(cur), std::abs(cur - 1.0));
    if (hmax < 1e-3) return false;
    cd h = (rem <= hmax) ? delta : delta * (hmax / rem);
    if (!dtaylor_step(ch, cur, h, y1, y1p)) return false;
    if (!dtaylor_step(ch, cur, h, y2, y2p)) return false;
    cur += h;
    if (rem <= hmax) return true;
  }
  return false;
}

bool dratio(const DChart& ch, cd var, cd* r, cd* dr) {
  cd y1, y1p, y2, y2p;
  if (!dpair(ch, var, &y1, &y1p, &y2, &y2p)) return false;
  if (std::abs(y1) < 1e-280) return false;
  *r = ch.kappa * y2 / y1;
  *dr = ch.kappa * (y2p * y1 - y2 * y1p) / (y1 * y1);
  return true;
}

// Homotopy solve of r(var) = target in doubles; false on any trouble.
bool dsolve(const DChart& ch, cd target, cd* out) {
  const int M = 6;
  cd var = 0;
  bool have = false;
  for (int m = 1; m <= M; ++m) {
    cd tg = target * (double(m) / M);
    if (!have) {
      cd seed = tg / ch.kappa;
      var = std::pow(seed, cd(double(ch.expden), 0));
      if (std::abs(var) > 0.4) var *= 0.4 / std::abs(var);
      have = true;
    }
    bool done = false;
    for (int it = 0; it < 80; ++it) {
      cd r, dr;
      if (!dratio(ch, var, &r, &dr)) return false;
      if (std::abs(dr) < 1e-280) return false;
      cd step = (r - tg) / dr;
      double slen = std::abs(step), vlen = std::max(std::abs(var), 0.05);
      if (slen > 0.5 * vlen) step *= 0.5 * vlen / slen;
      var -= step;
      if (std::abs(var) > 2.5) return false;
      if (slen < 1e-11 * vlen) { done = true; break; }
    }
    if (!done) return false;
  }
  cd r, dr;
  if (!dratio(ch, var, &r, &dr)) return false;
  if (std::abs(r - target) > 1e-7 * (std::abs(target) + 1e-3)) return false;
  *out = var;
  return true;
}

}  // namespace

struct TriangleUniformizer::Impl {
  mpfr_prec_t bits;
  int digits;
  const MaximalOrder* ord;

  Cx tau2, tau4, tau6;
  Quat beta4, eta;
  Real r24, r26, r46;
  Mobius G, Ginv;
  Cx center;
  Real domain_radius;

  ChartReal chart[3];
  DChart dchart[3];
  Cx vert_global[3];
  Mobius H[3], Hinv[3];

  std::vector<Quat> gen_quats;
  std::vector<Mobius> gens;
  std::vector<std::array<std::complex<double>, 4>> gens_d;

  Real vertex_tol, conv_tol;

  // ---- hypergeometric machinery ----

  Cx hyp_series(const Real& A, const Real& B, const Real& C, const Cx& z) const {
    Cx term = Cx::of(1, 0, bits), sum = Cx::of(1, 0, bits);
    Real eps = pow10(digits + 12, bits);
    int quiet = 0;
    for (long n = 0; n < 64L * digits + 4000; ++n) {
      Real num = (A + n) * (B + n);
      Real den = (C + n) * (n + 1);
      term = term * z * (num / den);
      sum = sum + term;
      if (cabs(term) < eps) {
        if (++quiet >= 3) return sum;
      } else {
        quiet = 0;
      }
    }
    throw std::runtime_error("hypergeometric series did not converge");
  }

  struct PairVal {
    Cx y1, y1p, y2, y2p;
    explicit PairVal(mpfr_prec_t b) : y1(b), y1p(b), y2(b), y2p(b) {}
  };

  PairVal pair_series(const ChartReal& ch, const Cx& z) const {
    PairVal v(bits);
    v.y1 = hyp_series(ch.A, ch.B, ch.C, z);
    v.y1p = hyp_series(ch.A + 1, ch.B + 1, ch.C + 1, z) * (ch.A * ch.B / ch.C);
    Cx p1 = cpow_frac(z, 1, ch.expden, ch.branch);
    Cx f2 = hyp_series(ch.A2, ch.B2, ch.C2, z);
    Cx f2p = hyp_series(ch.A2 + 1, ch.B2 + 1, ch.C2 + 1, z) * (ch.A2 * ch.B2 / ch.C2);
    v.y2 = p1 * f2;
    v.y2p = p1 * (f2 * Cx::of(ch.one_minus_C) / z + f2p);
    return v;
  }

  // Taylor step of the hypergeometric ODE from an ordinary point z0:
  // z(1-z) y'' + (C - (A+B+1) z) y' - A B y = 0.
  void taylor_step(const ChartReal& ch, const Cx& z0, const Cx& h, Cx* val, Cx* der) const {
    Cx u0 = *val, u1 = *der;
    Cx g1 = Cx::of(1, 0, bits) - z0 * 2;            // 1 - 2 z0
    Cx g0 = Cx::of(ch.C) - z0 * (ch.A + ch.B + 1);  // C - (A+B+1) z0
    Cx dbase = z0 * (Cx::of(1, 0, bits) - z0);      // z0 (1 - z0)
    Cx sum = u0 + u1 * h;
    Cx dsum = u1;
    Cx hp = h;  // h^(n+1) while processing u_{n+1}
    Real eps = pow10(digits + 12, bits);
    int quiet = 0;
    for (long n = 0; n < 64L * digits + 4000; ++n) {
      Real alpha = (ch.A + n) * (ch.B + n);
      Cx beta = (g1 * n + g0) * (n + 1);
      Cx u2 = (u0 * alpha - u1 * beta) / (dbase * ((n + 2) * (n + 1)));
      // accumulate u2 h^{n+2} and derivative term (n+2) u2 h^{n+1}
      dsum = dsum + u2 * hp * (n + 2);
      hp = hp * h;
      Cx tv = u2 * hp;
      sum = sum + tv;
      u0 = u1;
      u1 = u2;
      if (cabs(tv) < eps * (cabs(sum) + Real::of(1l, bits))) {
        if (++quiet >= 3) { *val = sum; *der = dsum; return; }
      } else {
        quiet = 0;
      }
    }
    throw std::runtime_error("ODE Taylor step did not converge");
  }

  PairVal pair_value(const ChartReal& ch, const Cx& z) const {
    Real az = cabs(z);
    if (az.to_double() <= 0.70) return pair_series(ch, z);
    // Continue from a point on the same ray inside the series disk.
    Cx z0 = z * (Real::of_double(0.65, bits) / az);
    PairVal v = pair_series(ch, z0);
    Cx cur = z0;
    for (int it = 0; it < 300; ++it) {
      Cx delta = z - cur;
      double rem = cabs(delta).to_double();
      if (rem == 0.0) return v;
      double near0 = cabs(cur).to_double();
      double near1 = cabs(cur - Cx::of(1, 0, bits)).to_double();
      double hmax = 0.30 * std::min(near0, near1);
      if (hmax < 1e-4) throw std::runtime_error("analytic continuation path pinched");
      if (rem <= hmax) {
        taylor_step(ch, cur, delta, &v.y1, &v.y1p);
        Cx tmp1 = v.y2, tmp2 = v.y2p;
        taylor_step(ch, cur, delta, &tmp1, &tmp2);
        v.y2 = tmp1; v.y2p = tmp2;
        return v;
      }
      Cx h = delta * (Real::of_double(hmax, bits) / cabs(delta));
      taylor_step(ch, cur, h, &v.y1, &v.y1p);
      Cx tmp1 = v.y2, tmp2 = v.y2p;
      taylor_step(ch, cur, h, &tmp1, &tmp2);
      v.y2 = tmp1; v.y2p = tmp2;
      cur = cur + h;
    }
    throw std::runtime_error("analytic continuation did not reach target");
  }

  void ratio_deriv(int k, const Cx& var, Cx* r, Cx* dr) const {
    const ChartReal& ch = chart[k];
    PairVal v = pair_value(ch, var);
    Cx kap = Cx::of(ch.kappa);
    *r = kap * v.y2 / v.y1;
    *dr = kap * (v.y2p * v.y1 - v.y2 * v.y1p) / (v.y1 * v.y1);
  }

  Cx newton(int k, const Cx& target, Cx var) const {
    Real small = Real::of_double(0.05, bits);
    for (int it = 0; it < 120; ++it) {
      Cx r(bits), dr(bits);
      ratio_deriv(k, var, &r, &dr);
      Cx step = (r - target) / dr;
      Real slen = cabs(step);
      Real vlen = cabs(var);
      if (cmp(vlen, small) < 0) vlen = small;
      if (slen > vlen * Real::of_double(0.5, bits))
        step = step * (vlen * Real::of_double(0.5, bits) / slen);
      var = var - step;
      if (cabs(var).to_double() > 2.5)
        throw std::runtime_error("newton iterate left the chart region");
      if (slen < conv_tol * vlen) {
        // confirm the residual
        ratio_deriv(k, var, &r, &dr);
        if (cabs(r - target) < pow10(digits / 2, bits)) return var;
      }
    }
    throw std::runtime_error("newton did not converge inverting the Schwarz map");
  }

  Cx solve_chart(int k, const Cx& target) const {
    const int M = 6;
    Cx var(bits);
    bool have = false;
    for (int m = 1; m <= M; ++m) {
      Cx tg = target * (Real::of(m, bits) / M);
      if (!have) {
        Cx seed = tg / Cx::of(chart[k].kappa);
        var = cpow_int(seed, chart[k].expden);
        double a = cabs(var).to_double();
        if (a > 0.4) var = var * Real::of_double(0.4 / a, bits);
      }
      var = newton(k, tg, var);
      have = true;
    }
    return var;
  }

  // t as a function of the chart variable.
  TPoint t_of_var(int k, const Cx& var) const {
    switch (k) {
      case 0: return TPoint::finite(var);
      case 1: return TPoint::finite(Cx::of(1, 0, bits) - var);
      default: return var.is_zero() ? TPoint::inf() : TPoint::finite(cinv(var));
    }
  }

  // ---- reduction into the fundamental domain ----

  Cx reduce(const Cx& tau) const {
    // Coarse phase in doubles, recording the word.
    std::complex<double> td = cx_to_d(tau), cd = cx_to_d(center);
    std::vector<int> word;
    double cur = hyp_dist_d(td, cd);
    for (int it = 0; it < 4000; ++it) {
      int best = -1;
      double bestd = cur - 1e-12;
      for (size_t g = 0; g < gens_d.size(); ++g) {
        const auto& m = gens_d[g];
        std::complex<double> t2 = (m[0] * td + m[1]) / (m[2] * td + m[3]);
        if (!(t2.imag() > 0)) continue;
        double d = hyp_dist_d(t2, cd);
        if (d < bestd) { bestd = d; best = int(g); }
      }
      if (best < 0) break;
      const auto& m = gens_d[best];
      td = (m[0] * td + m[1]) / (m[2] * td + m[3]);
      cur = bestd;
      word.push_back(best);
    }
    Cx t = tau;
    for (int g : word) t = gens[g].apply(t);
    // Polish at working precision.
    Real curhp = hyp_dist(t, center);
    Real eps = pow10(digits / 2, bits);
    for (int it = 0; it < 400; ++it) {
      int best = -1;
      Real bestd = curhp - eps;
      for (size_t g = 0; g < gens.size(); ++g) {
        Cx t2 = gens[g].apply(t);
        if (!(t2.im.sgn() > 0)) continue;
        Real d = hyp_dist(t2, center);
        if (d < bestd) { bestd = d; best = int(g); }
      }
      if (best < 0) break;
      t = gens[best].apply(t);
      curhp = bestd;
    }
    if (curhp > domain_radius)
      throw std::runtime_error("reduction did not reach the fundamental domain (distance " +
                               std::to_string(curhp.to_double()) + ")");
    return t;
  }

  TPoint t_from_reduced(Cx w) const {
    bool folded = w.im.sgn() < 0;
    if (folded) w = conj(w);
    Cx local[3];
    int order[3] = {0, 1, 2};
    double mags[3];
    for (int k = 0; k < 3; ++k) {
      local[k] = Hinv[k].apply(w);
      mags[k] = cabs(local[k]).to_double();
    }
    std::sort(order, order + 3, [&](int a, int b) { return mags[a] < mags[b]; });

    TPoint t;
    if (cabs(local[order[0]]) < vertex_tol) {
      switch (order[0]) {
        case 0: t = TPoint::finite(Cx::of(0, 0, bits)); break;
        case 1: t = TPoint::finite(Cx::of(1, 0, bits)); break;
        case 2: t = TPoint::inf(); break;
      }
      if (folded && !t.infinite) t.value = conj(t.value);
      return t;
    }

    // Locate t in doubles first; the chart where the solution variable is
    // smallest keeps the full-precision Newton away from the branch cuts.
    bool have_est = false;
    cd t_est = 0;
    for (int idx = 0; idx < 3 && !have_est; ++idx) {
      int k = order[idx];
      cd var_d;
      if (dsolve(dchart[k], cx_to_d(local[k]), &var_d)) {
        switch (k) {
          case 0: t_est = var_d; break;
          case 1: t_est = 1.0 - var_d; break;
          default:
            if (std::abs(var_d) < 1e-12) continue;  // vertex handled above
            t_est = 1.0 / var_d;
        }
        have_est = true;
      }
    }

    bool solved = false;
    Cx var(bits);
    int kbest = order[0];
    if (have_est) {
      double c0 = std::abs(t_est), c1 = std::abs(1.0 - t_est),
             c2 = std::abs(t_est) < 1e-12 ? 1e300 : std::abs(1.0 / t_est);
      kbest = (c0 <= c1 && c0 <= c2) ? 0 : (c1 <= c2 ? 1 : 2);
      cd var_est = kbest == 0 ? t_est : (kbest == 1 ? 1.0 - t_est : 1.0 / t_est);
      Cx seed(Real::of_double(var_est.real(), bits), Real::of_double(var_est.imag(), bits));
      try {
        var = newton(kbest, local[kbest], seed);
        solved = true;
      } catch (const std::runtime_error&) {
        // fall through to homotopy
      }
    }
    if (!solved) {
      std::string first_err;
      for (int idx = 0; idx < 3 && !solved; ++idx) {
        int k = have_est ? ((kbest + idx) % 3) : order[idx];
        try {
          var = solve_chart(k, local[k]);
          kbest = k;
          solved = true;
        } catch (const std::runtime_error& e) {
          if (first_err.empty()) first_err = e.what();
        }
      }
      if (!solved)
        throw std::runtime_error("Schwarz map inversion failed in every chart: " + first_err);
    }
    t = t_of_var(kbest, var);
    if (folded && !t.infinite) t.value = conj(t.value);
    return t;
  }
};

TriangleUniformizer::TriangleUniformizer(const MaximalOrder& ord, int digits)
    : ord_(ord), digits_(digits), bits_(bits_for_digits(digits) + 32) {
  impl_ = new Impl;
  Impl& im = *impl_;
  im.bits = bits_;
  im.digits = digits_;
  im.ord = &ord;
  im.vertex_tol = pow10(std::max(10, digits_ / 2), bits_);
  im.conv_tol = pow10(digits_ + 5, bits_);

  // Anchor fixed points. The three side lengths of a hyperbolic triangle
  // with angles pi/2, pi/4, pi/6 have cosh equal to sqrt(3/2), sqrt(2),
  // sqrt(3); tanh(L/2) = sqrt((cosh L - 1)/(cosh L + 1)).
  Real one = Real::of(1l, bits_);
  Real ch24 = rsqrt(Real::of(mpq_class(3, 2), bits_));
  Real ch26 = rsqrt(Real::of(2l, bits_));
  Real ch46 = rsqrt(Real::of(3l, bits_));
  auto half_tanh = [&](const Real& ch) { return rsqrt((ch - 1) / (ch + 1)); };
  im.r24 = half_tanh(ch24);
  im.r26 = half_tanh(ch26);
  im.r46 = half_tanh(ch46);
  Real L24 = rlog(ch24 + rsqrt(ch24 * ch24 - one));
  Real L26 = rlog(ch26 + rsqrt(ch26 * ch26 - one));
  Real L46 = rlog(ch46 + rsqrt(ch46 * ch46 - one));
  Real anchor_tol = pow10(std::max(10, digits_ / 2), bits_);

  im.tau2 = fixed_point(ord.mu(), bits_);

  bool found4 = false;
  for (const Quat& b : ord.embeddings_with_disc(-4, 8)) {
    Cx fp = fixed_point(b, bits_);
    if (rabs(hyp_dist(im.tau2, fp) - L24) < anchor_tol) {
      im.beta4 = b;
      im.tau4 = fp;
      found4 = true;
      break;
    }
  }
  if (!found4) throw std::logic_error("no adjacent order-4 vertex found");

  bool found6 = false;
  for (const Quat& b : ord.embeddings_with_disc(-3, 8)) {
    Cx fp = fixed_point(b, bits_);
    if (rabs(hyp_dist(im.tau2, fp) - L26) > anchor_tol) continue;
    if (rabs(hyp_dist(im.tau4, fp) - L46) > anchor_tol) continue;
    // orientation: (tau2, tau4, tau6) counterclockwise
    Cx u = im.tau4 - im.tau2, v = fp - im.tau2;
    Real cross = u.re * v.im - u.im * v.re;
    if (!(cross.sgn() > 0)) continue;
    Quat e = b;
    if (trd(e) < 0) e = -e;  // normalize eta^2 - eta + 1 = 0
    im.eta = e;
    im.tau6 = fp;
    found6 = true;
    break;
  }
  if (!found6) throw std::logic_error("no adjacent order-6 vertex found");

  // Global disk model: order-2 vertex at the origin, order-4 vertex on the
  // positive real axis, order-6 vertex on the positive imaginary axis.
  Cx zero = Cx::of(0, 0, bits_);
  im.vert_global[0] = zero;
  im.vert_global[1] = Cx(im.r24, Real(bits_));
  im.vert_global[2] = Cx(Real(bits_), im.r26);
  im.G = mobius_three_points(im.vert_global[0], im.vert_global[1], im.vert_global[2], im.tau2,
                             im.tau4, im.tau6);
  im.Ginv = im.G.inverse();

  // Reduction center: midpoint of the (tau2, tau4) side, which is the mirror
  // of the fold; its Dirichlet domain is the doubled triangle.
  Real x_mid = rtanh(L24 / 4);
  im.center = im.G.apply(Cx(x_mid, Real(bits_)));
  Real rad = hyp_dist(im.center, im.tau2);
  for (const Cx* v : {&im.tau4, &im.tau6}) {
    Real d = hyp_dist(im.center, *v);
    if (d > rad) rad = d;
  }
  im.domain_radius = rad + Real::of_double(0.35, bits_);

  // Chart parameters: exponent differences 1/2 at t=0, 1/4 at t=1, 1/6 at
  // t=infinity force F(1/24, 5/24; 1/2) at 0 and its Kummer transforms at
  // the other two singular points.
  auto mk_chart = [&](mpq_class A, mpq_class B, mpq_class C, long expden, Branch br,
                      const Real& tanh_target) {
    ChartReal ch{Real::of(A, bits_),
                 Real::of(B, bits_),
                 Real::of(C, bits_),
                 Real::of(A - C + 1, bits_),
                 Real::of(B - C + 1, bits_),
                 Real::of(2 - C, bits_),
                 Real::of(1 - C, bits_),
                 expden,
                 br,
                 Real(bits_)};
    // value of y2/y1 at z = 1 via the Gauss summation
    auto G_ = [&](const mpq_class& t) { return rgamma(Real::of(t, bits_)); };
    Real raw = (G_(2 - C) * G_(C - A) * G_(C - B)) / (G_(C) * G_(1 - A) * G_(1 - B));
    ch.kappa = tanh_target / raw;
    return ch;
  };
  mpq_class a(1, 24), b(5, 24);
  im.chart[0] = mk_chart(a, b, mpq_class(1, 2), 2, Branch::UpperArg, im.r24);
  im.chart[1] = mk_chart(a, b, mpq_class(3, 4), 4, Branch::LowerArg, im.r24);
  im.chart[2] = mk_chart(mpq_class(1, 24), mpq_class(13, 24), mpq_class(5, 6), 6,
                         Branch::LowerArg, im.r46);
  for (int k = 0; k < 3; ++k) {
    const ChartReal& c = im.chart[k];
    im.dchart[k] = DChart{c.A.to_double(),  c.B.to_double(),  c.C.to_double(),
                          c.A2.to_double(), c.B2.to_double(), c.C2.to_double(),
                          c.kappa.to_double(), c.expden, c.branch};
  }

  // Local-to-global disk changes of chart, pinned on vertex triples.
  Real s2h = rsqrt(Real::of(mpq_class(1, 2), bits_));  // sin(pi/4) = cos(pi/4)
  Real c6 = rsqrt(Real::of(3l, bits_)) / 2, s6 = Real::of(mpq_class(1, 2), bits_);
  im.H[0] = Mobius{Cx::of(1, 0, bits_), zero, zero, Cx::of(1, 0, bits_)};
  im.H[1] = mobius_three_points(zero, Cx(im.r24, Real(bits_)), Cx(im.r46 * s2h, -(im.r46 * s2h)),
                                im.vert_global[1], im.vert_global[0], im.vert_global[2]);
  im.H[2] = mobius_three_points(zero, Cx(im.r46, Real(bits_)), Cx(im.r26 * c6, -(im.r26 * s6)),
                                im.vert_global[2], im.vert_global[1], im.vert_global[0]);
  for (int k = 0; k < 3; ++k) im.Hinv[k] = im.H[k].inverse();

  // Elliptic generators of the reduction: rotations about the three chamber
  // vertices, their powers, and all pairwise products.
  Quat chi4 = Quat::one() + im.beta4;       // order 4 about tau4
  Quat zeta = im.eta - Quat::one() * 2;     // order 6 about tau6
  std::vector<Quat> base = {ord.mu()};
  Quat p = chi4;
  for (int k = 1; k <= 3; ++k) { base.push_back(p); p = p * chi4; }
  p = zeta;
  for (int k = 1; k <= 5; ++k) { base.push_back(p); p = p * zeta; }
  im.gen_quats = base;
  for (const Quat& u : base)
    for (const Quat& v : base) im.gen_quats.push_back(u * v);
  for (const Quat& q : im.gen_quats) {
    RealMat2 m = iota_inf(q, bits_);
    Real z0(bits_);
    im.gens.push_back(Mobius{Cx(m.a, z0), Cx(m.b, z0), Cx(m.c, z0), Cx(m.d, z0)});
    im.gens_d.push_back({std::complex<double>(m.a.to_double(), 0),
                         std::complex<double>(m.b.to_double(), 0),
                         std::complex<double>(m.c.to_double(), 0),
                         std::complex<double>(m.d.to_double(), 0)});
  }
}

TriangleUniformizer::~TriangleUniformizer() { delete impl_; }

const Cx& TriangleUniformizer::vertex_tau(int ord) const {
  switch (ord) {
    case 2: return impl_->tau2;
    case 4: return impl_->tau4;
    case 6: return impl_->tau6;
    default: throw std::invalid_argument("vertex_tau: order must be 2, 4 or 6");
  }
}

const std::vector<Quat>& TriangleUniformizer::elliptic_generators() const {
  return impl_->gen_quats;
}

std::string TriangleUniformizer::fingerprint() const { return ord_.fingerprint(); }

TPoint TriangleUniformizer::t_of_tau(const Cx& tau) const {
  if (!(tau.im.sgn() > 0)) throw std::domain_error("t_of_tau: tau not in the upper half plane");
  Cx taur = impl_->reduce(tau);
  Cx w = impl_->Ginv.apply(taur);
  if (cabs(w).to_double() > 0.999)
    throw std::runtime_error("reduced point maps outside the disk model");
  try {
    return impl_->t_from_reduced(w);
  } catch (const std::runtime_error&) {
    // Boundary-of-chart trouble: nudge tangentially and retry once.
    Real epsr = pow10(std::max(8, impl_->digits / 2), impl_->bits);
    Cx w2 = w + Cx(epsr, epsr * Real::of_double(0.7, impl_->bits));
    return impl_->t_from_reduced(w2);
  }
}

}  // namespace e6
