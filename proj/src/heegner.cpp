#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "e6/arith.hpp"
#include "e6/quadorder.hpp"
#include "e6/uniformizer.hpp"

namespace e6 {

namespace {

struct PipelineFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

HeegnerPolynomial heegner_attempt(const TriangleUniformizer& uni, const mpz_class& D,
                                  const HeegnerOptions& opt, long h_prime) {
  const mpfr_prec_t bits = uni.bits();
  const int digits = uni.digits();
  Real dedup_tol = pow10(std::max(6, digits / 3), bits);

  std::vector<Cx> ts;
  size_t consumed = 0;
  for (long H = 8; H <= opt.height_cap; H *= 2) {
    std::vector<Quat> embs = uni.order().embeddings_with_disc(D, H);
    for (; consumed < embs.size(); ++consumed) {
      const Quat& beta = embs[consumed];
      Cx tau = fixed_point(beta, bits);
      TPoint t = uni.t_of_tau(tau);
      if (t.infinite)
        throw PipelineFailure("CM point at the infinite elliptic anchor for D = " + D.get_str());
      bool fresh = true;
      for (const Cx& seen : ts)
        if (cabs(t.value - seen) < dedup_tol) { fresh = false; break; }
      if (fresh) ts.push_back(t.value);
      if ((long)ts.size() > h_prime)
        throw PipelineFailure("more than h' distinct CM points for D = " + D.get_str());
    }
    if ((long)ts.size() == h_prime) break;
  }
  if ((long)ts.size() != h_prime)
    throw PipelineFailure("found " + std::to_string(ts.size()) + " of " +
                          std::to_string(h_prime) + " CM points for D = " + D.get_str() +
                          " within the height cap");

  std::vector<Cx> js;
  for (const Cx& t : ts) js.push_back(j_from_t(TPoint::finite(t)).value);

  // Monic product over the j-values.
  std::vector<Cx> mon;
  mon.push_back(Cx::of(1, 0, bits));
  for (const Cx& r : js) {
    std::vector<Cx> next(mon.size() + 1, Cx(bits));
    for (size_t i = 0; i < mon.size(); ++i) {
      next[i + 1] = next[i + 1] + mon[i];
      next[i] = next[i] - mon[i] * r;
    }
    mon = std::move(next);
  }

  // Rational reconstruction of each coefficient.
  mpz_class qmax;
  mpz_ui_pow_ui(qmax.get_mpz_t(), 10, std::max(6, digits / 3));
  std::vector<mpq_class> rat(mon.size());
  for (size_t i = 0; i + 1 < mon.size(); ++i) {
    Real mag = rabs(mon[i].re) + Real::of(1l, bits);
    if (rabs(mon[i].im) > mag * pow10(digits / 3, bits))
      throw PipelineFailure("coefficient has a non-real part beyond tolerance");
    if (!rational_reconstruct(mon[i].re, qmax, mag * pow10(digits / 3, bits), &rat[i]))
      throw PipelineFailure("rational reconstruction failed");
  }
  rat.back() = 1;

  mpz_class b = 1;
  for (const auto& q : rat) b = lcm(b, q.get_den());
  if (b <= 0) throw PipelineFailure("bad scaling");

  HeegnerPolynomial P;
  P.D = D;
  P.b = b;
  P.h_prime = h_prime;
  P.digits = digits;
  P.fingerprint = uni.fingerprint();
  P.status = "ok";
  P.roots = js;
  for (const auto& q : rat) {
    mpq_class v = q * b;
    if (v.get_den() != 1) throw PipelineFailure("scaling did not clear denominators");
    P.coeffs.push_back(v.get_num());
  }

  // Verify the integer polynomial against the computed roots.
  for (const Cx& r : js) {
    Cx acc = Cx::of(0, 0, bits);
    for (auto it = P.coeffs.rbegin(); it != P.coeffs.rend(); ++it)
      acc = acc * r + Cx::of(Real::of(*it, bits));
    Real scale = Real::of(b, bits);
    Real ar = cabs(r) + Real::of(1l, bits);
    for (long i = 0; i < h_prime; ++i) scale = scale * ar;
    if (cabs(acc) > scale * pow10(digits / 4, bits))
      throw PipelineFailure("reconstructed polynomial does not vanish at its roots");
  }
  return P;
}

}  // namespace

HeegnerPolynomial heegner_poly(const TriangleUniformizer& uni, const mpz_class& D,
                               const HeegnerOptions& opt) {
  if (D == -3 || D == -4 || D == -24)
    throw std::invalid_argument("D = " + D.get_str() +
                                " is an elliptic anchor point, not a Heegner family input");
  QuadOrderData qd = quad_order_data(D);
  if (qd.conductor != 1)
    throw std::invalid_argument("D must be a fundamental discriminant");
  if (qd.s == 0)
    throw std::invalid_argument("no CM points: s vanishes for D = " + D.get_str());
  if (!qd.h_prime_integral)
    throw std::invalid_argument("h' is not integral for D = " + D.get_str());
  Family fam;
  long l;
  if (!family_of(D, &fam, &l) && !opt.force_family)
    throw std::invalid_argument("D = " + D.get_str() +
                                " is outside the supported families (pass force to override)");
  long h_prime = mpz_class(qd.h_prime.get_num()).get_si();

  try {
    return heegner_attempt(uni, D, opt, h_prime);
  } catch (const PipelineFailure& e) {
    std::string first = e.what();
    int digits = uni.digits();
    for (int esc = 0; esc < opt.max_escalations; ++esc) {
      digits *= 2;
      TriangleUniformizer finer(uni.order(), digits);
      try {
        return heegner_attempt(finer, D, opt, h_prime);
      } catch (const PipelineFailure&) {
        continue;
      }
    }
    throw std::runtime_error("heegner_poly failed for D = " + D.get_str() + ": " + first);
  }
}

std::string heegner_to_json(const HeegnerPolynomial& p) {
  nlohmann::json j;
  j["D"] = p.D.get_str();
  j["b"] = p.b.get_str();
  std::vector<std::string> cs;
  for (const auto& c : p.coeffs) cs.push_back(c.get_str());
  j["coeffs"] = cs;
  j["h_prime"] = p.h_prime;
  j["digits"] = p.digits;
  j["fingerprint"] = p.fingerprint;
  j["status"] = p.status;
  return j.dump();
}

bool heegner_from_json(const std::string& line, HeegnerPolynomial* out) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.contains("D") || !j.contains("coeffs")) return false;
  HeegnerPolynomial p;
  p.D = mpz_class(j["D"].get<std::string>());
  p.b = mpz_class(j["b"].get<std::string>());
  for (const auto& c : j["coeffs"]) p.coeffs.emplace_back(c.get<std::string>());
  p.h_prime = j["h_prime"].get<long>();
  p.digits = j["digits"].get<int>();
  p.fingerprint = j.value("fingerprint", "");
  p.status = j.value("status", "ok");
  *out = std::move(p);
  return true;
}

void HeegnerTable::load() {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    HeegnerPolynomial p;
    if (heegner_from_json(line, &p) && p.status == "ok") cache_[p.D] = p;
  }
}

bool HeegnerTable::lookup(const mpz_class& D, HeegnerPolynomial* out) const {
  auto it = cache_.find(D);
  if (it == cache_.end()) return false;
  *out = it->second;
  return true;
}

void HeegnerTable::put(const HeegnerPolynomial& p, bool persist) {
  cache_[p.D] = p;
  if (persist && !path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    out << heegner_to_json(p) << "\n";
  }
}

std::string HeegnerTable::content_hash() const {
  uint64_t h = 1469598103934665603ull;
  for (const auto& [D, p] : cache_) {
    std::string s = heegner_to_json(p);
    for (char c : s) {
      h ^= (unsigned char)c;
      h *= 1099511628211ull;
    }
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return std::string(buf);
}

std::vector<RegenEntry> regenerate_table(const TriangleUniformizer& uni,
                                         const std::vector<mpz_class>& Ds, HeegnerTable* table) {
  std::vector<RegenEntry> out;
  for (const mpz_class& D : Ds) {
    RegenEntry e;
    e.D = D;
    try {
      HeegnerPolynomial p = heegner_poly(uni, D);
      table->put(p, true);
      e.status = "ok";
    } catch (const std::exception& ex) {
      e.status = ex.what();
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace e6
