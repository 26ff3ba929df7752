#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "e6/cx.hpp"
#include "e6/quaternion.hpp"

namespace e6 {

// A point of the t-line; the order-6 elliptic point sits at infinity and is
// carried as a tag, never as a large float.
struct TPoint {
  bool infinite = false;
  Cx value;

  static TPoint inf() { TPoint p; p.infinite = true; return p; }
  static TPoint finite(Cx v) { TPoint p; p.value = std::move(v); return p; }
};

// j = 16(t - 1)/27.
TPoint j_from_t(const TPoint& t);

// Unique upper-half-plane fixed point of iota(beta); requires
// trd(beta)^2 - 4 nrd(beta) < 0.
Cx fixed_point(const Quat& beta, mpfr_prec_t bits);

// Hauptmodul of the (2,4,6) triangle group uniformizing the quotient curve,
// pinned by the three elliptic anchors:
//   order 2 (CM by Z[sqrt(-6)])        -> t = 0
//   order 4 (CM by Z[i])               -> t = 1
//   order 6 (CM by Z[(1+sqrt(-3))/2])  -> t = infinity
// Evaluation reduces tau into a fundamental domain by elliptic generators,
// then inverts the hypergeometric Schwarz map of the appropriate vertex
// chart by Newton iteration (series continued across chart boundaries by
// stepping the underlying ODE).
class TriangleUniformizer {
 public:
  TriangleUniformizer(const MaximalOrder& ord, int digits);
  ~TriangleUniformizer();
  TriangleUniformizer(const TriangleUniformizer&) = delete;
  TriangleUniformizer& operator=(const TriangleUniformizer&) = delete;

  int digits() const { return digits_; }
  mpfr_prec_t bits() const { return bits_; }
  const MaximalOrder& order() const { return ord_; }

  TPoint t_of_tau(const Cx& tau) const;

  // Elliptic anchor fixed points, ord in {2, 4, 6}.
  const Cx& vertex_tau(int ord) const;
  // Quaternions whose images generate the reduction moves (diagnostics).
  const std::vector<Quat>& elliptic_generators() const;

  std::string fingerprint() const;

 private:
  struct Impl;
  const MaximalOrder& ord_;
  int digits_;
  mpfr_prec_t bits_;
  Impl* impl_;
};

// Integer-coefficient Heegner polynomial b * prod (x - j(a_i)).
struct HeegnerPolynomial {
  mpz_class D;
  mpz_class b;                     // minimal positive scaling, = leading coefficient
  std::vector<mpz_class> coeffs;   // ascending, degree h'
  long h_prime;
  int digits;                      // working precision that produced it
  std::string fingerprint;
  std::string status;              // "ok" or an error note (table entries)
  std::vector<Cx> roots;           // the j(a_i) at working precision
};

struct HeegnerOptions {
  bool force_family = false;  // allow fundamental D outside the three families
  long height_cap = 1024;
  int max_escalations = 2;
};

HeegnerPolynomial heegner_poly(const TriangleUniformizer& uni, const mpz_class& D,
                               const HeegnerOptions& opt = {});

// Line-oriented cache of Heegner polynomials (one JSON object per line).
class HeegnerTable {
 public:
  HeegnerTable() = default;
  explicit HeegnerTable(std::string path) : path_(std::move(path)) {}

  void load();  // no-op if the file does not exist
  bool lookup(const mpz_class& D, HeegnerPolynomial* out) const;
  void put(const HeegnerPolynomial& p, bool persist);
  const std::string& path() const { return path_; }
  size_t size() const { return cache_.size(); }
  std::string content_hash() const;

 private:
  std::string path_;
  std::map<mpz_class, HeegnerPolynomial> cache_;
};

struct RegenEntry {
  mpz_class D;
  std::string status;
};

// Batch computation with per-entry status; failures do not abort the batch.
std::vector<RegenEntry> regenerate_table(const TriangleUniformizer& uni,
                                         const std::vector<mpz_class>& Ds, HeegnerTable* table);

std::string heegner_to_json(const HeegnerPolynomial& p);
bool heegner_from_json(const std::string& line, HeegnerPolynomial* out);

}  // namespace e6
