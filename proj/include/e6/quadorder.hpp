#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace e6 {

// Reduced positive definite primitive form (a, b, c): b^2 - 4ac = D,
// -a < b <= a <= c, and b >= 0 when a = c. One form per class.
struct ReducedForm {
  mpz_class a, b, c;
};

// Invariants of the imaginary quadratic order of discriminant D relevant to
// embeddings into the discriminant-6 order.
struct QuadOrderData {
  mpz_class D;
  mpz_class fundamental_disc;
  mpz_class conductor;
  long h;                 // form class number
  int eichler_2, eichler_3;  // 1 if p divides the conductor, else (K/p)
  long s;                 // h * (1 - e2) * (1 - e3), the embedding count
  int w2_size;            // order of the fixed-point-free Atkin-Lehner quotient group
  mpq_class h_prime;      // h / w2_size
  bool h_prime_integral;
};

// Exhaustive enumeration of reduced forms; D < 0, D = 0 or 1 mod 4.
long class_number(const mpz_class& D, std::vector<ReducedForm>* forms = nullptr);

QuadOrderData quad_order_data(const mpz_class& D);

// The three discriminant families of the search engine.
enum class Family { MinusFourL, MinusL, MinusThreeL };

// D for a family member, e.g. (MinusFourL, 13) -> -52.
mpz_class family_disc(Family f, long l);
// Required congruence class of l mod 24.
long family_congruence(Family f);
// Family recognition from D; nullopt encoded as consistent=false elsewhere.
bool family_of(const mpz_class& D, Family* fam, long* l);

struct ParityCheck {
  bool consistent;
  long h;
  mpq_class h_prime;
  std::string detail;
};

// Compares h mod 4 (where pinned) and the parity of h' against the family
// table: -4l gives h = 2 mod 4 and h' odd, -l gives h odd and h' odd,
// -3l gives h = 0 mod 4 and h' even.
ParityCheck parity_check(Family fam, long l);

// True iff x^2 = a mod m is solvable; m >= 1.
bool is_square_mod(const mpz_class& a, const mpz_class& m);

// Fundamental unit a + b sqrt(m) of Z[sqrt(m)], m in {2, 3, 6}.
struct QuadUnit {
  long m;
  mpz_class a, b;
  int norm;  // a^2 - m b^2
};
QuadUnit fundamental_unit(long m);

// One split rational prime l with its half log-ratios of the primes above it
// in Q(sqrt 2) and Q(sqrt 6), reduced modulo the unit-log lattices.
struct UnitLogPair {
  uint32_t l;
  double u1, u3;      // in [0, ln eps1) x [0, ln eps3)
  double n1, n3;      // normalized to [0, 1)^2
};

struct EquidistResult {
  std::vector<UnitLogPair> pairs;  // sorted by l
  double discrepancy;              // star discrepancy estimate on a 64x64 grid
};

// Splits every prime l < bound with l = +-1 mod 24 in Z[sqrt 2] and
// Z[sqrt 6] by brute-force norm-form search and reports the distribution of
// the log pairs.
EquidistResult equidist_diagnostic(uint32_t bound);

}  // namespace e6
