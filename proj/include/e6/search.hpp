#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "e6/poly.hpp"
#include "e6/uniformizer.hpp"

namespace e6 {

// The moduli input: j0 presented by its monic minimal polynomial over Q,
// with [L : Q(j0)] = degree_mult.
struct ModuliInput {
  QPoly minpoly;
  long degree_mult = 1;
  long g = 0;             // deg minpoly
  long field_degree = 0;  // g * degree_mult
  mpz_class n, d;         // norm of j0 from L, in lowest terms, d > 0
  std::vector<std::pair<mpq_class, mpq_class>> real_roots;  // isolating intervals, increasing
};

// Validates irreducibility (best effort: linear, or irreducible modulo a
// small prime) and the gcd(n, d, 6) = 1 hypothesis; isolates real roots.
ModuliInput parse_moduli(const QPoly& minpoly, long degree_mult = 1);

// Minimal expression parser for polynomials in x with rational coefficients,
// e.g. "x^2 - 2", "x + 1/2", "2*x^3 - 7/3*x + 1".
QPoly parse_poly_string(const std::string& s);

enum class ValSigns { AllNonpositive, AllNonnegative, AllZero, Mixed };
const char* val_signs_name(ValSigns v);

// Sign pattern of the q-adic valuations of the conjugates of j0, from the
// Newton polygon of the minimal polynomial.
ValSigns local_valuation_signs(const ModuliInput& input, long q);

// Norm of 27 j0 + 16 from L, signed, exact.
mpq_class norm_27j_plus_16(const ModuliInput& input);

// Nm(S): {2, 3} and every prime occurring in j0 or 27 j0 + 16.
std::vector<long> prime_set(const ModuliInput& input);

struct CaseTrace {
  ValSigns v2, v3;
  long v3_d_nmQ;     // v3(d * Nm(27 j0 + 16)), lowest-terms d
  bool parity_odd;   // [L:Q] + v3(d Nm(27 j0 + 16)) odd
  int roots_in_I1, roots_in_I2, roots_in_I3;
  bool cond[4];      // cond[1..3]
};

// First satisfied case in order 1, 2, 3; 0 when none applies.
int case_select(const ModuliInput& input, CaseTrace* trace = nullptr);

// d for the proof chains: product over allowed primes q of q^(e_q) with
// e_q = [L:Q] * max(0, ceil(-min Newton slope at q)). Case 1 allows all of
// Nm(S), case 2 drops 2, case 3 drops 2 and 3.
mpz_class choose_clearing_d(const ModuliInput& input, int case_no,
                            const std::vector<long>& primeset);

struct NormProfile {
  mpq_class nmP;        // Nm(P_D(j0)), signed, with the integer polynomial
  mpq_class nmQ;        // Nm(27 j0 + 16), signed
  int s = 0, s_prime = 0;
  mpz_class N;          // dchain^{h'} |nmP|, integer
  mpz_class dQ;         // dchain |nmQ|, integer
  long v3_dQ = 0, v2_Q = 0;
  bool degenerate = false;  // j0 is a root of P_D
  bool coprime6 = false;    // gcd(N, 6) = 1
  long h_prime = 0;
};

NormProfile norm_profile(const ModuliInput& input, const HeegnerPolynomial& P,
                         const mpz_class& dchain);

// Primes l <= l_max in the case congruence class satisfying the symbol
// conditions at every q in Nm(S) away from 2 and 3.
std::vector<long> sieve_l(int case_no, const std::vector<long>& primeset, long l_max);

struct Placement {
  bool ok = false;
  bool indeterminate = false;
  std::string description;
};

// The interval condition of the chosen case, decided by exact refinement of
// isolating intervals.
Placement root_placement(int case_no, const ModuliInput& input, const HeegnerPolynomial& P,
                         const NormProfile& profile);

struct ChainEntry {
  std::string symbol;
  mpz_class top, bottom;
  int value;
};

struct ChainResult {
  std::vector<ChainEntry> steps;
  int value;
};

// The case reciprocity chain, every step evaluated and cross-checked, and
// the final value checked against the direct Kronecker symbol (D/N).
ChainResult jacobi_chain(int case_no, const mpz_class& D, long l, const ModuliInput& input,
                         const NormProfile& profile);

struct Certificate {
  int case_no = 0;
  mpz_class D;
  long l = 0;
  mpz_class p;
  std::vector<mpq_class> minpoly;  // ascending coefficients
  long degree_mult = 1;
  mpz_class dchain;
  mpz_class N;
  long vpN = 0;
  int kron_D_p = 0;
  std::vector<ChainEntry> chain;
  bool placement_ok = false;
  std::string placement_note;
  std::vector<long> nm_S;
  int digits = 0;
  std::string table_hash, fingerprint;
};

struct SearchConfig {
  long l_max = 5000;
  int forced_case = 0;       // 0 = automatic
  HeegnerTable* table = nullptr;
  bool persist_table = false;
  std::vector<mpz_class> excluded_p;  // primes from earlier runs to skip
};

struct SearchStats {
  long sieved = 0;
  long tried = 0;
  std::vector<std::string> notes;
};

Certificate find_superspecial(const TriangleUniformizer& uni, const ModuliInput& input,
                              const SearchConfig& cfg, SearchStats* stats = nullptr);

std::string certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const std::string& text);

struct VerifyResult {
  bool pass = true;
  std::vector<std::string> reasons;
  void fail(std::string r) { pass = false; reasons.push_back(std::move(r)); }
};

// Recomputes every claim from the minimal polynomial; does not trust the
// transcript (it is re-evaluated and must match).
VerifyResult verify_certificate(const Certificate& cert, const TriangleUniformizer& uni,
                                HeegnerTable* table = nullptr);

}  // namespace e6
