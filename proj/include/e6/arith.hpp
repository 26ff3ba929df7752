#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "e6/real.hpp"

namespace e6 {

// p-adic valuation of a nonzero integer.
long vp_z(const mpz_class& n, const mpz_class& p);
// p-adic valuation of a nonzero rational (may be negative).
long vp_q(const mpq_class& x, const mpz_class& p);

bool is_prime(const mpz_class& n);
std::vector<uint32_t> primes_upto(uint32_t n);

struct Factorization {
  std::vector<std::pair<mpz_class, long>> factors;  // ascending primes
  bool complete;  // false if a composite cofactor resisted factoring
};

// Trial division up to trial_bound, then Pollard rho (Brent) on what is left.
Factorization factorize(const mpz_class& n, uint32_t trial_bound = 1000000, int rho_rounds = 6);

// Full Kronecker symbol (a/n), defined for all integers.
int kronecker(const mpz_class& a, const mpz_class& n);

// One rewrite step in the reciprocity evaluation of a Kronecker symbol.
struct SymbolStep {
  std::string rule;   // "unit", "strip2", "flip", "reduce", "terminal"
  mpz_class top, bottom;
  int sign;           // sign factor contributed by this step
};

// Evaluates (a/n) purely by reciprocity rewrites (strip powers of two, flip,
// reduce), recording every step. Agrees with kronecker() by construction of
// the rules, which the tests check on random inputs.
int kronecker_transcript(const mpz_class& a, const mpz_class& n, std::vector<SymbolStep>* steps);

// Best rational approximation p/q to x with q <= qmax, by continued
// fractions. Returns false if the result fails |x - p/q| < tol.
bool rational_reconstruct(const Real& x, const mpz_class& qmax, const Real& tol, mpq_class* out);

mpq_class parse_rational(const std::string& s);  // "a" or "a/b"

}  // namespace e6
