// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lucaspow/hpreal.hpp"

// Exact arithmetic for the Lucas pair U_{n+2} = r U_{n+1} + U_n,
// V_{n+2} = r V_{n+1} + V_n with U_0 = 0, U_1 = 1, V_0 = 2, V_1 = r.
namespace lucaspow::lucas {

class LucasParams {
 public:
  explicit LucasParams(unsigned long r);

  unsigned long r() const { return r_; }
  // r^2 + 4 = (alpha - beta)^2
  const mpz_class& delta() const { return delta_; }

 private:
  unsigned long r_;
  mpz_class delta_;
};

using SeqIndex = long;

// Thrown when the index of appearance is not found within p + 1 terms,
// which only happens when p is not prime.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

mpz_class lucas_u(const LucasParams& params, SeqIndex n);
mpz_class lucas_v(const LucasParams& params, SeqIndex n);

// (U_n, U_{n+1}) for n >= 0 by fast doubling.
std::pair<mpz_class, mpz_class> lucas_u_pair(const LucasParams& params, unsigned long n);

// U_n mod `modulus` in O(log n) multiplications. modulus >= 2.
mpz_class lucas_u_mod(const LucasParams& params, unsigned long n, const mpz_class& modulus);
// (U_n mod m, U_{n+1} mod m)
std::pair<mpz_class, mpz_class> lucas_u_pair_mod(const LucasParams& params, unsigned long n,
                                                 const mpz_class& modulus);

// Coefficients of U_n as a polynomial in r: exponent k -> binom((n+k-1)/2, k)
// for k in [0, n] with k and n of opposite parity. Zero terms are omitted.
using Polynomial = std::map<unsigned long, mpz_class>;
Polynomial lucas_poly_coefficients(unsigned long n);
mpz_class evaluate(const Polynomial& poly, const mpz_class& r);

// Smallest k >= 1 with p | U_k. `p` is assumed prime; trial division up to
// `trial_bound` rejects obvious composites with std::invalid_argument.
unsigned long index_of_appearance(const LucasParams& params, unsigned long p,
                                  unsigned long trial_bound = 1'000'000);

enum class Identity {
  consecutive_squares,  // U_n^2 + U_{n+1}^2 = U_{2n+1}
  doubling,             // U_{2n} = U_n V_n
  cassini,              // U_{n+1}^2 - U_n U_{n+2} = (-1)^n
  pell,                 // V_n^2 - delta U_n^2 = 4(-1)^n
  addition,             // 2 U_{m+n} = U_m V_n + U_n V_m
  gcd,                  // gcd(U_n, U_m) = U_gcd(n,m)
  odd_minus_one,        // U_n - 1 as a U*V product for odd n
  r_divisibility,       // r | U_n (n even), r | U_n - 1 (n odd)
  growth_bounds,        // alpha^(n-2) <= U_n <= alpha^(n-1), n >= 1
  ratio_bound,          // U_n / U_{n+1} < 1/r, n >= 2
};

std::string_view identity_name(Identity id);

struct IdentityViolation {
  Identity identity;
  SeqIndex i;
  SeqIndex j;  // second index for pairwise identities, otherwise equal to i
  std::string detail;
};

// Checks every identity over [n_lo, n_hi] (pairwise ones over all pairs).
// Inequalities are decided with outward-rounded interval bounds.
std::vector<IdentityViolation> identity_suite(const LucasParams& params, SeqIndex n_lo,
                                              SeqIndex n_hi, const PrecisionLadder& ladder = {});

}  // namespace lucaspow::lucas
