// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "lucaspow/lucas.hpp"

// Finite searches for U_n^x + U_{n+1}^x = U_m over integers r >= 3.
namespace lucaspow::sieve {

using lucas::LucasParams;

struct Range {
  long lo = 0;
  long hi = -1;

  bool empty() const { return hi < lo; }
  long size() const { return empty() ? 0 : hi - lo + 1; }
};

// -------- n = 1: U_m(r) = 1 + r^x --------

struct N1Solution {
  unsigned long m = 0;
  unsigned long x = 0;
  bool identical = false;           // U_m - 1 - r^x vanishes as a polynomial
  std::vector<unsigned long> roots;  // r >= 3, only when !identical
};

// Every (m, x) in [1, m_max] x [1, x_max] for which U_m(r) = 1 + r^x has a
// root r >= 3, or holds identically.
std::vector<N1Solution> search_n1(unsigned long m_max = 13, unsigned long x_max = 14);

// -------- divisor pre-filter --------

struct DivisorConstraint {
  mpz_class D;  // binom((m+1)/2, 2) - x binom(h, 2)
  int e = 0;    // min(x, 4) - 2
  bool all_r = false;
  std::vector<unsigned long> r_values;  // {r >= 3 : r^e | D}, sorted
};

// Requires n >= 2, x >= 3 and odd m; anything else is std::invalid_argument.
DivisorConstraint candidate_r_divisor(long n, long x, long m);

// -------- exact check --------

// Smallest m with U_m = U_n^x + U_{n+1}^x, if any. n >= 0, x >= 1.
std::optional<long> direct_verify(const LucasParams& params, long n, long x);

// -------- modular sieve --------

struct SieveTile {
  Range n_range;
  Range x_range;
  unsigned long r_max_fallback = 10'000;
  unsigned prime_count = 20;  // T = product of the first prime_count primes
  bool all_m = false;         // also test even m against r in [3, r_max_fallback]

  void validate() const;
};

struct Quadruple {
  unsigned long r = 0;
  long n = 0;
  long x = 0;
  long m = 0;

  friend bool operator==(const Quadruple&, const Quadruple&) = default;
  friend auto operator<=>(const Quadruple&, const Quadruple&) = default;
};

struct Survivor {
  Quadruple at;
  bool exact = false;  // passed direct_verify with this m
};

struct TileResult {
  Range n_range;
  Range x_range;
  unsigned long candidates_generated = 0;
  unsigned long candidates_eliminated_mod_T = 0;
  std::vector<Survivor> survivors;  // passed mod T; sorted
  unsigned long controls_run = 0;
  unsigned long controls_failed = 0;
  bool controls_passed = true;
  bool partially_verified = false;  // some (n, x, m) had D = 0
  unsigned long degenerate_triples = 0;
  double wall_time = 0;
};

struct SieveReport {
  std::vector<TileResult> tiles;

  // Exact solutions with x != 2. Any entry here contradicts the theorem.
  std::vector<Quadruple> falsifications() const;
  bool controls_passed() const;
  bool partially_verified() const;
};

mpz_class primorial_product(unsigned prime_count);

// Control rows use x = 2, m = 2n + 1 for r in [3, 30].
inline constexpr unsigned long kControlRMax = 30;

SieveReport modular_sieve(const SieveTile& tile, bool include_x2_control);

// -------- U_m | U_{n+1}^s - U_n^s --------

// Least s in [1, s_max] with U_m | U_{n+1}^s - U_n^s. Requires m >= 1,
// n >= 0, s_max >= 1.
std::optional<unsigned long> minimal_power_s(const LucasParams& params, long n, long m,
                                             unsigned long s_max);

// m < 20000 s^2 whenever s is outside {1, 2, 4}.
bool minimal_s_bound_holds(long m, unsigned long s);

}  // namespace lucaspow::sieve
