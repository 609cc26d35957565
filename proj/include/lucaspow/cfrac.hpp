// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lucaspow/hpreal.hpp"

namespace lucaspow::approx {

// A real number that can be re-evaluated at any requested precision.
using RealTarget = std::function<HPReal(Precision)>;

RealTarget constant_target(const std::string& decimal);

class InsufficientExpansion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Convergent {
  mpz_class p;
  mpz_class q;
};

struct ContinuedFraction {
  HPReal target;
  std::vector<mpz_class> quotients;     // a_0, a_1, ...
  std::vector<Convergent> convergents;  // p_i / q_i, one per quotient
  Precision gen_prec = 0;

  const Convergent& last() const { return convergents.back(); }
};

// Expands `target` (> 0) until a convergent with q_N > q_stop appears, then
// adds `extra_terms` more. The quotients are taken from the exact expansion
// of the binary value at precision p and must coincide with those at 2p
// (plus one guard quotient); otherwise the ladder escalates.
ContinuedFraction cf_expand(const RealTarget& target, const mpz_class& q_stop,
                            const PrecisionLadder& ladder = {}, std::size_t extra_terms = 0);

// Index N of the first convergent with q_N > M.
std::size_t first_index_beyond(const ContinuedFraction& cf, const mpz_class& M);

// a(M) = max{a_0, ..., a_N} where N is the first index with q_N > M. For
// 0 < v < M this gives |tau - u/v| > 1 / ((a(M) + 2) v^2).
mpz_class legendre_bound(const ContinuedFraction& cf, const mpz_class& M);

struct ConvergentMatch {
  bool found = false;
  std::size_t index = 0;
};

// Whether u/v (after reduction) is one of the generated convergents.
ConvergentMatch is_convergent(const ContinuedFraction& cf, const mpz_class& u, const mpz_class& v);

struct LegendreAudit {
  std::size_t samples = 0;
  std::size_t failures = 0;
};

// Samples denominators 0 < v < M (uniformly, plus every convergent
// denominator below M), takes u nearest to tau v and checks
// |tau v - u| (a(M) + 2) v > 1 at two precisions.
LegendreAudit legendre_audit(const RealTarget& tau, const ContinuedFraction& cf,
                             const mpz_class& M, std::size_t samples, std::uint64_t seed,
                             const PrecisionLadder& ladder = {});

}  // namespace lucaspow::approx
