// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

#include "lucaspow/cfrac.hpp"
#include "lucaspow/lucas.hpp"

namespace lucaspow::approx {

// 0 < |u tau - v + mu| < A B^-w with u <= M.
struct ReductionInstance {
  RealTarget tau;
  RealTarget mu;
  RealTarget A;  // > 0
  RealTarget B;  // > 1
  mpz_class M;   // >= 1
};

enum class ReductionStatus { reduced, epsilon_nonpositive, precision_unstable };

std::string_view status_name(ReductionStatus s);

struct ReductionOutcome {
  ReductionStatus status = ReductionStatus::precision_unstable;
  // Greatest w for which solutions with u <= M remain possible:
  // ceil(log(A q / eps) / log B) - 1. Present iff reduced.
  std::optional<long> w_bound;
  mpz_class q_used;
  HPReal epsilon{kMinPrecision};  // ||mu q|| - M ||tau q|| at q_used
  int attempts = 0;
  Precision prec = 0;
  std::string detail;
};

struct ReductionOptions {
  // Convergents with q > 6M tried before giving up on eps > 0.
  int max_attempts = 128;
  PrecisionLadder ladder;
};

ReductionOutcome baker_davenport_reduce(const ReductionInstance& inst,
                                        const ReductionOptions& options = {});

// |x log U_{n+1}/log alpha - m + log sqrt(delta)/log alpha| < 2.2 / (r^x log alpha):
// u = x, w = x, B = r.
ReductionInstance walax_instance(const lucas::LucasParams& params, long n, const mpz_class& M);

// r = 3 only:
// |((n+1)x - m) log alpha/log sqrt(delta) - (x-1) + log(1+alpha^-x)/log sqrt(delta)|
//   < 6 / (alpha^n log sqrt(delta)):  w = n, B = alpha.
ReductionInstance walay_instance(const lucas::LucasParams& params, long x, const mpz_class& M);

ReductionOutcome reduce_instance_walax(const lucas::LucasParams& params, long n, const mpz_class& M,
                                       const ReductionOptions& options = {});
ReductionOutcome reduce_instance_walay(const lucas::LucasParams& params, long x, const mpz_class& M,
                                       const ReductionOptions& options = {});

// tau = log sqrt(r^2+4) / log alpha, whose convergents must contain
// ((n+1)x - m)/(x-1) for any solution with n large.
RealTarget wala_target(const lucas::LucasParams& params);

}  // namespace lucaspow::approx
