// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "lucaspow/hpreal.hpp"
#include "lucaspow/lucas.hpp"

// Analytic quantities attached to U_n^x + U_{n+1}^x = U_m: heights, the
// linear form Gamma, lower bounds for linear forms in two and three
// logarithms, the resulting ceilings on x, and the approximation residuals.
namespace lucaspow::bounds {

using lucas::LucasParams;

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// alpha, log alpha, sqrt(delta), log sqrt(delta) and log r at one precision.
struct SequenceConstants {
  HPReal alpha;
  HPReal log_alpha;
  HPReal sqrt_delta;
  HPReal log_sqrt_delta;
  HPReal log_r;
};

SequenceConstants sequence_constants(const LucasParams& params, Precision prec);

struct SequenceHeights {
  HPReal h_alpha;        // (1/2) log alpha
  HPReal h_sqrt_delta;   // (1/2) log(r^2 + 4)
};

SequenceHeights height_of_sequence_constants(const LucasParams& params, Precision prec = 256);

struct IntInterval {
  long lo;
  long hi;
  bool contains(long v) const { return lo <= v && v <= hi; }
  long size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

// Integers m with (n-1)x + 1 < m < (n+1)x + 2. Requires n >= 2, x >= 3.
IntInterval m_window(long n, long x);

struct KappaRecord {
  long n;
  long x;
  long m;
  long kappa;  // n x + 1 - m
};

KappaRecord kappa(long n, long x, long m);

// Gamma = m log alpha - log sqrt(delta) - x log U_{n+1}, under the
// two-precision protocol.
Stable<HPReal> linear_form_gamma(const LucasParams& params, long n, long m, long x,
                                 const PrecisionLadder& ladder = {});

// |Gamma| < 2.2 / r^x, decided identically at both precisions.
bool gamma_below_bound(const LucasParams& params, long n, long m, long x,
                       const PrecisionLadder& ladder = {});

struct ThreeLogParams {
  int D;
  HPReal A1, A2, A3;
  HPReal bprime;
  HPReal logB;  // max{0.882 + log b', 10 / D}

  HPReal omega() const { return A1 * A2 * A3; }

  // Fills logB from bprime; validates A_i >= 4 and Omega >= 100.
  static ThreeLogParams make(int D, HPReal A1, HPReal A2, HPReal A3, HPReal bprime);
};

// Parameters used for Gamma with gamma_1 = sqrt(delta), gamma_2 = alpha,
// gamma_3 = U_{n+1}: A_1 = 8.296 log(r+1), A_2 = 6.296 log(r+1),
// A_3 = 8.296 n log(r+1), b' = 0.12 m x / log(r+1)^2, D = 2.
ThreeLogParams three_log_params_for(const LucasParams& params, long n, long m, long x,
                                    Precision prec = 128);

// -790.95 Omega D^2 (log B)^2
HPReal three_log_lower_bound(const ThreeLogParams& p);

struct TwoLogParams {
  int D;
  HPReal logB1, logB2;
  HPReal bprime;
};

// -24.34 D^4 (max{log b' + 0.14, 21/D, 1/2})^2 log B_1 log B_2
HPReal two_log_lower_bound(const TwoLogParams& p);

struct XUpperBounds {
  double bound1;  // 3.3e6 log(r+1)^2
  double bound2;  // largest x with x below the three-log right-hand side
  double bound3;  // largest x with x below the two-log right-hand side
  double max;
};

// Right-hand sides of the two implicit ceilings, as functions of x.
double x_rhs_three_log(const LucasParams& params, long n, double x);
double x_rhs_two_log(const LucasParams& params, long n, double x);

XUpperBounds x_upper_bounds(const LucasParams& params, long n);

struct ApproxResiduals {
  HPReal zeta;        // log sqrt(r^2+4) - log r - 2/r^2
  HPReal zeta_prime;  // log alpha - log r - 1/r^2
  std::optional<HPReal> zeta_dblprime;  // log U_{n+1} - ((n+1) log alpha - log sqrt(delta))

  HPReal zeta_scaled;        // |zeta| r^4
  HPReal zeta_prime_scaled;  // |zeta'| r^4
  std::optional<HPReal> zeta_dblprime_scaled;  // |zeta''| alpha^(2n+2)

  // |zeta| r^4 < 5.81, |zeta'| r^4 < 3.64, |zeta''| alpha^(2n+2) < 1.51,
  // decided identically at both precisions.
  bool within_bounds = false;
  Precision prec = 0;
};

ApproxResiduals approx_errors(const LucasParams& params, std::optional<long> n,
                              const PrecisionLadder& ladder = {});

// Lower bound (kappa r^2 log r + 1) / (1 + 5/r) on x. Requires r >= 4.
HPReal kappa_min_x(const LucasParams& params, long kappa_val, Precision prec = 128);

// Indices n in [1, n_max] where U_n^3 + U_{n+1}^3 < U_{3n+1} fails for r = 4.
std::vector<long> cube_ineq_check(long n_max);

}  // namespace lucaspow::bounds
