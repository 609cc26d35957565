// SPDX-License-Identifier: Apache-2.0
#include "lucaspow/bounds.hpp"

#include <cmath>
#include <string>

namespace lucaspow::bounds {

SequenceConstants sequence_constants(const LucasParams& params, Precision prec) {
  HPReal sqrt_delta = sqrt(HPReal(params.delta(), prec));
  HPReal r(static_cast<long>(params.r()), prec);
  HPReal alpha = (sqrt_delta + r) / 2;
  HPReal log_alpha = log(alpha);
  HPReal log_sqrt_delta = log(HPReal(params.delta(), prec)) / 2;
  return {std::move(alpha), std::move(log_alpha), std::move(sqrt_delta), std::move(log_sqrt_delta),
          log(r)};
}

SequenceHeights height_of_sequence_constants(const LucasParams& params, Precision prec) {
  SequenceConstants c = sequence_constants(params, prec);
  // alpha is a unit with conjugate -1/alpha; sqrt(delta) has conjugate
  // -sqrt(delta) and minimal polynomial x^2 - delta.
  return {c.log_alpha / 2, log(HPReal(params.delta(), prec)) / 2};
}

IntInterval m_window(long n, long x) {
  if (n < 2 || x < 3) {
    throw std::invalid_argument("m_window requires n >= 2 and x >= 3");
  }
  return {(n - 1) * x + 2, (n + 1) * x + 1};
}

KappaRecord kappa(long n, long x, long m) { return {n, x, m, n * x + 1 - m}; }

namespace {

void require_positive(long v, const char* name) {
  if (v < 1) {
    throw std::invalid_argument(std::string(name) + " must be at least 1");
  }
}

HPReal gamma_at(const LucasParams& params, const mpz_class& u_next, long m, long x,
                Precision prec) {
  SequenceConstants c = sequence_constants(params, prec);
  return c.log_alpha * m - c.log_sqrt_delta - log_of(u_next, prec) * x;
}

}  // namespace

Stable<HPReal> linear_form_gamma(const LucasParams& params, long n, long m, long x,
                                 const PrecisionLadder& ladder) {
  require_positive(n, "n");
  require_positive(m, "m");
  require_positive(x, "x");
  mpz_class u_next = lucas::lucas_u(params, n + 1);
  return evaluate_stable(
      ladder, ladder.floor,
      [&](Precision p) { return gamma_at(params, u_next, m, x, p); }, "linear_form_gamma");
}

bool gamma_below_bound(const LucasParams& params, long n, long m, long x,
                       const PrecisionLadder& ladder) {
  require_positive(n, "n");
  require_positive(m, "m");
  require_positive(x, "x");
  mpz_class u_next = lucas::lucas_u(params, n + 1);
  struct Eval {
    HPReal gamma;
    bool below;
  };
  auto eval = [&](Precision p) {
    HPReal g = gamma_at(params, u_next, m, x, p);
    HPReal bound = HPReal::from_decimal("2.2", p) / pow(HPReal(static_cast<long>(params.r()), p), x);
    bool below = abs(g) < bound;
    return Eval{std::move(g), below};
  };
  auto same = [](const Eval& a, const Eval& b, Precision p) {
    return a.below == b.below && agree(a.gamma, b.gamma, p);
  };
  return evaluate_stable(ladder, ladder.floor, eval, same, "gamma_below_bound").value.below;
}

ThreeLogParams ThreeLogParams::make(int D, HPReal A1, HPReal A2, HPReal A3, HPReal bprime) {
  if (D < 1) {
    throw InvalidParams("three-log bound: degree must be positive");
  }
  for (const HPReal* a : {&A1, &A2, &A3}) {
    if (*a < 4) {
      throw InvalidParams("three-log bound: every A_i must be at least 4");
    }
  }
  if (A1 * A2 * A3 < 100) {
    throw InvalidParams("three-log bound: Omega = A1 A2 A3 must be at least 100");
  }
  if (bprime.sign() <= 0) {
    throw InvalidParams("three-log bound: b' must be positive");
  }
  Precision prec = bprime.prec();
  HPReal log_b = HPReal::from_decimal("0.882", prec) + log(bprime);
  HPReal floor_term = HPReal(10, prec) / D;
  HPReal logB = max(log_b, floor_term);
  return {D, std::move(A1), std::move(A2), std::move(A3), std::move(bprime), std::move(logB)};
}

ThreeLogParams three_log_params_for(const LucasParams& params, long n, long m, long x,
                                    Precision prec) {
  HPReal log_r1 = log(HPReal(static_cast<long>(params.r()) + 1, prec));
  HPReal A1 = HPReal::from_decimal("8.296", prec) * log_r1;
  HPReal A2 = HPReal::from_decimal("6.296", prec) * log_r1;
  HPReal A3 = HPReal::from_decimal("8.296", prec) * log_r1 * n;
  HPReal bprime = HPReal::from_decimal("0.12", prec) * m * x / (log_r1 * log_r1);
  return ThreeLogParams::make(2, std::move(A1), std::move(A2), std::move(A3), std::move(bprime));
}

HPReal three_log_lower_bound(const ThreeLogParams& p) {
  if (p.A1 < 4 || p.A2 < 4 || p.A3 < 4 || p.omega() < 100) {
    throw InvalidParams("three-log bound: A_i >= 4 and Omega >= 100 required");
  }
  Precision prec = p.logB.prec();
  return -(HPReal::from_decimal("790.95", prec) * p.omega() * (p.D * p.D) * p.logB * p.logB);
}

HPReal two_log_lower_bound(const TwoLogParams& p) {
  if (p.D < 1 || p.logB1.sign() <= 0 || p.logB2.sign() <= 0 || p.bprime.sign() <= 0) {
    throw InvalidParams("two-log bound: D, log B_i and b' must be positive");
  }
  Precision prec = p.logB1.prec();
  HPReal h = log(p.bprime) + HPReal::from_decimal("0.14", prec);
  h = max(h, HPReal(21, prec) / p.D);
  h = max(h, HPReal(1, prec) / 2);
  return -(HPReal::from_decimal("24.34", prec) * (p.D * p.D * p.D * p.D) * h * h * p.logB1 *
           p.logB2);
}

namespace {

struct Logs {
  long double log_r1;
  long double correction;  // 1 + 1/(r log r)
};

Logs logs_for(const LucasParams& params) {
  long double r = static_cast<long double>(params.r());
  return {std::log(r + 1), 1 + 1 / (r * std::log(r))};
}

// Largest real x in [3, 1e30] with rhs(x) > x, found by stepping down from
// the top in factors of two and bisecting the first bracket. 0 if none.
template <class Rhs>
double largest_crossing(Rhs rhs) {
  long double hi = 1e30L;
  if (rhs(hi) > hi) {
    return static_cast<double>(hi);
  }
  long double lo = hi;
  while (lo > 3 && !(rhs(lo) > lo)) {
    hi = lo;
    lo /= 2;
  }
  if (lo < 3) {
    lo = 3;
    if (!(rhs(lo) > lo)) return 0;
  }
  for (int i = 0; i < 200 && hi - lo > 0.5L; ++i) {
    long double mid = (lo + hi) / 2;
    if (rhs(mid) > mid) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(std::floor(lo));
}

}  // namespace

double x_rhs_three_log(const LucasParams& params, long n, double x) {
  Logs l = logs_for(params);
  long double L2 = l.log_r1 * l.log_r1;
  long double xx = x;
  long double inner = std::log(0.3L * (n + 1) * (xx + 1) * (xx + 1) / L2);
  return static_cast<double>(1.38e6L * n * l.correction * L2 * inner * inner);
}

double x_rhs_two_log(const LucasParams& params, long n, double x) {
  Logs l = logs_for(params);
  long double L2 = l.log_r1 * l.log_r1;
  long double inner = std::log(0.12L * (static_cast<long double>(x) + 1) / L2);
  return static_cast<double>(1.63e6L * n * l.correction * L2 * l.log_r1 * inner * inner);
}

XUpperBounds x_upper_bounds(const LucasParams& params, long n) {
  if (params.r() < 3 || n < 2) {
    throw std::invalid_argument("x_upper_bounds requires r >= 3 and n >= 2");
  }
  Logs l = logs_for(params);
  XUpperBounds out{};
  out.bound1 = static_cast<double>(3.3e6L * l.log_r1 * l.log_r1);
  out.bound2 = largest_crossing([&](long double x) {
    return static_cast<long double>(x_rhs_three_log(params, n, static_cast<double>(x)));
  });
  out.bound3 = largest_crossing([&](long double x) {
    return static_cast<long double>(x_rhs_two_log(params, n, static_cast<double>(x)));
  });
  out.max = std::max({out.bound1, out.bound2, out.bound3});
  return out;
}

ApproxResiduals approx_errors(const LucasParams& params, std::optional<long> n,
                              const PrecisionLadder& ladder) {
  if (params.r() < 3) {
    throw std::invalid_argument("approx_errors requires r >= 3");
  }
  if (n && *n < 2) {
    throw std::invalid_argument("approx_errors requires n >= 2");
  }
  // zeta'' = log U_{n+1} + log sqrt(delta) - (n+1) log alpha loses about
  // (2n+2) log2(alpha) bits to cancellation. With 2 alpha^(n+1) = V + U sqrt(delta)
  // and V^2 - delta U^2 = 4(-1)^(n+1) it equals log1p((-1)^n 4 / (V + U sqrt(delta))^2)
  // for U = U_{n+1}, V = V_{n+1}, which has no cancellation at all.
  std::optional<std::pair<mpz_class, mpz_class>> uv;
  if (n) {
    uv.emplace(lucas::lucas_u(params, *n + 1), lucas::lucas_v(params, *n + 1));
  }
  const Precision hint = ladder.floor;
  auto eval = [&](Precision p) {
    SequenceConstants c = sequence_constants(params, p);
    HPReal r(static_cast<long>(params.r()), p);
    HPReal r2 = r * r;
    HPReal r4 = r2 * r2;
    ApproxResiduals out{c.log_sqrt_delta - c.log_r - HPReal(2, p) / r2,
                        c.log_alpha - c.log_r - HPReal(1, p) / r2,
                        std::nullopt,
                        HPReal(p),
                        HPReal(p),
                        std::nullopt};
    out.zeta_scaled = abs(out.zeta) * r4;
    out.zeta_prime_scaled = abs(out.zeta_prime) * r4;
    out.within_bounds = out.zeta_scaled < HPReal::from_decimal("5.81", p) &&
                        out.zeta_prime_scaled < HPReal::from_decimal("3.64", p);
    if (n) {
      HPReal w = HPReal(uv->second, p) + HPReal(uv->first, p) * c.sqrt_delta;
      HPReal t = HPReal(4, p) / (w * w);
      HPReal dbl = log1p(*n % 2 == 0 ? t : -t);
      HPReal scaled = abs(dbl) * pow(c.alpha, 2 * *n + 2);
      out.within_bounds = out.within_bounds && scaled < HPReal::from_decimal("1.51", p);
      out.zeta_dblprime = std::move(dbl);
      out.zeta_dblprime_scaled = std::move(scaled);
    }
    out.prec = p;
    return out;
  };
  auto same = [](const ApproxResiduals& a, const ApproxResiduals& b, Precision p) {
    if (a.within_bounds != b.within_bounds || !agree(a.zeta, b.zeta, p) ||
        !agree(a.zeta_prime, b.zeta_prime, p)) {
      return false;
    }
    return !a.zeta_dblprime || agree(*a.zeta_dblprime, *b.zeta_dblprime, p);
  };
  auto result = evaluate_stable(ladder, hint, eval, same, "approx_errors");
  result.value.prec = result.prec;
  return std::move(result.value);
}

HPReal kappa_min_x(const LucasParams& params, long kappa_val, Precision prec) {
  if (params.r() <= 3) {
    throw std::domain_error("kappa_min_x requires r >= 4");
  }
  if (kappa_val < 1) {
    throw std::invalid_argument("kappa_min_x requires kappa >= 1");
  }
  HPReal r(static_cast<long>(params.r()), prec);
  HPReal num = r * r * log(r) * kappa_val + HPReal(1, prec);
  HPReal den = HPReal(1, prec) + HPReal(5, prec) / r;
  return num / den;
}

std::vector<long> cube_ineq_check(long n_max) {
  if (n_max < 1) {
    throw std::invalid_argument("cube_ineq_check requires n_max >= 1");
  }
  const unsigned long r = 4;
  std::vector<mpz_class> u(static_cast<std::size_t>(3 * n_max + 2));
  u[0] = 0;
  u[1] = 1;
  for (std::size_t k = 2; k < u.size(); ++k) {
    u[k] = r * u[k - 1] + u[k - 2];
  }
  std::vector<long> violations;
  for (long n = 1; n <= n_max; ++n) {
    const mpz_class& a = u[static_cast<std::size_t>(n)];
    const mpz_class& b = u[static_cast<std::size_t>(n + 1)];
    if (!(a * a * a + b * b * b < u[static_cast<std::size_t>(3 * n + 1)])) {
      violations.push_back(n);
    }
  }
  return violations;
}

}  // namespace lucaspow::bounds
