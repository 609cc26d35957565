// SPDX-License-Identifier: Apache-2.0
#include "lucaspow/cfrac.hpp"

#include <algorithm>
#include <string>

namespace lucaspow::approx {

RealTarget constant_target(const std::string& decimal) {
  return [decimal](Precision p) { return HPReal::from_decimal(decimal, p); };
}

namespace {

// Exact continued fraction of the dyadic rational held in `x`, stopping
// after `max_terms` quotients or when the expansion terminates.
std::vector<mpz_class> dyadic_quotients(const HPReal& x, std::size_t max_terms) {
  mpz_class num, den = 1;
  mpfr_exp_t e = mpfr_get_z_2exp(num.get_mpz_t(), x.raw());
  if (e >= 0) {
    num <<= static_cast<mp_bitcnt_t>(e);
  } else {
    den <<= static_cast<mp_bitcnt_t>(-e);
  }
  std::vector<mpz_class> out;
  mpz_class a, rem;
  while (den != 0 && out.size() < max_terms) {
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(a);
    num = den;
    den = rem;
  }
  return out;
}

std::vector<Convergent> convergents_of(const std::vector<mpz_class>& quotients) {
  std::vector<Convergent> out;
  out.reserve(quotients.size());
  mpz_class p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
  for (const mpz_class& a : quotients) {
    mpz_class p = a * p_prev + p_prev2;
    mpz_class q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
    out.push_back({p, q});
  }
  return out;
}

// Number of quotients needed: through the first q_N > q_stop, plus extra.
std::size_t needed_terms(const std::vector<Convergent>& convs, const mpz_class& q_stop,
                         std::size_t extra) {
  for (std::size_t i = 0; i < convs.size(); ++i) {
    if (convs[i].q > q_stop) return i + 1 + extra;
  }
  return 0;
}

}  // namespace

ContinuedFraction cf_expand(const RealTarget& target, const mpz_class& q_stop,
                            const PrecisionLadder& ladder, std::size_t extra_terms) {
  if (q_stop < 1) {
    throw std::invalid_argument("cf_expand: q_stop must be at least 1");
  }
  ladder.validate();
  // Denominators grow at least like Fibonacci numbers, so the expansion at
  // precision p can hold roughly p quotients before they lose meaning.
  const Precision hint = 2 * static_cast<Precision>(mpz_sizeinbase(q_stop.get_mpz_t(), 2)) + 64;
  for (Precision p = ladder.start_for(hint); 2 * p <= ladder.ceiling; p *= 2) {
    HPReal coarse_value = target(p);
    HPReal fine_value = target(2 * p);
    if (!(coarse_value > 0) || !(fine_value > 0)) {
      throw std::invalid_argument("cf_expand: target must be positive");
    }
    const std::size_t cap = static_cast<std::size_t>(2 * p) + extra_terms + 2;
    std::vector<mpz_class> fine = dyadic_quotients(fine_value, cap);
    std::vector<Convergent> fine_convs = convergents_of(fine);
    std::size_t need = needed_terms(fine_convs, q_stop, extra_terms);
    if (need == 0 || fine.size() < need + 1) {
      continue;  // fine expansion terminated early: too close to rational here
    }
    std::vector<mpz_class> coarse = dyadic_quotients(coarse_value, need + 1);
    if (coarse.size() < need + 1 || !std::equal(coarse.begin(), coarse.end(), fine.begin())) {
      continue;
    }
    fine.resize(need);
    fine_convs.resize(need);
    return {std::move(fine_value), std::move(fine), std::move(fine_convs), 2 * p};
  }
  throw PrecisionUnstable("cf_expand: partial quotients disagree up to " +
                          std::to_string(ladder.ceiling) + " bits");
}

std::size_t first_index_beyond(const ContinuedFraction& cf, const mpz_class& M) {
  for (std::size_t i = 0; i < cf.convergents.size(); ++i) {
    if (cf.convergents[i].q > M) return i;
  }
  throw InsufficientExpansion("continued fraction has no denominator above " + M.get_str());
}

mpz_class legendre_bound(const ContinuedFraction& cf, const mpz_class& M) {
  std::size_t N = first_index_beyond(cf, M);
  return *std::max_element(cf.quotients.begin(), cf.quotients.begin() + static_cast<long>(N) + 1);
}

ConvergentMatch is_convergent(const ContinuedFraction& cf, const mpz_class& u, const mpz_class& v) {
  if (v < 1) {
    throw std::invalid_argument("is_convergent: v must be positive");
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
  mpz_class p = u / g;
  mpz_class q = v / g;
  if (cf.convergents.empty() || q > cf.last().q) {
    throw InsufficientExpansion("is_convergent: denominator " + q.get_str() +
                                " beyond the generated convergents");
  }
  for (std::size_t i = 0; i < cf.convergents.size(); ++i) {
    if (cf.convergents[i].p == p && cf.convergents[i].q == q) {
      return {true, i};
    }
  }
  return {};
}

LegendreAudit legendre_audit(const RealTarget& tau, const ContinuedFraction& cf,
                             const mpz_class& M, std::size_t samples, std::uint64_t seed,
                             const PrecisionLadder& ladder) {
  const mpz_class a_max = legendre_bound(cf, M);
  const mpz_class slack = a_max + 2;
  std::vector<mpz_class> denominators;
  for (const Convergent& c : cf.convergents) {
    if (c.q >= 1 && c.q < M) denominators.push_back(c.q);
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(static_cast<unsigned long>(seed));
  const mpz_class span = M - 1;
  for (std::size_t i = 0; i < samples && span >= 1; ++i) {
    denominators.push_back(rng.get_z_range(span) + 1);
  }

  // |tau v - u| needs the bits of v twice over plus working precision.
  const Precision hint = 2 * static_cast<Precision>(mpz_sizeinbase(M.get_mpz_t(), 2)) + 64;
  auto check_all = [&](Precision p) {
    HPReal t = tau(p);
    std::vector<bool> ok;
    ok.reserve(denominators.size());
    for (const mpz_class& v : denominators) {
      HPReal tv = t * v;
      mpz_class u = tv.round_z();
      if (u < 1) u = 1;
      HPReal lhs = abs(tv - HPReal(u, p)) * slack * v;
      ok.push_back(lhs > 1);
    }
    return ok;
  };
  auto same = [](const std::vector<bool>& a, const std::vector<bool>& b, Precision) { return a == b; };
  auto result = evaluate_stable(ladder, hint, check_all, same, "legendre_audit");
  LegendreAudit audit;
  audit.samples = result.value.size();
  audit.failures = static_cast<std::size_t>(std::count(result.value.begin(), result.value.end(), false));
  return audit;
}

}  // namespace lucaspow::approx
