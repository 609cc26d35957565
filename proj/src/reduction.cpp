// SPDX-License-Identifier: Apache-2.0
#include "lucaspow/reduction.hpp"

#include <algorithm>

#include "lucaspow/bounds.hpp"

namespace lucaspow::approx {

std::string_view status_name(ReductionStatus s) {
  switch (s) {
    case ReductionStatus::reduced: return "reduced";
    case ReductionStatus::epsilon_nonpositive: return "epsilon-nonpositive";
    case ReductionStatus::precision_unstable: return "precision-unstable";
  }
  return "unknown";
}

namespace {

struct EpsilonEval {
  HPReal eps;
  bool positive = false;
  long w_bound = 0;
};

EpsilonEval epsilon_at(const ReductionInstance& inst, const mpz_class& q, Precision p) {
  HPReal tau = inst.tau(p);
  HPReal mu = inst.mu(p);
  HPReal eps = dist_to_nearest_int(mu * q) - dist_to_nearest_int(tau * q) * inst.M;
  EpsilonEval out{std::move(eps)};
  out.positive = out.eps.sign() > 0;
  if (out.positive) {
    HPReal L = log(inst.A(p) * q / out.eps) / log(inst.B(p));
    out.w_bound = L.ceil_z().get_si() - 1;
  }
  return out;
}

}  // namespace

ReductionOutcome baker_davenport_reduce(const ReductionInstance& inst,
                                        const ReductionOptions& options) {
  const PrecisionLadder& ladder = options.ladder;
  ladder.validate();
  if (inst.M < 1) {
    throw std::invalid_argument("reduction: M must be at least 1");
  }
  if (!(inst.A(ladder.floor) > 0) || !(inst.B(ladder.floor) > 1)) {
    throw std::invalid_argument("reduction: need A > 0 and B > 1");
  }
  if (options.max_attempts < 1) {
    throw std::invalid_argument("reduction: max_attempts must be positive");
  }
  const mpz_class six_m = 6 * inst.M;
  ReductionOutcome outcome;
  try {
    std::size_t extra = std::min<std::size_t>(4, static_cast<std::size_t>(options.max_attempts) - 1);
    std::size_t tried = 0;
    while (outcome.attempts < options.max_attempts) {
      ContinuedFraction cf = cf_expand(inst.tau, six_m, ladder, extra);
      std::size_t start = first_index_beyond(cf, six_m);
      for (std::size_t i = start + tried;
           i < cf.convergents.size() && outcome.attempts < options.max_attempts; ++i, ++tried) {
        const mpz_class& q = cf.convergents[i].q;
        ++outcome.attempts;
        const Precision hint = 2 * static_cast<Precision>(mpz_sizeinbase(q.get_mpz_t(), 2)) + 64;
        auto stable = evaluate_stable(
            ladder, hint, [&](Precision p) { return epsilon_at(inst, q, p); },
            [](const EpsilonEval& a, const EpsilonEval& b, Precision p) {
              return a.positive == b.positive && agree(a.eps, b.eps, p) &&
                     (!a.positive || a.w_bound == b.w_bound);
            },
            "baker_davenport epsilon");
        outcome.q_used = q;
        outcome.epsilon = stable.value.eps;
        outcome.prec = std::max(stable.prec, cf.gen_prec);
        if (stable.value.positive) {
          outcome.status = ReductionStatus::reduced;
          outcome.w_bound = stable.value.w_bound;
          return outcome;
        }
      }
      extra = static_cast<std::size_t>(options.max_attempts);
    }
    outcome.status = ReductionStatus::epsilon_nonpositive;
    outcome.detail = "eps <= 0 for every tried convergent";
  } catch (const PrecisionUnstable& e) {
    outcome.status = ReductionStatus::precision_unstable;
    outcome.w_bound.reset();
    outcome.detail = e.what();
  }
  return outcome;
}

ReductionInstance walax_instance(const lucas::LucasParams& params, long n, const mpz_class& M) {
  if (params.r() < 3 || n < 1) {
    throw std::invalid_argument("walax instance requires r >= 3 and n >= 1");
  }
  const mpz_class u_next = lucas::lucas_u(params, n + 1);
  ReductionInstance inst;
  inst.tau = [params, u_next](Precision p) {
    return log_of(u_next, p) / bounds::sequence_constants(params, p).log_alpha;
  };
  inst.mu = [params](Precision p) {
    auto c = bounds::sequence_constants(params, p);
    return c.log_sqrt_delta / c.log_alpha;
  };
  inst.A = [params](Precision p) {
    return HPReal::from_decimal("2.2", p) / bounds::sequence_constants(params, p).log_alpha;
  };
  inst.B = [params](Precision p) { return HPReal(static_cast<long>(params.r()), p); };
  inst.M = M;
  return inst;
}

ReductionInstance walay_instance(const lucas::LucasParams& params, long x, const mpz_class& M) {
  if (params.r() != 3) {
    throw std::invalid_argument("walay instance is defined for r = 3 only");
  }
  if (x < 3) {
    throw std::invalid_argument("walay instance requires x >= 3");
  }
  ReductionInstance inst;
  inst.tau = [params](Precision p) {
    auto c = bounds::sequence_constants(params, p);
    return c.log_alpha / c.log_sqrt_delta;
  };
  inst.mu = [params, x](Precision p) {
    auto c = bounds::sequence_constants(params, p);
    return log1p(pow(c.alpha, -x)) / c.log_sqrt_delta;
  };
  inst.A = [params](Precision p) {
    return HPReal(6, p) / bounds::sequence_constants(params, p).log_sqrt_delta;
  };
  inst.B = [params](Precision p) { return bounds::sequence_constants(params, p).alpha; };
  inst.M = M;
  return inst;
}

ReductionOutcome reduce_instance_walax(const lucas::LucasParams& params, long n, const mpz_class& M,
                                       const ReductionOptions& options) {
  return baker_davenport_reduce(walax_instance(params, n, M), options);
}

ReductionOutcome reduce_instance_walay(const lucas::LucasParams& params, long x, const mpz_class& M,
                                       const ReductionOptions& options) {
  return baker_davenport_reduce(walay_instance(params, x, M), options);
}

RealTarget wala_target(const lucas::LucasParams& params) {
  return [params](Precision p) {
    auto c = bounds::sequence_constants(params, p);
    return c.log_sqrt_delta / c.log_alpha;
  };
}

}  // namespace lucaspow::approx
