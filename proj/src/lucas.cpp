// SPDX-License-Identifier: Apache-2.0
#include "lucaspow/lucas.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lucaspow::lucas {

LucasParams::LucasParams(unsigned long r) : r_(r) {
  if (r < 1) {
    throw std::invalid_argument("Lucas parameter r must be at least 1");
  }
  delta_ = mpz_class(r) * r + 4;
}

namespace {

int highest_bit(unsigned long n) { return n == 0 ? -1 : 63 - __builtin_clzl(n); }

// Fast doubling on the state (U_k, U_{k+1}). V_k = 2 U_{k+1} - r U_k gives
//   U_{2k}   = U_k V_k
//   U_{2k+1} = U_k^2 + U_{k+1}^2
// which needs no division, so it works for any modulus.
template <class Reduce>
std::pair<mpz_class, mpz_class> doubling_walk(unsigned long r, unsigned long n, Reduce reduce) {
  mpz_class a = 0;  // U_k
  mpz_class b = 1;  // U_{k+1}
  mpz_class v, even, odd;
  for (int bit = highest_bit(n); bit >= 0; --bit) {
    v = 2 * b - r * a;
    even = a * v;
    odd = a * a + b * b;
    reduce(even);
    reduce(odd);
    if ((n >> bit) & 1UL) {
      a = odd;
      b = r * odd + even;
      reduce(b);
    } else {
      a = even;
      b = odd;
    }
  }
  return {a, b};
}

}  // namespace

std::pair<mpz_class, mpz_class> lucas_u_pair(const LucasParams& params, unsigned long n) {
  return doubling_walk(params.r(), n, [](mpz_class&) {});
}

mpz_class lucas_u(const LucasParams& params, SeqIndex n) {
  if (n >= 0) {
    return lucas_u_pair(params, static_cast<unsigned long>(n)).first;
  }
  // U_{-k} = (-1)^(k-1) U_k
  unsigned long k = static_cast<unsigned long>(-n);
  mpz_class u = lucas_u_pair(params, k).first;
  return (k % 2 == 1) ? u : mpz_class(-u);
}

mpz_class lucas_v(const LucasParams& params, SeqIndex n) {
  unsigned long k = static_cast<unsigned long>(n >= 0 ? n : -n);
  auto [u, u1] = lucas_u_pair(params, k);
  mpz_class v = 2 * u1 - params.r() * u;
  // V_{-k} = (-1)^k V_k
  if (n < 0 && k % 2 == 1) {
    v = -v;
  }
  return v;
}

std::pair<mpz_class, mpz_class> lucas_u_pair_mod(const LucasParams& params, unsigned long n,
                                                 const mpz_class& modulus) {
  if (modulus < 2) {
    throw std::invalid_argument("modulus must be at least 2");
  }
  auto reduce = [&modulus](mpz_class& x) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t()); };
  auto out = doubling_walk(params.r(), n, reduce);
  reduce(out.first);
  reduce(out.second);
  return out;
}

mpz_class lucas_u_mod(const LucasParams& params, unsigned long n, const mpz_class& modulus) {
  return lucas_u_pair_mod(params, n, modulus).first;
}

Polynomial lucas_poly_coefficients(unsigned long n) {
  Polynomial poly;
  if (n == 0) {
    return poly;
  }
  for (unsigned long k = (n % 2 == 0) ? 1 : 0; k <= n; k += 2) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), (n + k - 1) / 2, k);
    if (c != 0) {
      poly.emplace(k, c);
    }
  }
  return poly;
}

mpz_class evaluate(const Polynomial& poly, const mpz_class& r) {
  mpz_class acc = 0;
  unsigned long deg = poly.empty() ? 0 : poly.rbegin()->first;
  // Horner from the top degree down.
  for (unsigned long k = deg + 1; k-- > 0;) {
    acc *= r;
    if (auto it = poly.find(k); it != poly.end()) {
      acc += it->second;
    }
  }
  return acc;
}

namespace {

std::vector<unsigned long> divisors_of(unsigned long n) {
  std::vector<std::pair<unsigned long, int>> factors;
  unsigned long m = n;
  for (unsigned long d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      int e = 0;
      while (m % d == 0) {
        m /= d;
        ++e;
      }
      factors.emplace_back(d, e);
    }
  }
  if (m > 1) {
    factors.emplace_back(m, 1);
  }
  std::vector<unsigned long> divs{1};
  for (auto [p, e] : factors) {
    std::size_t base = divs.size();
    unsigned long pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) {
        divs.push_back(divs[j] * pk);
      }
    }
  }
  return divs;
}

}  // namespace

unsigned long index_of_appearance(const LucasParams& params, unsigned long p,
                                  unsigned long trial_bound) {
  if (p < 2) {
    throw std::invalid_argument("index_of_appearance needs a prime p >= 2");
  }
  for (unsigned long d = 2; d * d <= p && d <= trial_bound; ++d) {
    if (p % d == 0) {
      throw std::invalid_argument("index_of_appearance: " + std::to_string(p) + " is composite");
    }
  }
  // z(p) divides p - (delta | p), or equals p when p | delta; every candidate
  // is therefore a divisor of p - 1, p or p + 1.
  std::vector<unsigned long> candidates;
  for (unsigned long base : {p - 1, p, p + 1}) {
    if (base == 0) continue;
    auto divs = divisors_of(base);
    candidates.insert(candidates.end(), divs.begin(), divs.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  mpz_class modulus(p);
  for (unsigned long k : candidates) {
    if (lucas_u_mod(params, k, modulus) == 0) {
      return k;
    }
  }
  throw SearchExhausted("no index of appearance for p = " + std::to_string(p) +
                        " within p + 1 terms");
}

std::string_view identity_name(Identity id) {
  switch (id) {
    case Identity::consecutive_squares: return "consecutive_squares";
    case Identity::doubling: return "doubling";
    case Identity::cassini: return "cassini";
    case Identity::pell: return "pell";
    case Identity::addition: return "addition";
    case Identity::gcd: return "gcd";
    case Identity::odd_minus_one: return "odd_minus_one";
    case Identity::r_divisibility: return "r_divisibility";
    case Identity::growth_bounds: return "growth_bounds";
    case Identity::ratio_bound: return "ratio_bound";
  }
  return "unknown";
}

namespace {

// Dense table of U_k and V_k for k in [lo, hi].
class Table {
 public:
  Table(const LucasParams& params, SeqIndex lo, SeqIndex hi) : lo_(lo) {
    u_.reserve(static_cast<std::size_t>(hi - lo + 1));
    v_.reserve(u_.capacity());
    for (SeqIndex k = lo; k <= hi; ++k) {
      u_.push_back(lucas_u(params, k));
      v_.push_back(lucas_v(params, k));
    }
  }
  const mpz_class& u(SeqIndex k) const { return u_.at(static_cast<std::size_t>(k - lo_)); }
  const mpz_class& v(SeqIndex k) const { return v_.at(static_cast<std::size_t>(k - lo_)); }

 private:
  SeqIndex lo_;
  std::vector<mpz_class> u_, v_;
};

SeqIndex floor_mod(SeqIndex a, SeqIndex m) { return ((a % m) + m) % m; }

// Outward-rounded enclosure of alpha^e.
struct Enclosure {
  HPReal lo, hi;
};

Enclosure alpha_power(const LucasParams& params, SeqIndex e, Precision prec) {
  HPReal delta(params.delta(), prec);
  HPReal a_lo(prec), a_hi(prec);
  mpfr_sqrt(a_lo.raw(), delta.raw(), MPFR_RNDD);
  mpfr_sqrt(a_hi.raw(), delta.raw(), MPFR_RNDU);
  mpfr_add_ui(a_lo.raw(), a_lo.raw(), params.r(), MPFR_RNDD);
  mpfr_add_ui(a_hi.raw(), a_hi.raw(), params.r(), MPFR_RNDU);
  mpfr_div_2ui(a_lo.raw(), a_lo.raw(), 1, MPFR_RNDD);
  mpfr_div_2ui(a_hi.raw(), a_hi.raw(), 1, MPFR_RNDU);
  Enclosure out{HPReal(prec), HPReal(prec)};
  // alpha > 1: positive powers are increasing in the base, negative ones
  // decreasing.
  if (e >= 0) {
    mpfr_pow_si(out.lo.raw(), a_lo.raw(), e, MPFR_RNDD);
    mpfr_pow_si(out.hi.raw(), a_hi.raw(), e, MPFR_RNDU);
  } else {
    mpfr_pow_si(out.lo.raw(), a_hi.raw(), e, MPFR_RNDD);
    mpfr_pow_si(out.hi.raw(), a_lo.raw(), e, MPFR_RNDU);
  }
  return out;
}

enum class Verdict { holds, fails, undecided };

// alpha^(n-2) <= U_n <= alpha^(n-1)
Verdict growth_verdict(const LucasParams& params, SeqIndex n, const mpz_class& un,
                       Precision prec) {
  Enclosure lower = alpha_power(params, n - 2, prec);
  Enclosure upper = alpha_power(params, n - 1, prec);
  if (compare(lower.lo, un) > 0 || compare(upper.hi, un) < 0) {
    return Verdict::fails;
  }
  if (compare(lower.hi, un) <= 0 && compare(upper.lo, un) >= 0) {
    return Verdict::holds;
  }
  return Verdict::undecided;
}

template <class... Args>
std::string describe(const Args&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace

std::vector<IdentityViolation> identity_suite(const LucasParams& params, SeqIndex n_lo,
                                              SeqIndex n_hi, const PrecisionLadder& ladder) {
  if (n_lo > n_hi) {
    throw std::invalid_argument("identity_suite: empty index window");
  }
  ladder.validate();
  const unsigned long r = params.r();
  const SeqIndex lo = std::min(2 * n_lo, n_lo);
  const SeqIndex hi = std::max(2 * n_hi + 2, n_hi + 2);
  Table t(params, lo, hi);
  std::vector<IdentityViolation> out;
  auto flag = [&out](Identity id, SeqIndex i, SeqIndex j, std::string detail) {
    out.push_back({id, i, j, std::move(detail)});
  };

  for (SeqIndex n = n_lo; n <= n_hi; ++n) {
    const mpz_class& un = t.u(n);
    const mpz_class& vn = t.v(n);
    const mpz_class sign = (n % 2 == 0) ? 1 : -1;

    if (t.u(n) * t.u(n) + t.u(n + 1) * t.u(n + 1) != t.u(2 * n + 1)) {
      flag(Identity::consecutive_squares, n, n, "U_n^2 + U_{n+1}^2 != U_{2n+1}");
    }
    if (t.u(2 * n) != un * vn) {
      flag(Identity::doubling, n, n, "U_{2n} != U_n V_n");
    }
    if (t.u(n + 1) * t.u(n + 1) - un * t.u(n + 2) != sign) {
      flag(Identity::cassini, n, n, "U_{n+1}^2 - U_n U_{n+2} != (-1)^n");
    }
    if (vn * vn - params.delta() * un * un != 4 * sign) {
      flag(Identity::pell, n, n, "V_n^2 - delta U_n^2 != 4(-1)^n");
    }
    if (n % 2 != 0) {
      mpz_class rhs = floor_mod(n, 4) == 1 ? t.u((n - 1) / 2) * t.v((n + 1) / 2)
                                           : t.u((n + 1) / 2) * t.v((n - 1) / 2);
      if (un - 1 != rhs) {
        flag(Identity::odd_minus_one, n, n, "U_n - 1 != U*V factorisation");
      }
    }
    mpz_class residue = (n % 2 == 0) ? un : mpz_class(un - 1);
    if (mpz_divisible_ui_p(residue.get_mpz_t(), r) == 0) {
      flag(Identity::r_divisibility, n, n, describe("r does not divide U_n", n % 2 ? " - 1" : ""));
    }
    if (n >= 2 && !(r * un < t.u(n + 1))) {
      flag(Identity::ratio_bound, n, n, "U_n / U_{n+1} >= 1/r");
    }
    if (n >= 1) {
      Verdict verdict = Verdict::undecided;
      for (Precision p = ladder.floor; p <= ladder.ceiling && verdict == Verdict::undecided; p *= 2) {
        verdict = growth_verdict(params, n, un, p);
      }
      if (verdict != Verdict::holds) {
        flag(Identity::growth_bounds, n, n,
             verdict == Verdict::fails ? "alpha^(n-2) <= U_n <= alpha^(n-1) violated"
                                       : "growth bounds undecided at precision ceiling");
      }
    }
  }

  for (SeqIndex m = n_lo; m <= n_hi; ++m) {
    for (SeqIndex n = n_lo; n <= n_hi; ++n) {
      if (2 * t.u(m + n) != t.u(m) * t.v(n) + t.u(n) * t.v(m)) {
        flag(Identity::addition, m, n, "2U_{m+n} != U_m V_n + U_n V_m");
      }
      if (m >= 0 && n >= 0) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), t.u(m).get_mpz_t(), t.u(n).get_mpz_t());
        if (g != t.u(std::gcd(m, n))) {
          flag(Identity::gcd, m, n, "gcd(U_m, U_n) != U_gcd(m,n)");
        }
      }
    }
  }
  return out;
}

}  // namespace lucaspow::lucas
