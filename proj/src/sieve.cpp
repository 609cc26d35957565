// SPDX-License-Identifier: Apache-2.0
#include "lucaspow/sieve.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <string>
#include <utility>

#include "lucaspow/bounds.hpp"

namespace lucaspow::sieve {

namespace {

using Factorization = std::vector<std::pair<unsigned long, unsigned>>;

Factorization factorize(unsigned long v) {
  Factorization out;
  for (unsigned long p = 2; p * p <= v; p += (p == 2 ? 1 : 2)) {
    if (v % p != 0) continue;
    unsigned k = 0;
    while (v % p == 0) {
      v /= p;
      ++k;
    }
    out.emplace_back(p, k);
  }
  if (v > 1) out.emplace_back(v, 1);
  return out;
}

// All d with d^e | v, for v >= 1.
std::vector<unsigned long> root_divisors(unsigned long v, unsigned e) {
  std::vector<unsigned long> out{1};
  for (const auto& [p, k] : factorize(v)) {
    const std::size_t width = out.size();
    unsigned long pk = 1;
    for (unsigned i = 1; i <= k / e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < width; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

unsigned long as_ulong(const mpz_class& v, const char* what) {
  if (!v.fits_ulong_p()) {
    throw std::overflow_error(std::string(what) + ": " + v.get_str() + " exceeds 64 bits");
  }
  return v.get_ui();
}

mpz_class binom(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace

std::vector<N1Solution> search_n1(unsigned long m_max, unsigned long x_max) {
  std::vector<N1Solution> out;
  for (unsigned long m = 1; m <= m_max; ++m) {
    const lucas::Polynomial um = lucas::lucas_poly_coefficients(m);
    for (unsigned long x = 1; x <= x_max; ++x) {
      lucas::Polynomial P = um;
      P[0] -= 1;
      P[x] -= 1;
      std::erase_if(P, [](const auto& kv) { return kv.second == 0; });
      N1Solution sol;
      sol.m = m;
      sol.x = x;
      if (P.empty()) {
        sol.identical = true;
        out.push_back(sol);
        continue;
      }
      // r >= 3 is a unit-free root of P / r^k0, so it divides the constant term.
      mpz_class c = abs(P.begin()->second);
      for (unsigned long r : root_divisors(as_ulong(c, "search_n1"), 1)) {
        if (r >= 3 && lucas::evaluate(P, r) == 0) sol.roots.push_back(r);
      }
      if (!sol.roots.empty()) out.push_back(sol);
    }
  }
  return out;
}

DivisorConstraint candidate_r_divisor(long n, long x, long m) {
  if (n < 2 || x < 3 || m < 1 || m % 2 == 0) {
    throw std::invalid_argument("candidate_r_divisor: need n >= 2, x >= 3 and odd m >= 1");
  }
  const unsigned long h = static_cast<unsigned long>(n % 2 == 0 ? (n + 2) / 2 : (n + 1) / 2);
  DivisorConstraint out;
  out.D = binom(static_cast<unsigned long>((m + 1) / 2), 2) - x * binom(h, 2);
  out.e = static_cast<int>(std::min<long>(x, 4) - 2);
  if (out.D == 0) {
    out.all_r = true;
    return out;
  }
  for (unsigned long r :
       root_divisors(as_ulong(abs(out.D), "candidate_r_divisor"), static_cast<unsigned>(out.e))) {
    if (r >= 3) out.r_values.push_back(r);
  }
  return out;
}

std::optional<long> direct_verify(const LucasParams& params, long n, long x) {
  if (n < 0 || x < 1) {
    throw std::invalid_argument("direct_verify: need n >= 0 and x >= 1");
  }
  auto [un, un1] = lucas::lucas_u_pair(params, static_cast<unsigned long>(n));
  mpz_class S, t;
  mpz_pow_ui(S.get_mpz_t(), un.get_mpz_t(), static_cast<unsigned long>(x));
  mpz_pow_ui(t.get_mpz_t(), un1.get_mpz_t(), static_cast<unsigned long>(x));
  S += t;
  // U is non-decreasing for m >= 1 (strictly from m = 2 on), so the first m
  // with U_m >= S is the only candidate worth checking. S >= 1 = U_1.
  long lo = 1, hi = 1;
  while (lucas::lucas_u(params, hi) < S) {
    lo = hi + 1;
    hi *= 2;
  }
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (lucas::lucas_u(params, mid) < S) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lucas::lucas_u(params, lo) == S) return lo;
  return std::nullopt;
}

void SieveTile::validate() const {
  if (n_range.empty() || x_range.empty()) throw std::invalid_argument("sieve tile: empty range");
  if (n_range.lo < 2) throw std::invalid_argument("sieve tile: n must be >= 2");
  if (x_range.lo < 3) throw std::invalid_argument("sieve tile: x must be >= 3");
  if (prime_count < 1) throw std::invalid_argument("sieve tile: prime_count must be >= 1");
  if (r_max_fallback < 3) throw std::invalid_argument("sieve tile: r_max_fallback must be >= 3");
}

mpz_class primorial_product(unsigned prime_count) {
  mpz_class T = 1, p = 1;
  for (unsigned i = 0; i < prime_count; ++i) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    T *= p;
  }
  return T;
}

std::vector<Quadruple> SieveReport::falsifications() const {
  std::vector<Quadruple> out;
  for (const TileResult& t : tiles) {
    for (const Survivor& s : t.survivors) {
      if (s.exact && s.at.x != 2) out.push_back(s.at);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool SieveReport::controls_passed() const {
  return std::all_of(tiles.begin(), tiles.end(), [](const TileResult& t) { return t.controls_passed; });
}

bool SieveReport::partially_verified() const {
  return std::any_of(tiles.begin(), tiles.end(),
                     [](const TileResult& t) { return t.partially_verified; });
}

namespace {

class ModTChecker {
 public:
  explicit ModTChecker(mpz_class T) : T_(std::move(T)) {}

  // U_n^x + U_{n+1}^x == U_m (mod T)
  bool passes(unsigned long r, long n, long x, long m) {
    const auto& [un, un1] = pair_for(r, n);
    mpz_class a, b;
    const mpz_class e = x;
    mpz_powm(a.get_mpz_t(), un.get_mpz_t(), e.get_mpz_t(), T_.get_mpz_t());
    mpz_powm(b.get_mpz_t(), un1.get_mpz_t(), e.get_mpz_t(), T_.get_mpz_t());
    a += b;
    if (a >= T_) a -= T_;
    return a == lucas::lucas_u_mod(LucasParams(r), static_cast<unsigned long>(m), T_);
  }

  void reset() { pairs_.clear(); }

 private:
  const std::pair<mpz_class, mpz_class>& pair_for(unsigned long r, long n) {
    auto key = std::make_pair(r, n);
    auto it = pairs_.find(key);
    if (it == pairs_.end()) {
      it = pairs_.emplace(key, lucas::lucas_u_pair_mod(LucasParams(r), static_cast<unsigned long>(n), T_))
               .first;
    }
    return it->second;
  }

  mpz_class T_;
  std::map<std::pair<unsigned long, long>, std::pair<mpz_class, mpz_class>> pairs_;
};

}  // namespace

SieveReport modular_sieve(const SieveTile& tile, bool include_x2_control) {
  tile.validate();
  const auto start = std::chrono::steady_clock::now();
  ModTChecker check(primorial_product(tile.prime_count));
  TileResult res;
  res.n_range = tile.n_range;
  res.x_range = tile.x_range;

  auto test = [&](unsigned long r, long n, long x, long m) {
    ++res.candidates_generated;
    if (!check.passes(r, n, x, m)) {
      ++res.candidates_eliminated_mod_T;
      return;
    }
    auto exact_m = direct_verify(LucasParams(r), n, x);
    res.survivors.push_back({{r, n, x, m}, exact_m && *exact_m == m});
  };
  auto test_range = [&](long n, long x, long m) {
    for (unsigned long r = 3; r <= tile.r_max_fallback; ++r) test(r, n, x, m);
  };

  for (long n = tile.n_range.lo; n <= tile.n_range.hi; ++n) {
    check.reset();
    for (long x = tile.x_range.lo; x <= tile.x_range.hi; ++x) {
      const bounds::IntInterval window = bounds::m_window(n, x);
      for (long m = window.lo; m <= window.hi; ++m) {
        if (m % 2 == 0) {
          if (tile.all_m) test_range(n, x, m);
          continue;
        }
        DivisorConstraint c = candidate_r_divisor(n, x, m);
        if (c.all_r) {
          res.partially_verified = true;
          ++res.degenerate_triples;
          test_range(n, x, m);
          continue;
        }
        for (unsigned long r : c.r_values) test(r, n, x, m);
      }
    }
    if (include_x2_control) {
      for (unsigned long r = 3; r <= kControlRMax; ++r) {
        ++res.controls_run;
        if (!check.passes(r, n, 2, 2 * n + 1)) ++res.controls_failed;
      }
    }
  }
  res.controls_passed = res.controls_failed == 0;
  std::sort(res.survivors.begin(), res.survivors.end(),
            [](const Survivor& a, const Survivor& b) { return a.at < b.at; });
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  SieveReport report;
  report.tiles.push_back(std::move(res));
  return report;
}

std::optional<unsigned long> minimal_power_s(const LucasParams& params, long n, long m,
                                             unsigned long s_max) {
  if (m < 1 || n < 0 || s_max < 1) {
    throw std::invalid_argument("minimal_power_s: need m >= 1, n >= 0, s_max >= 1");
  }
  const mpz_class um = lucas::lucas_u(params, m);
  auto [un, un1] = lucas::lucas_u_pair(params, static_cast<unsigned long>(n));
  const mpz_class a = un1 % um;
  const mpz_class b = un % um;
  mpz_class pa = a, pb = b;
  for (unsigned long s = 1; s <= s_max; ++s) {
    if ((pa - pb) % um == 0) return s;
    pa = (pa * a) % um;
    pb = (pb * b) % um;
  }
  return std::nullopt;
}

bool minimal_s_bound_holds(long m, unsigned long s) {
  if (s == 1 || s == 2 || s == 4) return true;
  return mpz_class(m) < 20000 * mpz_class(s) * mpz_class(s);
}

}  // namespace lucaspow::sieve
