// SPDX-License-Identifier: Apache-2.0
#include <set>
#include <vector>

#include "doctest.h"
#include "lucaspow/bounds.hpp"
#include "lucaspow/lucas.hpp"
#include "lucaspow/sieve.hpp"

using namespace lucaspow;
using namespace lucaspow::lucas;

namespace {

// Oracle: U_0 .. U_count by the forward recurrence.
std::vector<mpz_class> naive_u(unsigned long r, std::size_t count) {
  std::vector<mpz_class> u{0, 1};
  while (u.size() <= count) u.push_back(r * u[u.size() - 1] + u[u.size() - 2]);
  return u;
}

std::vector<mpz_class> naive_v(unsigned long r, std::size_t count) {
  std::vector<mpz_class> v{2, static_cast<long>(r)};
  while (v.size() <= count) v.push_back(r * v[v.size() - 1] + v[v.size() - 2]);
  return v;
}

// Oracle: U_0, U_-1, ..., U_-count by running the recurrence backwards,
// U_k = U_{k+2} - r U_{k+1}.
std::vector<mpz_class> backward_u(unsigned long r, std::size_t count) {
  std::vector<mpz_class> out{0};
  mpz_class hi = 1, lo = 0;  // U_1, U_0
  for (std::size_t k = 1; k <= count; ++k) {
    mpz_class next = hi - r * lo;
    hi = lo;
    lo = next;
    out.push_back(lo);
  }
  return out;
}

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("lucas_core") {

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(LucasParams(0), std::invalid_argument);
  LucasParams p(7);
  CHECK(p.r() == 7);
  CHECK(p.delta() == 53);
}

TEST_CASE("named sequences") {
  LucasParams fib(1), pell(2), three(3);
  const long fib_expect[] = {0, 1, 1, 2, 3, 5};
  for (long n = 0; n <= 5; ++n) CHECK(lucas_u(fib, n) == fib_expect[n]);
  const long pell_expect[] = {0, 1, 2, 5, 12};
  for (long n = 0; n <= 4; ++n) CHECK(lucas_u(pell, n) == pell_expect[n]);
  const long v3[] = {2, 3, 11, 36, 119};
  for (long n = 0; n <= 4; ++n) CHECK(lucas_v(three, n) == v3[n]);
  CHECK(lucas_u(three, -2) == -3);
  CHECK(lucas_v(three, -1) == -3);
  CHECK(lucas_v(LucasParams(11), 0) == 2);
}

TEST_CASE("fast doubling matches the recurrence") {
  for (unsigned long r = 1; r <= 40; ++r) {
    LucasParams params(r);
    auto u = naive_u(r, 300);
    auto v = naive_v(r, 300);
    for (long n = 0; n <= 300; n += (n < 40 ? 1 : 7)) {
      CHECK(lucas_u(params, n) == u[static_cast<std::size_t>(n)]);
      CHECK(lucas_v(params, n) == v[static_cast<std::size_t>(n)]);
      auto pair = lucas_u_pair(params, static_cast<unsigned long>(n));
      CHECK(pair.first == u[static_cast<std::size_t>(n)]);
      CHECK(pair.second == u[static_cast<std::size_t>(n) + 1]);
    }
  }
}

TEST_CASE("negative indices against the backward recurrence") {
  for (unsigned long r = 1; r <= 12; ++r) {
    LucasParams params(r);
    auto back = backward_u(r, 60);
    auto v = naive_v(r, 60);
    for (long k = 0; k <= 60; ++k) {
      CHECK(lucas_u(params, -k) == back[static_cast<std::size_t>(k)]);
      // V_-k = (-1)^k V_k
      mpz_class expect = (k % 2 == 0) ? v[static_cast<std::size_t>(k)] : mpz_class(-v[static_cast<std::size_t>(k)]);
      CHECK(lucas_v(params, -k) == expect);
    }
  }
}

TEST_CASE("modular evaluation") {
  CHECK(lucas_u_mod(LucasParams(3), 10, 7) == 4);
  CHECK(lucas_u_mod(LucasParams(5), 0, 97) == 0);
  CHECK_THROWS_AS(lucas_u_mod(LucasParams(3), 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(lucas_u_mod(LucasParams(3), 5, 0), std::invalid_argument);

  const mpz_class T = sieve::primorial_product(20);
  const std::vector<mpz_class> moduli{2, 4, 7, 97, 1'000'000, T};
  for (unsigned long r = 1; r <= 20; ++r) {
    LucasParams params(r);
    auto u = naive_u(r, 1001);
    for (const mpz_class& m : moduli) {
      for (unsigned long n = 0; n <= 1000; n += (n < 50 ? 1 : 37)) {
        mpz_class expect = u[n] % m;
        CHECK(lucas_u_mod(params, n, m) == expect);
        auto pair = lucas_u_pair_mod(params, n, m);
        CHECK(pair.first == expect);
        CHECK(pair.second == u[n + 1] % m);
      }
    }
  }
  LucasParams three(3);
  CHECK(lucas_u_mod(three, 500, T) == lucas_u(three, 500) % T);
}

TEST_CASE("polynomial coefficients") {
  auto p1 = lucas_poly_coefficients(1);
  CHECK(p1.size() == 1);
  CHECK(p1.at(0) == 1);
  auto p4 = lucas_poly_coefficients(4);
  CHECK(p4.size() == 2);
  CHECK(p4.at(1) == 2);
  CHECK(p4.at(3) == 1);
  CHECK(evaluate(lucas_poly_coefficients(6), 3) == 360);
  CHECK(lucas_poly_coefficients(0).empty());
  for (unsigned long n = 0; n <= 80; ++n) {
    auto poly = lucas_poly_coefficients(n);
    for (const auto& [k, c] : poly) {
      CHECK((k + n) % 2 == 1);
      CHECK(c > 0);
    }
    for (unsigned long r = 1; r <= 10; ++r) {
      CHECK(evaluate(poly, r) == lucas_u(LucasParams(r), static_cast<long>(n)));
    }
  }
}

TEST_CASE("index of appearance") {
  CHECK(index_of_appearance(LucasParams(3), 2) == 3);
  CHECK(index_of_appearance(LucasParams(3), 13) == 13);
  CHECK(index_of_appearance(LucasParams(1), 5) == 5);
  CHECK_THROWS_AS(index_of_appearance(LucasParams(3), 15), std::invalid_argument);
  CHECK_THROWS_AS(index_of_appearance(LucasParams(3), 1), std::invalid_argument);

  for (unsigned long r = 1; r <= 20; ++r) {
    LucasParams params(r);
    for (unsigned long p = 2; p < 400; ++p) {
      if (!is_prime(p)) continue;
      // brute force from the recurrence mod p
      unsigned long a = 0, b = 1, k = 1;
      while (b % p != 0) {
        unsigned long next = (r * b + a) % p;
        a = b;
        b = next;
        ++k;
      }
      const unsigned long z = index_of_appearance(params, p);
      CHECK(z == k);
      if (params.delta() % p == 0) CHECK(z == p);
      // p | U_l iff z | l
      for (unsigned long l = 1; l <= 3 * z; ++l) {
        CHECK((lucas_u_mod(params, l, p) == 0) == (l % z == 0));
      }
    }
  }
}

TEST_CASE("Binet consistency at 256 bits") {
  const Precision prec = 256;
  for (unsigned long r = 1; r <= 10; ++r) {
    LucasParams params(r);
    auto c = bounds::sequence_constants(params, prec);
    HPReal beta = HPReal(static_cast<long>(r), prec) - c.alpha;
    for (long n = 1; n <= 200; ++n) {
      HPReal binet = (pow(c.alpha, n) - pow(beta, n)) / c.sqrt_delta;
      HPReal exact(lucas_u(params, n), prec);
      HPReal tol = exact * pow(HPReal(2L, prec), -(prec / 2));
      CHECK(abs(binet - exact) < tol);
    }
  }
}

TEST_CASE("gcd and divisibility properties") {
  for (unsigned long r = 1; r <= 10; ++r) {
    LucasParams params(r);
    auto u = naive_u(r, 60);
    for (std::size_t n = 1; n <= 60; ++n) {
      for (std::size_t m = 1; m <= 60; ++m) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), u[n].get_mpz_t(), u[m].get_mpz_t());
        mpz_class d;
        mpz_gcd_ui(d.get_mpz_t(), mpz_class(static_cast<unsigned long>(n)).get_mpz_t(), m);
        CHECK(g == u[d.get_ui()]);
      }
    }
  }
}

TEST_CASE("identity suite is clean on theorems") {
  for (unsigned long r : {1UL, 2UL, 3UL, 5UL, 17UL}) {
    auto v = identity_suite(LucasParams(r), -10, 30);
    CHECK(v.empty());
  }
  // r = 3, the x = 2 family at n = 2 and Pell at r = 4, n = 2
  CHECK(lucas_u(LucasParams(3), 2) * lucas_u(LucasParams(3), 2) +
            lucas_u(LucasParams(3), 3) * lucas_u(LucasParams(3), 3) ==
        109);
  CHECK(lucas_u(LucasParams(3), 5) == 109);
  LucasParams four(4);
  CHECK(lucas_v(four, 2) * lucas_v(four, 2) - four.delta() * lucas_u(four, 2) * lucas_u(four, 2) == 4);
  CHECK_THROWS_AS(identity_suite(LucasParams(3), 5, 4), std::invalid_argument);
}

TEST_CASE("identity names are distinct") {
  std::set<std::string_view> names;
  for (Identity id : {Identity::consecutive_squares, Identity::doubling, Identity::cassini,
                      Identity::pell, Identity::addition, Identity::gcd, Identity::odd_minus_one,
                      Identity::r_divisibility, Identity::growth_bounds, Identity::ratio_bound}) {
    names.insert(identity_name(id));
  }
  CHECK(names.size() == 10);
}

}  // TEST_SUITE
