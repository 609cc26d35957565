// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace lucaspow {

using Precision = mpfr_prec_t;

inline constexpr Precision kMinPrecision = 64;

// Raised when a value cannot be pinned down before the precision ceiling.
class PrecisionUnstable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arbitrary-precision real backed by an MPFR variable. Arithmetic rounds to
// nearest; results carry the larger of the operand precisions.
class HPReal {
 public:
  explicit HPReal(Precision prec = kMinPrecision);
  HPReal(long value, Precision prec);
  HPReal(const mpz_class& value, Precision prec);
  HPReal(const mpq_class& value, Precision prec);

  // Exact decimal literal such as "2.2" or "-1.5e3", rounded once.
  static HPReal from_decimal(std::string_view text, Precision prec);

  HPReal(const HPReal& other);
  HPReal(HPReal&& other) noexcept;
  HPReal& operator=(const HPReal& other);
  HPReal& operator=(HPReal&& other) noexcept;
  ~HPReal();

  Precision prec() const { return mpfr_get_prec(value_); }
  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }

  // Copy rounded to a different precision.
  HPReal at(Precision prec) const;

  double to_double() const;
  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }

  // Scientific notation with `digits` significant digits; 0 picks enough
  // digits to represent the full binary precision.
  std::string to_string(int digits = 0) const;

  // floor / ceil / nearest as exact integers. Value must be finite.
  mpz_class floor_z() const;
  mpz_class ceil_z() const;
  mpz_class round_z() const;

  HPReal& operator+=(const HPReal& rhs);
  HPReal& operator-=(const HPReal& rhs);
  HPReal& operator*=(const HPReal& rhs);
  HPReal& operator/=(const HPReal& rhs);

  friend HPReal operator-(const HPReal& x);
  friend HPReal operator+(const HPReal& a, const HPReal& b);
  friend HPReal operator-(const HPReal& a, const HPReal& b);
  friend HPReal operator*(const HPReal& a, const HPReal& b);
  friend HPReal operator/(const HPReal& a, const HPReal& b);
  friend HPReal operator+(const HPReal& a, long b);
  friend HPReal operator-(const HPReal& a, long b);
  friend HPReal operator*(const HPReal& a, long b);
  friend HPReal operator/(const HPReal& a, long b);
  friend HPReal operator*(const HPReal& a, const mpz_class& b);
  friend HPReal operator/(long a, const HPReal& b);

  friend int compare(const HPReal& a, const HPReal& b) { return mpfr_cmp(a.value_, b.value_); }
  friend int compare(const HPReal& a, long b) { return mpfr_cmp_si(a.value_, b); }
  friend int compare(const HPReal& a, const mpz_class& b) {
    return mpfr_cmp_z(a.value_, b.get_mpz_t());
  }

  friend bool operator<(const HPReal& a, const HPReal& b) { return compare(a, b) < 0; }
  friend bool operator>(const HPReal& a, const HPReal& b) { return compare(a, b) > 0; }
  friend bool operator<=(const HPReal& a, const HPReal& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const HPReal& a, const HPReal& b) { return compare(a, b) >= 0; }
  friend bool operator==(const HPReal& a, const HPReal& b) { return compare(a, b) == 0; }
  friend bool operator<(const HPReal& a, long b) { return compare(a, b) < 0; }
  friend bool operator>(const HPReal& a, long b) { return compare(a, b) > 0; }

 private:
  mpfr_t value_;
};

HPReal log(const HPReal& x);
HPReal log1p(const HPReal& x);
HPReal exp(const HPReal& x);
HPReal sqrt(const HPReal& x);
HPReal abs(const HPReal& x);
HPReal pow(const HPReal& x, long e);
HPReal max(const HPReal& a, const HPReal& b);

// log of an exact positive integer at the given precision.
HPReal log_of(const mpz_class& value, Precision prec);

// ||x||: distance from x to the nearest integer.
HPReal dist_to_nearest_int(const HPReal& x);

// Precision ladder for the two-precision agreement protocol: a value is
// computed at p and 2p, starting from `floor` and doubling until the two
// agree or 2p would exceed `ceiling`.
struct PrecisionLadder {
  Precision floor = 192;
  Precision ceiling = 12288;

  void validate() const;
  // Smallest rung floor * 2^k that is at least `hint`, capped so that a
  // doubled rung still fits under the ceiling.
  Precision start_for(Precision hint) const;
};

// True when `coarse` (computed at `coarse_prec`) and `fine` share at least
// coarse_prec / 2 leading bits.
bool agree(const HPReal& coarse, const HPReal& fine, Precision coarse_prec);

template <class T>
struct Stable {
  T value;
  Precision prec;  // the finer of the two precisions that agreed
};

// Runs `eval(prec)` under the two-precision protocol. `same(coarse, fine, p)`
// decides whether the two results agree. Throws PrecisionUnstable once the
// ceiling is reached without agreement.
template <class Eval, class Same>
auto evaluate_stable(const PrecisionLadder& ladder, Precision hint, Eval&& eval, Same&& same,
                     std::string_view what) -> Stable<decltype(eval(Precision{}))> {
  ladder.validate();
  for (Precision p = ladder.start_for(hint); 2 * p <= ladder.ceiling; p *= 2) {
    auto coarse = eval(p);
    auto fine = eval(2 * p);
    if (same(coarse, fine, p)) {
      return {std::move(fine), 2 * p};
    }
  }
  throw PrecisionUnstable(std::string(what) + ": no agreement up to " +
                          std::to_string(ladder.ceiling) + " bits");
}

// Convenience form for a single real value compared with `agree`.
template <class Eval>
Stable<HPReal> evaluate_stable(const PrecisionLadder& ladder, Precision hint, Eval&& eval,
                               std::string_view what) {
  return evaluate_stable(
      ladder, hint, std::forward<Eval>(eval),
      [](const HPReal& a, const HPReal& b, Precision p) { return agree(a, b, p); }, what);
}

// Exact integer from decimal / scientific text ("3e17", "2.5e14", "1000").
// Throws std::invalid_argument if the value is not an integer.
mpz_class parse_big_integer(std::string_view text);

}  // namespace lucaspow
