// SPDX-License-Identifier: Apache-2.0
#include "lucaspow/hpreal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace lucaspow {

namespace {

void check_prec(Precision prec) {
  if (prec < kMinPrecision) {
    throw std::invalid_argument("HPReal precision must be at least 64 bits, got " +
                                std::to_string(prec));
  }
}

Precision wider(const HPReal& a, const HPReal& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

HPReal::HPReal(Precision prec) {
  check_prec(prec);
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

HPReal::HPReal(long value, Precision prec) {
  check_prec(prec);
  mpfr_init2(value_, prec);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

HPReal::HPReal(const mpz_class& value, Precision prec) {
  check_prec(prec);
  mpfr_init2(value_, prec);
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

HPReal::HPReal(const mpq_class& value, Precision prec) {
  check_prec(prec);
  mpfr_init2(value_, prec);
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

HPReal HPReal::from_decimal(std::string_view text, Precision prec) {
  HPReal out(prec);
  std::string s(text);
  if (mpfr_set_str(out.value_, s.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: " + s);
  }
  return out;
}

HPReal::HPReal(const HPReal& other) {
  mpfr_init2(value_, other.prec());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

HPReal::HPReal(HPReal&& other) noexcept {
  mpfr_init2(value_, other.prec());
  mpfr_swap(value_, other.value_);
}

HPReal& HPReal::operator=(const HPReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.prec());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

HPReal& HPReal::operator=(HPReal&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
  }
  return *this;
}

HPReal::~HPReal() { mpfr_clear(value_); }

HPReal HPReal::at(Precision prec) const {
  HPReal out(prec);
  mpfr_set(out.value_, value_, MPFR_RNDN);
  return out;
}

double HPReal::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string HPReal::to_string(int digits) const {
  if (digits <= 0) {
    digits = static_cast<int>(std::ceil(static_cast<double>(prec()) * 0.30102999566398)) + 1;
  }
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits - 1, value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

mpz_class HPReal::floor_z() const {
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), value_, MPFR_RNDD);
  return out;
}

mpz_class HPReal::ceil_z() const {
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), value_, MPFR_RNDU);
  return out;
}

mpz_class HPReal::round_z() const {
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), value_, MPFR_RNDN);
  return out;
}

HPReal& HPReal::operator+=(const HPReal& rhs) { return *this = *this + rhs; }
HPReal& HPReal::operator-=(const HPReal& rhs) { return *this = *this - rhs; }
HPReal& HPReal::operator*=(const HPReal& rhs) { return *this = *this * rhs; }
HPReal& HPReal::operator/=(const HPReal& rhs) { return *this = *this / rhs; }

HPReal operator-(const HPReal& x) {
  HPReal out(x.prec());
  mpfr_neg(out.value_, x.value_, MPFR_RNDN);
  return out;
}

HPReal operator+(const HPReal& a, const HPReal& b) {
  HPReal out(wider(a, b));
  mpfr_add(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

HPReal operator-(const HPReal& a, const HPReal& b) {
  HPReal out(wider(a, b));
  mpfr_sub(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

HPReal operator*(const HPReal& a, const HPReal& b) {
  HPReal out(wider(a, b));
  mpfr_mul(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

HPReal operator/(const HPReal& a, const HPReal& b) {
  HPReal out(wider(a, b));
  mpfr_div(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

HPReal operator+(const HPReal& a, long b) {
  HPReal out(a.prec());
  mpfr_add_si(out.value_, a.value_, b, MPFR_RNDN);
  return out;
}

HPReal operator-(const HPReal& a, long b) {
  HPReal out(a.prec());
  mpfr_sub_si(out.value_, a.value_, b, MPFR_RNDN);
  return out;
}

HPReal operator*(const HPReal& a, long b) {
  HPReal out(a.prec());
  mpfr_mul_si(out.value_, a.value_, b, MPFR_RNDN);
  return out;
}

HPReal operator/(const HPReal& a, long b) {
  HPReal out(a.prec());
  mpfr_div_si(out.value_, a.value_, b, MPFR_RNDN);
  return out;
}

HPReal operator*(const HPReal& a, const mpz_class& b) {
  HPReal out(a.prec());
  mpfr_mul_z(out.value_, a.value_, b.get_mpz_t(), MPFR_RNDN);
  return out;
}

HPReal operator/(long a, const HPReal& b) {
  HPReal out(b.prec());
  mpfr_si_div(out.value_, a, b.value_, MPFR_RNDN);
  return out;
}

HPReal log(const HPReal& x) {
  HPReal out(x.prec());
  mpfr_log(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

HPReal log1p(const HPReal& x) {
  HPReal out(x.prec());
  mpfr_log1p(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

HPReal exp(const HPReal& x) {
  HPReal out(x.prec());
  mpfr_exp(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

HPReal sqrt(const HPReal& x) {
  HPReal out(x.prec());
  mpfr_sqrt(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

HPReal abs(const HPReal& x) {
  HPReal out(x.prec());
  mpfr_abs(out.raw(), x.raw(), MPFR_RNDN);
  return out;
}

HPReal pow(const HPReal& x, long e) {
  HPReal out(x.prec());
  mpfr_pow_si(out.raw(), x.raw(), e, MPFR_RNDN);
  return out;
}

HPReal max(const HPReal& a, const HPReal& b) { return a < b ? b : a; }

HPReal log_of(const mpz_class& value, Precision prec) {
  if (value <= 0) {
    throw std::domain_error("log of a non-positive integer");
  }
  // Round the integer at a little extra precision so the log is not
  // dominated by the conversion error.
  HPReal v(value, prec + 32);
  HPReal out(prec);
  mpfr_log(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

HPReal dist_to_nearest_int(const HPReal& x) {
  HPReal nearest(x.prec());
  mpfr_rint(nearest.raw(), x.raw(), MPFR_RNDN);
  return abs(x - nearest);
}

void PrecisionLadder::validate() const {
  if (floor < kMinPrecision) {
    throw std::invalid_argument("precision floor must be at least 64 bits");
  }
  if (2 * floor > ceiling) {
    throw std::invalid_argument("precision ceiling must be at least twice the floor");
  }
}

Precision PrecisionLadder::start_for(Precision hint) const {
  Precision p = floor;
  while (p < hint && 4 * p <= ceiling) {
    p *= 2;
  }
  return p;
}

bool agree(const HPReal& coarse, const HPReal& fine, Precision coarse_prec) {
  if (!coarse.is_finite() || !fine.is_finite()) {
    return false;
  }
  if (fine.is_zero()) {
    return coarse.is_zero();
  }
  Precision work = std::max(coarse.prec(), fine.prec());
  HPReal diff = abs(coarse.at(work) - fine.at(work));
  if (diff.is_zero()) {
    return true;
  }
  // |diff| <= |fine| * 2^(-coarse_prec/2), compared via exponents.
  HPReal scaled = abs(fine).at(work);
  mpfr_div_2si(scaled.raw(), scaled.raw(), coarse_prec / 2, MPFR_RNDN);
  return diff <= scaled;
}

mpz_class parse_big_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) {
    throw std::invalid_argument("empty integer literal");
  }
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size() && s[pos] != 'e' && s[pos] != 'E'; ++pos) {
    char c = s[pos];
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == '_' || c == '\'') {
      continue;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw std::invalid_argument("bad integer literal: " + s);
    }
  }
  if (digits.empty()) {
    throw std::invalid_argument("bad integer literal: " + s);
  }
  long exponent = 0;
  if (pos < s.size()) {
    std::string e = s.substr(pos + 1);
    char* end = nullptr;
    exponent = std::strtol(e.c_str(), &end, 10);
    if (e.empty() || *end != '\0') {
      throw std::invalid_argument("bad exponent in: " + s);
    }
  }
  mpz_class mantissa(digits, 10);
  long shift = exponent - frac_digits;
  mpz_class ten_pow;
  if (shift >= 0) {
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift));
    mantissa *= ten_pow;
  } else {
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
    if (mantissa % ten_pow != 0) {
      throw std::invalid_argument("not an integer: " + s);
    }
    mantissa /= ten_pow;
  }
  return negative ? mpz_class(-mantissa) : mantissa;
}

}  // namespace lucaspow
