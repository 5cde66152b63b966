#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace harperlab {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Natural log of |x| from the binary exponent plus the leading limbs.
/// Never converts x itself to a double, so it works far past 1e308.
double log_abs(const BigInt& x);
double log_abs(const Rational& x);

/// Fractional part in [0, 1).
Rational frac(const Rational& x);

/// Distance to the nearest integer, exact.
Rational torus_norm(const Rational& x);

/// Exact binary value of a double.
Rational exact_rational(double x);

/// Exact value of a decimal literal such as "0.135", "-2.5e-3" or "1/3".
Rational parse_rational(std::string_view text);

/// Number of decimal places written in a decimal literal (0 for fractions).
int decimal_places(std::string_view text);

std::string to_decimal_string(const BigInt& x);

/// Minimal RAII holder for an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits);
  BigFloat(const BigFloat& other);
  BigFloat& operator=(const BigFloat& other);
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  Rational to_rational() const;

 private:
  mpfr_t value_;
};

/// floor(exp(beta * q)) with certified rounding: the exponential is bracketed
/// with directed rounding and the working precision doubles until both ends of
/// the bracket share a floor. Returns nullopt when the result would have more
/// than max_decimal_digits digits.
std::optional<BigInt> floor_exp(double beta, const BigInt& q, std::size_t max_decimal_digits);

/// Bits needed to hold |x|.
std::size_t bit_length(const BigInt& x);

}  // namespace harperlab
