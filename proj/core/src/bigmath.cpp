#include "harperlab/bigmath.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "harperlab/errors.hpp"

namespace harperlab {

double log_abs(const BigInt& x) {
  if (sgn(x) == 0) return -INFINITY;
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, x.get_mpz_t());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::numbers::ln2;
}

double log_abs(const Rational& x) {
  if (sgn(x) == 0) return -INFINITY;
  return log_abs(BigInt(x.get_num())) - log_abs(BigInt(x.get_den()));
}

Rational frac(const Rational& x) {
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  r.canonicalize();
  return r;
}

Rational torus_norm(const Rational& x) {
  Rational f = frac(x);
  Rational g = Rational(1) - f;
  return f < g ? f : g;
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite value cannot be made rational");
  Rational r(x);  // GMP converts doubles exactly
  r.canonicalize();
  return r;
}

std::size_t bit_length(const BigInt& x) {
  if (sgn(x) == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

std::string to_decimal_string(const BigInt& x) { return x.get_str(10); }

int decimal_places(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return 0;
  int places = 0;
  for (std::size_t i = dot + 1; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i)
    ++places;
  return places;
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return InvalidArgument("not a decimal or fraction literal: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (sgn(den) == 0) throw fail();
    Rational r = num / den;
    r.canonicalize();
    return r;
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long scale = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      any_digit = true;
      if (seen_dot) ++scale;
    } else if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();
  long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    ++i;
    const std::string rest(text.substr(i));
    if (rest.empty()) throw fail();
    std::size_t used = 0;
    try {
      exponent = std::stol(rest, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != rest.size()) throw fail();
  }
  BigInt mantissa(digits, 10);
  const long power = exponent - scale;
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(power)));
  Rational r = power >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

BigFloat::BigFloat(mpfr_prec_t bits) { mpfr_init2(value_, bits); }

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

Rational BigFloat::to_rational() const {
  if (!mpfr_number_p(value_)) throw InvalidArgument("non-finite multiprecision value");
  BigInt mantissa;
  const mpfr_exp_t exponent = mpfr_get_z_2exp(mantissa.get_mpz_t(), value_);
  Rational r(mantissa);
  if (exponent >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(exponent));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-exponent));
  }
  r.canonicalize();
  return r;
}

std::optional<BigInt> floor_exp(double beta, const BigInt& q, std::size_t max_decimal_digits) {
  if (!std::isfinite(beta)) throw InvalidArgument("beta must be finite");
  if (beta < 0.0 || sgn(q) < 0) throw InvalidArgument("floor_exp expects beta >= 0 and q >= 0");
  if (beta == 0.0 || sgn(q) == 0) return BigInt(1);

  const double log_exponent = std::log(beta) + log_abs(q);
  const double exponent = std::exp(log_exponent);  // beta*q, +inf if astronomically large
  const double decimal_digits = exponent / std::numbers::ln10 + 1.0;
  if (!(decimal_digits <= static_cast<double>(max_decimal_digits))) return std::nullopt;

  BigFloat argument(static_cast<mpfr_prec_t>(bit_length(q) + 64));
  mpfr_set_z(argument.get(), q.get_mpz_t(), MPFR_RNDN);
  mpfr_mul_d(argument.get(), argument.get(), beta, MPFR_RNDN);  // exact at this precision

  auto bits = static_cast<mpfr_prec_t>(exponent * std::numbers::log2e) + 64;
  for (int attempt = 0; attempt < 12; ++attempt, bits *= 2) {
    BigFloat lower(bits);
    BigFloat upper(bits);
    mpfr_exp(lower.get(), argument.get(), MPFR_RNDD);
    mpfr_exp(upper.get(), argument.get(), MPFR_RNDU);
    BigInt floor_lower;
    BigInt floor_upper;
    mpfr_get_z(floor_lower.get_mpz_t(), lower.get(), MPFR_RNDD);
    mpfr_get_z(floor_upper.get_mpz_t(), upper.get(), MPFR_RNDD);
    if (floor_lower == floor_upper) return floor_lower;
  }
  throw DepthInsufficient("floor(exp(beta*q)) could not be certified");
}

}  // namespace harperlab
