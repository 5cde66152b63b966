#include "harperlab/contfrac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace harperlab::contfrac {

namespace {

BigInt floor_of(const Rational& x) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

Rational pow10_inverse(int digits) {
  BigInt ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::max(digits, 0)));
  return Rational(BigInt(1), ten_pow);
}

mpfr_prec_t bits_for_digits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * std::numbers::ln10 / std::numbers::ln2)) + 32;
}

template <typename Fill>
RealInterval mpfr_interval(int precision_digits, Fill fill) {
  const auto bits = bits_for_digits(precision_digits);
  BigFloat lo(bits);
  BigFloat hi(bits);
  fill(lo.get(), MPFR_RNDD);
  fill(hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

ContinuedFraction::ContinuedFraction(std::vector<BigInt> digits, Origin origin, bool truncated)
    : digits_(std::move(digits)), origin_(std::move(origin)), truncated_(truncated) {
  for (const auto& a : digits_)
    if (sgn(a) <= 0) throw InvalidArgument("continued-fraction digits must be positive");
  p_.reserve(digits_.size() + 1);
  q_.reserve(digits_.size() + 1);
  // p_{-1} = 1, q_{-1} = 0 seed the recurrence.
  BigInt p_prev = 1, q_prev = 0;
  p_.emplace_back(0);
  q_.emplace_back(1);
  for (const auto& a : digits_) {
    BigInt p_next = a * p_.back() + p_prev;
    BigInt q_next = a * q_.back() + q_prev;
    p_prev = p_.back();
    q_prev = q_.back();
    p_.push_back(std::move(p_next));
    q_.push_back(std::move(q_next));
  }
}

const BigInt& ContinuedFraction::digit(std::size_t n) const {
  if (n == 0 || n > digits_.size()) throw InvalidArgument("digit index out of range");
  return digits_[n - 1];
}

const BigInt& ContinuedFraction::p(std::size_t n) const {
  if (n >= p_.size()) throw DepthInsufficient("convergent index beyond available digits");
  return p_[n];
}

const BigInt& ContinuedFraction::q(std::size_t n) const {
  if (n >= q_.size()) throw DepthInsufficient("convergent index beyond available digits");
  return q_[n];
}

Rational ContinuedFraction::convergent(std::size_t n) const {
  Rational r(p(n), q(n));
  r.canonicalize();
  return r;
}

Rational ContinuedFraction::error_bound() const {
  const BigInt& qn = q_.back();
  return Rational(BigInt(1), qn * qn);
}

ContinuedFraction ContinuedFraction::prefix(std::size_t n) const {
  if (n > digits_.size()) throw DepthInsufficient("prefix longer than the digit stream");
  return ContinuedFraction(std::vector<BigInt>(digits_.begin(), digits_.begin() + static_cast<long>(n)), origin_,
                           truncated_ && n == digits_.size());
}

RealInterval RealInterval::around(const Rational& center, int precision_digits) {
  const Rational radius = pow10_inverse(precision_digits);
  return {center - radius, center + radius};
}

RealInterval golden_interval(int precision_digits) {
  return mpfr_interval(precision_digits, [](mpfr_ptr out, mpfr_rnd_t rnd) {
    mpfr_sqrt_ui(out, 5, rnd);
    mpfr_sub_ui(out, out, 1, rnd);
    mpfr_div_2ui(out, out, 1, rnd);
  });
}

RealInterval silver_interval(int precision_digits) {
  return mpfr_interval(precision_digits, [](mpfr_ptr out, mpfr_rnd_t rnd) {
    mpfr_sqrt_ui(out, 2, rnd);
    mpfr_sub_ui(out, out, 1, rnd);
  });
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::complete:
      return "complete";
    case Termination::rational_detected:
      return "rational_detected";
    case Termination::precision_exhausted:
      return "precision_exhausted";
  }
  return "unknown";
}

Expansion expand_prefix(const RealInterval& x, std::size_t max_depth, const std::string& source,
                        int precision_digits) {
  if (x.lo > x.hi) throw InvalidArgument("interval endpoints are reversed");
  if (x.lo <= 0 || x.hi >= 1) throw InvalidArgument("expansion expects a value strictly inside (0, 1)");

  Origin origin{Origin::Kind::expanded, source, precision_digits};
  std::vector<BigInt> digits;
  Rational lo = x.lo;
  Rational hi = x.hi;
  auto finish = [&](Termination t) { return Expansion{ContinuedFraction(std::move(digits), origin), t}; };
  const Rational width = x.hi - x.lo;
  BigInt q_prev = 0;
  BigInt q = 1;

  while (digits.size() < max_depth) {
    if (lo <= 0) return finish(Termination::rational_detected);
    Rational rlo = 1 / hi;
    Rational rhi = 1 / lo;
    rlo.canonicalize();
    rhi.canonicalize();
    const BigInt a_lo = floor_of(rlo);
    const BigInt a_hi = floor_of(rhi);
    if (a_lo == a_hi) {
      digits.push_back(a_lo);
      BigInt q_next = a_lo * q + q_prev;
      q_prev = q;
      q = q_next;
      lo = rlo - a_lo;
      hi = rhi - a_lo;
      lo.canonicalize();
      hi.canonicalize();
      continue;
    }
    const BigInt q_cand = a_hi * q + q_prev;
    if (a_hi - a_lo == 1 && width * q_cand * q_cand <= Rational(1, 1000000)) {
      digits.push_back(a_hi);
      return finish(Termination::rational_detected);
    }
    return finish(Termination::precision_exhausted);
  }
  return finish(Termination::complete);
}

ExpansionStopped::ExpansionStopped(std::string name, Expansion partial)
    : Error(std::move(name), ErrorKind::numeric,
            "expansion stopped after " + std::to_string(partial.cf.depth()) + " digits (" +
                to_string(partial.termination) + ")"),
      partial_(std::move(partial)) {}

RationalDetected::RationalDetected(Expansion partial) : ExpansionStopped("RationalDetected", std::move(partial)) {}

PrecisionExhausted::PrecisionExhausted(Expansion partial)
    : ExpansionStopped("PrecisionExhausted", std::move(partial)) {}

ContinuedFraction expand(const RealInterval& x, std::size_t max_depth, const std::string& source,
                         int precision_digits) {
  Expansion e = expand_prefix(x, max_depth, source, precision_digits);
  switch (e.termination) {
    case Termination::complete:
      return std::move(e.cf);
    case Termination::rational_detected:
      throw RationalDetected(std::move(e));
    case Termination::precision_exhausted:
      throw PrecisionExhausted(std::move(e));
  }
  return std::move(e.cf);
}

ContinuedFraction expand_literal(const std::string& literal, std::size_t max_depth, int precision_digits) {
  const Rational center = parse_rational(literal);
  const bool exact = literal.find('/') != std::string::npos;
  const RealInterval x = exact ? RealInterval::point(center) : RealInterval::around(center, precision_digits);
  return expand(x, max_depth, literal, exact ? 0 : precision_digits);
}

namespace {

// Digits needed so that q_depth^2 is comfortably below the interval width.
int digits_for_depth(std::size_t depth, double log10_growth) {
  return static_cast<int>(std::ceil(2.0 * log10_growth * static_cast<double>(depth))) + 20;
}

}  // namespace

ContinuedFraction golden(std::size_t depth) {
  const int prec = digits_for_depth(depth, std::log10(std::numbers::phi));
  return expand(golden_interval(prec), depth, "golden", prec);
}

ContinuedFraction silver(std::size_t depth) {
  const int prec = digits_for_depth(depth, std::log10(1.0 + std::numbers::sqrt2));
  return expand(silver_interval(prec), depth, "silver", prec);
}

FrequencyExponent beta_exponent(const ContinuedFraction& cf, std::size_t depth, std::size_t warmup) {
  if (depth > cf.depth()) throw DepthInsufficient("beta_exponent depth exceeds available digits");
  if (warmup >= depth) throw InvalidArgument("warmup must be smaller than depth");
  FrequencyExponent out;
  out.depth = depth;
  out.warmup = warmup;
  for (std::size_t n = warmup; n < depth; ++n) {
    const double qn = std::exp(log_abs(cf.q(n)));
    const double log_qn = log_abs(cf.q(n));
    LevelExponent level{n, log_abs(cf.q(n + 1)) / qn, log_abs(cf.digit(n + 1)) / qn};
    out.per_level.push_back(level);
    out.beta_estimate = std::max(out.beta_estimate, level.log_ratio);
    out.digit_estimate = std::max(out.digit_estimate, level.digit_ratio);
    out.agreement_bound = std::max(out.agreement_bound, (log_qn + std::numbers::ln2) / qn);
  }
  return out;
}

NormBracket torus_norm_bracket(const Rational& offset, const Rational& alpha_multiple, const ContinuedFraction& cf) {
  if (cf.depth() == 0 && sgn(alpha_multiple) != 0)
    throw DepthInsufficient("no convergent available to evaluate multiples of alpha");
  Rational x = offset + alpha_multiple * cf.value();
  x.canonicalize();
  Rational err = abs(alpha_multiple) * cf.error_bound();
  err.canonicalize();
  return {torus_norm(x), err};
}

namespace {

struct Verdict {
  bool below = false;
  double value = 0.0;
  double log_value = 0.0;
};

Verdict compare_to_threshold(const NormBracket& b, double threshold, long k) {
  const Rational thr = exact_rational(threshold);
  const Rational lower = b.center - b.error;
  const Rational upper = b.center + b.error;
  if (lower >= thr) return {};
  if (upper < thr) return {true, b.center.get_d(), log_abs(b.center)};
  std::ostringstream os;
  os << "convergent of depth cannot separate ||.|| from the threshold at k=" << k;
  throw DepthInsufficient(os.str());
}

double threshold(double gamma, double tau, long k) {
  return gamma / std::pow(static_cast<double>(std::labs(k) + 1), tau);
}

void check_dc_params(double tau, double gamma, long K) {
  if (!(tau > 0.0) || !(gamma > 0.0)) throw InvalidArgument("Diophantine parameters need tau > 0 and gamma > 0");
  if (K < 0) throw InvalidArgument("K must be nonnegative");
}

}  // namespace

DcResult dc_membership(const ContinuedFraction& cf, double tau, double gamma, long K) {
  check_dc_params(tau, gamma, K);
  DcResult result{K, std::nullopt};
  for (long k = 1; k <= K; ++k) {
    const NormBracket b = torus_norm_bracket(Rational(0), Rational(k), cf);
    const Verdict v = compare_to_threshold(b, threshold(gamma, tau, k), k);
    if (v.below) {
      result.violation = DcViolation{k, v.value, v.log_value};
      return result;
    }
  }
  return result;
}

DcResult dc_alpha_membership(const Phase& theta, const ContinuedFraction& cf, double tau, double gamma, long K) {
  check_dc_params(tau, gamma, K);
  DcResult result{K, std::nullopt};
  const Rational two_offset = 2 * theta.offset;
  const Rational two_mult = 2 * theta.alpha_multiple;
  for (long i = 0; i <= 2 * K; ++i) {
    const long k = (i % 2 == 1) ? (i + 1) / 2 : -(i / 2);
    Rational mult = two_mult - Rational(k);
    mult.canonicalize();
    const NormBracket b = torus_norm_bracket(two_offset, mult, cf);
    const Verdict v = compare_to_threshold(b, threshold(gamma, tau, k), k);
    if (v.below) {
      result.violation = DcViolation{k, v.value, v.log_value};
      return result;
    }
  }
  return result;
}

std::string describe(const DigitSchedule& schedule) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantBeta>) {
          return "constant_beta(" + format_double(s.beta) + ")";
        } else if constexpr (std::is_same_v<T, SingleBurst>) {
          return "single_burst(" + format_double(s.beta) + ")";
        } else {
          return "explicit_tail(" + std::to_string(s.digits.size()) + " digits)";
        }
      },
      schedule);
}

ContinuedFraction forge(const ContinuedFraction& base, std::size_t n0, const DigitSchedule& schedule,
                        std::size_t levels, const ForgeOptions& options) {
  if (n0 > base.depth()) throw DepthInsufficient("n0 exceeds the base digit stream");
  std::vector<BigInt> digits(base.digits().begin(), base.digits().begin() + static_cast<long>(n0));

  Origin origin{Origin::Kind::forged, "", 0};
  {
    std::ostringstream os;
    os << describe(schedule) << " after " << n0 << " digits of " << base.origin().description;
    origin.description = os.str();
  }

  // q_{n-1} for the next digit position, maintained incrementally.
  BigInt q_prev = n0 == 0 ? BigInt(0) : base.q(n0 - 1);
  BigInt q_cur = base.q(n0);
  auto push = [&](BigInt a) {
    BigInt q_next = a * q_cur + q_prev;
    q_prev = std::move(q_cur);
    q_cur = std::move(q_next);
    digits.push_back(std::move(a));
  };

  bool truncated = false;
  auto exponential_digit = [&](double beta) -> std::optional<BigInt> {
    std::optional<BigInt> a = floor_exp(beta, q_cur, options.max_decimal_digits);
    if (!a) return std::nullopt;
    if (sgn(*a) <= 0) *a = 1;
    return a;
  };

  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantBeta>) {
          if (!(s.beta >= 0.0)) throw InvalidArgument("beta must be nonnegative");
          for (std::size_t level = 0; level < levels; ++level) {
            auto a = exponential_digit(s.beta);
            if (!a) {
              truncated = true;
              return;
            }
            push(std::move(*a));
          }
        } else if constexpr (std::is_same_v<T, SingleBurst>) {
          if (!(s.beta >= 0.0)) throw InvalidArgument("beta must be nonnegative");
          auto a = exponential_digit(s.beta);
          if (!a) {
            truncated = true;
            return;
          }
          push(std::move(*a));
          for (std::size_t level = 0; level < levels; ++level) push(BigInt(1));
        } else {
          const std::size_t count = levels == 0 ? s.digits.size() : std::min(levels, s.digits.size());
          for (std::size_t i = 0; i < count; ++i) {
            if (sgn(s.digits[i]) <= 0) throw InvalidArgument("explicit tail digits must be positive");
            if (mpz_sizeinbase(s.digits[i].get_mpz_t(), 10) > options.max_decimal_digits) {
              truncated = true;
              return;
            }
            push(s.digits[i]);
          }
        }
      },
      schedule);

  return ContinuedFraction(std::move(digits), std::move(origin), truncated);
}

}  // namespace harperlab::contfrac
