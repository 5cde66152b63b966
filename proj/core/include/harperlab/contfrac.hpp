#pragma once

// Exact continued-fraction arithmetic for frequencies in (0, 1):
// expansion of real intervals, big-integer convergents, the growth exponent
// beta, Diophantine checks, and digit-schedule forging.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "harperlab/bigmath.hpp"
#include "harperlab/errors.hpp"

namespace harperlab::contfrac {

struct Origin {
  enum class Kind { expanded, forged, explicit_digits };
  Kind kind = Kind::explicit_digits;
  std::string description;
  int precision_digits = 0;  // only meaningful for expanded origins
};

/// Digits a_1..a_N of alpha = [0; a_1, a_2, ...] with all convergents
/// p_n/q_n for 0 <= n <= N, computed eagerly so instances are immutable and
/// safe to share across threads.
class ContinuedFraction {
 public:
  ContinuedFraction(std::vector<BigInt> digits, Origin origin, bool truncated = false);

  std::size_t depth() const noexcept { return digits_.size(); }
  const std::vector<BigInt>& digits() const noexcept { return digits_; }
  const BigInt& digit(std::size_t n) const;  // a_n, 1-based
  const BigInt& p(std::size_t n) const;      // 0 <= n <= depth()
  const BigInt& q(std::size_t n) const;
  Rational convergent(std::size_t n) const;

  /// p_N/q_N for the deepest convergent.
  Rational value() const { return convergent(depth()); }
  /// Any alpha sharing these digits lies within 1/q_N^2 of p_N/q_N.
  Rational error_bound() const;

  const Origin& origin() const noexcept { return origin_; }
  /// Set by forge() when the schedule hit the digit-size cap.
  bool truncated() const noexcept { return truncated_; }

  ContinuedFraction prefix(std::size_t n) const;

 private:
  std::vector<BigInt> digits_;
  std::vector<BigInt> p_;
  std::vector<BigInt> q_;
  Origin origin_;
  bool truncated_ = false;
};

/// A real number known only to lie in [lo, hi].
struct RealInterval {
  Rational lo;
  Rational hi;

  static RealInterval point(const Rational& x) { return {x, x}; }
  /// center +/- 10^-precision_digits
  static RealInterval around(const Rational& center, int precision_digits);
  Rational width() const { return hi - lo; }
};

RealInterval golden_interval(int precision_digits);  // (sqrt(5)-1)/2
RealInterval silver_interval(int precision_digits);  // sqrt(2)-1

enum class Termination { complete, rational_detected, precision_exhausted };
const char* to_string(Termination t);

struct Expansion {
  ContinuedFraction cf;
  Termination termination;
};

/// Expands every real in x simultaneously and emits a digit only when all of
/// them agree on it. If the reciprocal interval straddles exactly one integer
/// m and width(x) * q^2 <= 1e-6 for the denominator q of the rational
/// [.., m], m is emitted and the expansion stops as rational_detected; a wider
/// straddle is precision_exhausted. A remainder interval touching zero is
/// rational.
Expansion expand_prefix(const RealInterval& x, std::size_t max_depth, const std::string& source = "",
                        int precision_digits = 0);

class ExpansionStopped : public Error {
 public:
  ExpansionStopped(std::string name, Expansion partial);
  const Expansion& partial() const noexcept { return partial_; }

 private:
  Expansion partial_;
};

class RationalDetected : public ExpansionStopped {
 public:
  explicit RationalDetected(Expansion partial);
};

class PrecisionExhausted : public ExpansionStopped {
 public:
  explicit PrecisionExhausted(Expansion partial);
};

/// Like expand_prefix but throws unless max_depth digits were certified.
ContinuedFraction expand(const RealInterval& x, std::size_t max_depth, const std::string& source = "",
                         int precision_digits = 0);

/// Decimal or fraction literal with an explicit precision in decimal digits.
/// Fraction literals ("1/3") are taken as exact.
ContinuedFraction expand_literal(const std::string& literal, std::size_t max_depth, int precision_digits);

ContinuedFraction golden(std::size_t depth);
ContinuedFraction silver(std::size_t depth);

struct LevelExponent {
  std::size_t n;
  double log_ratio;    // ln q_{n+1} / q_n
  double digit_ratio;  // ln a_{n+1} / q_n
};

/// Finite-depth surrogate of beta(alpha) = limsup ln q_{n+1} / q_n.
struct FrequencyExponent {
  std::size_t depth = 0;
  std::size_t warmup = 0;
  double beta_estimate = 0.0;   // max of log_ratio over levels
  double digit_estimate = 0.0;  // max of digit_ratio over levels
  /// Levelwise 0 <= log_ratio - digit_ratio <= (ln q_n + ln 2) / q_n; this is
  /// the largest right-hand side over the reported levels.
  double agreement_bound = 0.0;
  std::vector<LevelExponent> per_level;
};

/// Levels warmup <= n < depth are reported (each needs q_{n+1}).
FrequencyExponent beta_exponent(const ContinuedFraction& cf, std::size_t depth, std::size_t warmup);

/// offset + alpha_multiple * alpha, with both coefficients exact.
struct Phase {
  Rational offset;
  Rational alpha_multiple;

  static Phase constant(const Rational& x) { return {x, Rational(0)}; }
  static Phase from_double(double x) { return constant(exact_rational(x)); }
};

struct DcViolation {
  long k = 0;
  double value = 0.0;      // ||.||_T evaluated at the convergent; may underflow
  double log_value = 0.0;  // natural log of the same, -inf when exactly zero
};

struct DcResult {
  long K = 0;
  std::optional<DcViolation> violation;
  bool holds() const { return !violation.has_value(); }
};

/// Checks ||k alpha|| >= gamma / (k+1)^tau for 1 <= k <= K. Each norm is
/// bracketed exactly using p_N/q_N and the 1/q_N^2 error bound; a bracket that
/// straddles the threshold raises DepthInsufficient.
DcResult dc_membership(const ContinuedFraction& cf, double tau, double gamma, long K);

/// Checks ||2 theta - k alpha|| >= gamma / (|k|+1)^tau for |k| <= K, scanning
/// k = 0, 1, -1, 2, -2, ...
DcResult dc_alpha_membership(const Phase& theta, const ContinuedFraction& cf, double tau, double gamma,
                             long K);

/// Bracket of ||offset + m * alpha||_T from the deepest convergent.
struct NormBracket {
  Rational center;  // exact norm at alpha = p_N/q_N
  Rational error;   // |m| / q_N^2
};
NormBracket torus_norm_bracket(const Rational& offset, const Rational& alpha_multiple,
                               const ContinuedFraction& cf);

struct ConstantBeta {
  double beta;
};
struct SingleBurst {
  double beta;
};
struct ExplicitTail {
  std::vector<BigInt> digits;
};
/// ConstantBeta: a_n = floor(exp(beta q_{n-1})) for every forged level.
/// SingleBurst: one such digit right after n0, then `levels` ones.
/// ExplicitTail: the listed digits (the first `levels` of them when levels > 0).
using DigitSchedule = std::variant<ConstantBeta, SingleBurst, ExplicitTail>;

std::string describe(const DigitSchedule& schedule);

struct ForgeOptions {
  std::size_t max_decimal_digits = 1'000'000;
};

/// Keeps a_1..a_{n0} of base and appends scheduled digits. A digit that
/// would exceed the size cap is not materialized; the result is returned
/// with truncated() set.
ContinuedFraction forge(const ContinuedFraction& base, std::size_t n0, const DigitSchedule& schedule,
                        std::size_t levels, const ForgeOptions& options = {});

}  // namespace harperlab::contfrac
