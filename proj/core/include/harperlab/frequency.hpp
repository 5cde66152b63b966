#pragma once

#include <memory>
#include <optional>
#include <string>

#include "harperlab/bigmath.hpp"
#include "harperlab/contfrac.hpp"

namespace harperlab {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

DoubleDouble to_double_double(const Rational& x);

/// Real-valued view of a frequency alpha used on orbits theta + n alpha.
/// Continued-fraction frequencies are replaced by a convergent p_N/q_N
/// accurate well beyond double-double resolution and the substitution is
/// recorded in substitution_note(). Rational frequencies stay exact.
class Frequency {
 public:
  static Frequency from_cf(const contfrac::ContinuedFraction& cf);
  static Frequency from_rational(const Rational& alpha);
  static Frequency from_double(double alpha);

  double value() const noexcept { return dd_.hi; }
  const DoubleDouble& dd() const noexcept { return dd_; }

  /// frac(k alpha) in [0, 1), accurate to a few ulps for |k| up to 2^40.
  double frac_multiple(long k) const;
  /// frac(theta + n alpha) in [0, 1).
  double orbit_point(double theta, long n) const;
  /// ||k alpha|| on the circle.
  double torus_norm_multiple(long k) const;

  const std::optional<Rational>& exact() const noexcept { return exact_; }
  const std::shared_ptr<const contfrac::ContinuedFraction>& cf() const noexcept { return cf_; }
  const std::string& substitution_note() const noexcept { return note_; }
  std::string describe() const;

 private:
  DoubleDouble dd_;
  std::optional<Rational> exact_;
  // Small exact rationals take an integer path in frac_multiple.
  long num_ = 0;
  long den_ = 0;
  std::shared_ptr<const contfrac::ContinuedFraction> cf_;
  std::string note_;
};

/// frac(x) in [0, 1) for doubles.
double wrap01(double x);

}  // namespace harperlab
