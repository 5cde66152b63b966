#include "harperlab/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace harperlab {

double wrap01(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // x slightly below an integer can round up to 1
  return f;
}

DoubleDouble to_double_double(const Rational& x) {
  BigFloat v(256);
  mpfr_set_q(v.get(), x.get_mpq_t(), MPFR_RNDN);
  const double hi = mpfr_get_d(v.get(), MPFR_RNDN);
  mpfr_sub_d(v.get(), v.get(), hi, MPFR_RNDN);
  const double lo = mpfr_get_d(v.get(), MPFR_RNDN);
  return {hi, lo};
}

Frequency Frequency::from_cf(const contfrac::ContinuedFraction& cf) {
  if (cf.depth() == 0) throw DepthInsufficient("frequency needs at least one digit");
  // Double-double resolves about 1e-32; ask for 1e3 headroom on top of it.
  const double wanted = 35.0 * std::log(10.0) / 2.0;
  std::size_t n = 1;
  while (n < cf.depth() && log_abs(cf.q(n)) < wanted) ++n;

  Frequency f;
  f.cf_ = std::make_shared<const contfrac::ContinuedFraction>(cf);
  f.dd_ = to_double_double(cf.convergent(n));
  std::ostringstream os;
  os.precision(6);
  os << "alpha replaced by convergent p_" << n << "/q_" << n << " with ln q_" << n << " = " << log_abs(cf.q(n))
     << " (error <= 1/q_" << n << "^2)";
  if (log_abs(cf.q(n)) < wanted) os << "; digit stream too short for full double-double accuracy";
  f.note_ = os.str();
  return f;
}

Frequency Frequency::from_rational(const Rational& alpha) {
  Frequency f;
  Rational a = alpha;
  a.canonicalize();
  f.exact_ = a;
  f.dd_ = to_double_double(a);
  if (a.get_num().fits_slong_p() && a.get_den().fits_slong_p() && a.get_den() < BigInt(1L << 40)) {
    f.num_ = a.get_num().get_si();
    f.den_ = a.get_den().get_si();
  }
  return f;
}

Frequency Frequency::from_double(double alpha) {
  if (!std::isfinite(alpha)) throw InvalidArgument("frequency must be finite");
  Frequency f;
  f.dd_ = {alpha, 0.0};
  return f;
}

double Frequency::frac_multiple(long k) const {
  if (den_ != 0) {
    __extension__ using wide = __int128;
    const wide r = static_cast<wide>(k) * num_ % den_;
    const long m = static_cast<long>(r < 0 ? r + den_ : r);
    return static_cast<double>(m) / static_cast<double>(den_);
  }
  const double kd = static_cast<double>(k);
  const double p = dd_.hi * kd;
  const double e = std::fma(dd_.hi, kd, -p);
  double x = p - std::floor(p);
  x += e + dd_.lo * kd;
  return wrap01(x);
}

double Frequency::orbit_point(double theta, long n) const { return wrap01(theta + frac_multiple(n)); }

double Frequency::torus_norm_multiple(long k) const {
  const double f = frac_multiple(k);
  return std::min(f, 1.0 - f);
}

std::string Frequency::describe() const {
  std::ostringstream os;
  if (cf_) {
    os << "cf(" << cf_->origin().description << ", depth " << cf_->depth() << ")";
  } else if (exact_) {
    os << "rational " << exact_->get_str();
  } else {
    os.precision(17);
    os << "double " << dd_.hi;
  }
  return os.str();
}

}  // namespace harperlab
