#include "harperlab/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace harperlab::model {

namespace {

bool near(double a, double b) { return std::fabs(a - b) <= kBoundaryTolerance; }

double circle_distance(double a, double b) {
  const double d = std::fabs(wrap01(a - b));
  return std::min(d, 1.0 - d);
}

}  // namespace

void validate(const CouplingTriple& c) {
  for (double v : {c.lambda1, c.lambda2, c.lambda3}) {
    if (!std::isfinite(v)) throw InvalidCoupling("coupling entries must be finite");
    if (v < 0.0) throw InvalidCoupling("coupling entries must be nonnegative");
  }
  if (c.lambda1 == 0.0 && c.lambda2 == 0.0 && c.lambda3 == 0.0)
    throw InvalidCoupling("at least one coupling entry must be positive");
}

CouplingTriple parse_coupling(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string part(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    try {
      std::size_t used = 0;
      values.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InvalidCoupling("cannot parse coupling '" + std::string(text) + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.size() != 3) throw InvalidCoupling("coupling needs three comma-separated values");
  CouplingTriple c{values[0], values[1], values[2]};
  validate(c);
  return c;
}

std::string format_coupling(const CouplingTriple& c) {
  auto shortest = [](double x) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, x).ptr);
  };
  return shortest(c.lambda1) + ',' + shortest(c.lambda2) + ',' + shortest(c.lambda3);
}

bool RegionTag::interior() const {
  return kind == RegionKind::I_interior || kind == RegionKind::II_interior || kind == RegionKind::III_isotropic ||
         kind == RegionKind::III_anisotropic;
}

std::string RegionTag::name() const {
  switch (kind) {
    case RegionKind::I_interior:
      return "I_interior";
    case RegionKind::II_interior:
      return "II_interior";
    case RegionKind::III_isotropic:
      return "III_interior_isotropic";
    case RegionKind::III_anisotropic:
      return "III_interior_anisotropic";
    case RegionKind::line_I:
      return "L_I";
    case RegionKind::line_II:
      return "L_II";
    case RegionKind::line_III:
      return "L_III";
    case RegionKind::lambda2_zero:
      return "lambda2_zero";
  }
  return "unknown";
}

RegionTag classify(const CouplingTriple& c) {
  validate(c);
  const double s = c.lambda1 + c.lambda3;
  const double t = c.lambda2;
  RegionTag tag{RegionKind::lambda2_zero, near(c.lambda1, c.lambda3)};
  if (t == 0.0) return tag;
  if (near(t, 1.0) && s <= 1.0 + kBoundaryTolerance) {
    tag.kind = RegionKind::line_II;
  } else if (near(s, 1.0) && t <= 1.0 + kBoundaryTolerance) {
    tag.kind = RegionKind::line_I;
  } else if (near(s, t) && t >= 1.0 - kBoundaryTolerance) {
    tag.kind = RegionKind::line_III;
  } else if (s < 1.0 && t < 1.0) {
    tag.kind = RegionKind::I_interior;
  } else if (t > 1.0 && s < t) {
    tag.kind = RegionKind::II_interior;
  } else {
    tag.kind = tag.isotropic ? RegionKind::III_isotropic : RegionKind::III_anisotropic;
  }
  return tag;
}

CouplingTriple duality(const CouplingTriple& c) {
  validate(c);
  if (c.lambda2 == 0.0) throw Lambda2Zero();
  return {c.lambda3 / c.lambda2, 1.0 / c.lambda2, c.lambda1 / c.lambda2};
}

const char* to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::none:
      return "none";
    case ZeroKind::single:
      return "single";
    case ZeroKind::pair:
      return "pair";
    case ZeroKind::double_zero:
      return "double_zero";
  }
  return "unknown";
}

ZeroSet c_zeros(const CouplingTriple& c) {
  validate(c);
  ZeroSet z;
  const double s = c.lambda1 + c.lambda3;
  if (near(c.lambda1, c.lambda3) && c.lambda1 > 0.0) {
    const double a = 0.5 * s;
    if (near(2.0 * a, c.lambda2)) {
      z.kind = ZeroKind::double_zero;
      z.offsets = {0.5};
    } else if (2.0 * a > c.lambda2) {
      const double w = std::acos(-c.lambda2 / (2.0 * a)) / (2.0 * std::numbers::pi);
      z.kind = ZeroKind::pair;
      z.offsets = {w, 1.0 - w};
    }
  } else if (near(s, c.lambda2)) {
    z.kind = ZeroKind::single;
    z.offsets = {0.5};
  }
  return z;
}

namespace {

// acos(-l2 / (l1 + l3)) / (2 pi), rounded in direction rnd.
void pair_offset(const CouplingTriple& c, mpfr_ptr out, mpfr_rnd_t rnd) {
  const mpfr_prec_t bits = mpfr_get_prec(out) + 32;
  BigFloat ratio(bits);
  BigFloat pi(bits);
  mpfr_set_d(ratio.get(), -c.lambda2, MPFR_RNDN);
  mpfr_div_d(ratio.get(), ratio.get(), c.lambda1 + c.lambda3, MPFR_RNDN);
  mpfr_acos(ratio.get(), ratio.get(), MPFR_RNDN);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  mpfr_div(ratio.get(), ratio.get(), pi.get(), MPFR_RNDN);
  mpfr_div_2ui(out, ratio.get(), 1, rnd);
}

}  // namespace

std::vector<BigFloat> zero_offsets_mp(const CouplingTriple& c, mpfr_prec_t bits) {
  const ZeroSet z = c_zeros(c);
  std::vector<BigFloat> out;
  if (z.kind == ZeroKind::single || z.kind == ZeroKind::double_zero) {
    out.emplace_back(bits);
    mpfr_set_d(out.back().get(), 0.5, MPFR_RNDN);
  } else if (z.kind == ZeroKind::pair) {
    BigFloat w(bits);
    pair_offset(c, w.get(), MPFR_RNDN);
    out.push_back(w);
    BigFloat v(bits);
    mpfr_ui_sub(v.get(), 1, w.get(), MPFR_RNDN);
    out.push_back(v);
  }
  return out;
}

const char* to_string(Admissibility a) {
  switch (a) {
    case Admissibility::in_Theta:
      return "in_Theta";
    case Admissibility::out:
      return "out";
    case Admissibility::undecided:
      return "undecided";
  }
  return "unknown";
}

AdmissibilityReport theta_admissible(const CouplingTriple& c, const contfrac::RealInterval& theta,
                                     std::size_t depth, double tol) {
  if (depth < 2) throw InvalidArgument("theta_admissible needs depth >= 2");
  const ZeroSet z = c_zeros(c);
  AdmissibilityReport report;
  if (z.kind == ZeroKind::none) {
    report.verdict = Admissibility::in_Theta;
    report.note = "c has no zeros; every phase is admissible";
    return report;
  }
  // Shifts s with the tested quantity 2 theta + s, as exact rational brackets.
  std::vector<contfrac::RealInterval> shifts;
  if (z.kind == ZeroKind::single || z.kind == ZeroKind::double_zero) {
    shifts.push_back(contfrac::RealInterval::point(Rational(0)));
  } else {
    const Rational width = theta.width();
    mpfr_prec_t bits = 4096;
    if (sgn(width) > 0) bits = static_cast<mpfr_prec_t>(std::max<double>(256.0, 64.0 - log_abs(width) / std::numbers::ln2));
    BigFloat lo(bits), hi(bits);
    pair_offset(c, lo.get(), MPFR_RNDD);
    pair_offset(c, hi.get(), MPFR_RNDU);
    // arccos / pi = 2 w; the bracket is widened by one ulp each side.
    mpfr_mul_2ui(lo.get(), lo.get(), 1, MPFR_RNDD);
    mpfr_mul_2ui(hi.get(), hi.get(), 1, MPFR_RNDU);
    mpfr_nextbelow(lo.get());
    mpfr_nextabove(hi.get());
    const Rational l = lo.to_rational();
    const Rational h = hi.to_rational();
    shifts.push_back({l, h});
    shifts.push_back({-h, -l});
  }

  report.verdict = Admissibility::in_Theta;
  for (const auto& shift : shifts) {
    Rational xlo = 2 * theta.lo + shift.lo;
    Rational xhi = 2 * theta.hi + shift.hi;
    xlo.canonicalize();
    xhi.canonicalize();
    BigInt flo, fhi;
    mpz_fdiv_q(flo.get_mpz_t(), xlo.get_num_mpz_t(), xlo.get_den_mpz_t());
    mpz_fdiv_q(fhi.get_mpz_t(), xhi.get_num_mpz_t(), xhi.get_den_mpz_t());
    Rational ylo = xlo - flo;
    Rational yhi = xhi - flo;
    ylo.canonicalize();
    yhi.canonicalize();
    if (flo != fhi || sgn(ylo) == 0) {
      report.verdict = Admissibility::out;
      report.note = "shifted phase is within its own tolerance of an integer";
      return report;
    }
    const contfrac::Expansion e = contfrac::expand_prefix({ylo, yhi}, depth, "shifted phase");
    if (e.termination == contfrac::Termination::rational_detected) {
      report.verdict = Admissibility::out;
      report.note = "shifted phase is rational at the given precision";
      return report;
    }
    if (e.termination == contfrac::Termination::precision_exhausted) throw contfrac::PrecisionExhausted(e);
    report.exponents.push_back(contfrac::beta_exponent(e.cf, depth, depth / 2));
    if (!(report.exponents.back().beta_estimate < tol)) report.verdict = Admissibility::out;
  }
  std::ostringstream os;
  os << "beta surrogate of the shifted phase" << (shifts.size() > 1 ? "s" : "") << " at depth " << depth
     << ", warmup " << depth / 2 << ", tolerance " << tol;
  if (z.kind == ZeroKind::double_zero)
    os << "; double zero of c (l1 = l3 = l2/2): the single-zero test is applied but membership is not established";
  report.note = os.str();
  return report;
}

OperatorSample::OperatorSample(CouplingTriple coupling, Frequency alpha, double theta)
    : coupling_(coupling), alpha_(std::move(alpha)), theta_(wrap01(theta)) {
  validate(coupling_);
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  half_alpha_ = 0.5 * alpha_.value();
  zeros_ = c_zeros(coupling_);
}

cplx OperatorSample::c(double phase) const {
  const double angle = 2.0 * std::numbers::pi * wrap01(phase + half_alpha_);
  const double re = coupling_.lambda2 + (coupling_.lambda1 + coupling_.lambda3) * std::cos(angle);
  const double im = (coupling_.lambda3 - coupling_.lambda1) * std::sin(angle);
  return {re, im};
}

cplx OperatorSample::c_tilde(double phase) const {
  const double angle = 2.0 * std::numbers::pi * wrap01(phase + half_alpha_);
  const cplx e = std::polar(1.0, angle);
  return coupling_.lambda3 * std::conj(e) + coupling_.lambda2 + coupling_.lambda1 * e;
}

double OperatorSample::abs_c(double phase) const { return std::sqrt(std::real(c(phase) * c_tilde(phase))); }

double OperatorSample::potential(double phase) { return 2.0 * std::cos(2.0 * std::numbers::pi * phase); }

double OperatorSample::distance_to_zero(double phase) const {
  double best = std::numeric_limits<double>::infinity();
  for (double offset : zeros_.offsets) best = std::min(best, circle_distance(phase, offset - half_alpha_));
  return best;
}

OperatorSample OperatorSample::with_theta(double theta) const { return OperatorSample(coupling_, alpha_, theta); }

tridiag::SymTridiag Truncation::gauge() const {
  tridiag::SymTridiag t;
  t.diag = diag;
  t.off.reserve(offdiag.size());
  for (const cplx& b : offdiag) t.off.push_back(std::abs(b));
  return t;
}

Truncation build_truncation(const OperatorSample& s, long x1, long x2) {
  if (x1 > x2) throw WindowEmpty(x1, x2);
  Truncation t;
  t.x1 = x1;
  t.x2 = x2;
  const std::size_t n = static_cast<std::size_t>(x2 - x1 + 1);
  t.diag.reserve(n);
  t.offdiag.reserve(n - 1);
  for (long k = x1; k <= x2; ++k) {
    const double phase = s.phase(k);
    t.diag.push_back(OperatorSample::potential(phase));
    if (k < x2) t.offdiag.push_back(s.c(phase));
  }
  return t;
}

namespace {

struct Pivots {
  std::vector<double> F;
  std::vector<double> B;
  cplx G(const Truncation& t, std::size_t i, std::size_t j) const {
    const std::size_t n = t.size();
    double denom = t.diag[j] - E;
    if (j > 0) denom -= std::norm(t.offdiag[j - 1]) / F[j - 1];
    if (j + 1 < n) denom -= std::norm(t.offdiag[j]) / B[j + 1];
    if (denom == 0.0) throw ResolventSingular(E);
    cplx g = 1.0 / denom;
    if (i < j) {
      for (std::size_t m = i; m < j; ++m) g *= -t.offdiag[m] / F[m];
    } else {
      for (std::size_t m = j; m < i; ++m) g *= -std::conj(t.offdiag[m]) / B[m + 1];
    }
    return g;
  }
  double E;
};

Pivots factor(const Truncation& t, double E, double guard) {
  const std::size_t n = t.size();
  double scale = std::max(1.0, std::fabs(E));
  for (double d : t.diag) scale = std::max(scale, std::fabs(d));
  for (const cplx& b : t.offdiag) scale = std::max(scale, std::abs(b));
  if (guard <= 0.0) guard = 1e-11 * scale;
  const tridiag::SymTridiag sym = t.gauge();
  if (tridiag::sturm_count(sym, E - guard) != tridiag::sturm_count(sym, E + guard)) throw ResolventSingular(E);

  Pivots p;
  p.E = E;
  p.F.resize(n);
  p.B.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.F[i] = t.diag[i] - E - (i == 0 ? 0.0 : std::norm(t.offdiag[i - 1]) / p.F[i - 1]);
    if (p.F[i] == 0.0) throw ResolventSingular(E);
  }
  for (std::size_t j = n; j-- > 0;) {
    p.B[j] = t.diag[j] - E - (j + 1 == n ? 0.0 : std::norm(t.offdiag[j]) / p.B[j + 1]);
    if (p.B[j] == 0.0) throw ResolventSingular(E);
  }
  return p;
}

std::size_t index_of(const Truncation& t, long x) {
  if (x < t.x1 || x > t.x2) throw InvalidArgument("site outside the truncation window");
  return static_cast<std::size_t>(x - t.x1);
}

}  // namespace

cplx green_function(const Truncation& t, double E, long x, long y, double guard) {
  const std::size_t i = index_of(t, x);
  const std::size_t j = index_of(t, y);
  return factor(t, E, guard).G(t, i, j);
}

EdgeGreen green_edges(const Truncation& t, double E, long y, double guard) {
  const std::size_t i = index_of(t, y);
  const Pivots p = factor(t, E, guard);
  return {p.G(t, i, 0), p.G(t, i, t.size() - 1)};
}

}  // namespace harperlab::model
