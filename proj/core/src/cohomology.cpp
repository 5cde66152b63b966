#include "harperlab/cohomology.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace harperlab::cocycle {

namespace {

using cplx = std::complex<double>;

// e^{2 pi i f} - 1 = 2i sin(pi f) e^{i pi f}, accurate for tiny f.
cplx unit_minus_one(double f) {
  return cplx(0.0, 2.0 * std::sin(std::numbers::pi * f)) * std::polar(1.0, std::numbers::pi * f);
}

long scan_index(long i) { return (i % 2 == 1) ? (i + 1) / 2 : -(i / 2); }

}  // namespace

FourierSeries::FourierSeries(long bandwidth, std::vector<cplx> coefficients) : K_(bandwidth), c_(std::move(coefficients)) {
  if (bandwidth < 0 || c_.size() != static_cast<std::size_t>(2 * bandwidth + 1))
    throw InvalidArgument("Fourier vector length must be 2K+1");
}

cplx FourierSeries::evaluate(double x) const {
  cplx sum = 0.0;
  for (long k = -K_; k <= K_; ++k) sum += (*this)[k] * std::polar(1.0, 2.0 * std::numbers::pi * wrap01(k * x));
  return sum;
}

FourierSeries FourierSeries::coboundary(const Frequency& alpha) const {
  FourierSeries out(K_);
  for (long k = -K_; k <= K_; ++k) out[k] = (*this)[k] * unit_minus_one(alpha.frac_multiple(k));
  return out;
}

BlockEdges default_blocks(const contfrac::ContinuedFraction& cf, long bandwidth) {
  std::size_t n = 0;
  while (n + 1 <= cf.depth() && cf.q(n + 1) <= bandwidth) ++n;
  if (n == 0) return {1, cf.depth() >= 1 ? static_cast<long>(std::min<double>(cf.q(1).get_d(), 1e18)) : 1};
  return {cf.q(n - 1).get_si(), cf.q(n).get_si()};
}

CohomologySolution solve_cohomological(const FourierSeries& phi, const Frequency& alpha, int s_max,
                                       std::optional<BlockEdges> edges) {
  if (s_max < 0) throw InvalidArgument("s_max must be nonnegative");
  const long K = phi.bandwidth();
  if (std::abs(phi[0]) != 0.0) throw InvalidArgument("phi must have zero mean");

  CohomologySolution out{FourierSeries(K), {}};
  NormReport& r = out.report;
  if (!edges) {
    if (alpha.cf()) {
      edges = default_blocks(*alpha.cf(), K);
    } else {
      edges = BlockEdges{1, std::max<long>(1, K / 2)};
    }
  }
  r.edges = *edges;
  r.weighted.assign(static_cast<std::size_t>(s_max) + 1, 0.0);
  r.blocks.assign(3, std::vector<double>(static_cast<std::size_t>(s_max) + 1, 0.0));
  r.min_divisor = std::numeric_limits<double>::infinity();

  for (long i = 1; i <= 2 * K; ++i) {
    const long k = scan_index(i);
    const cplx f = phi[k];
    const double norm_k = alpha.torus_norm_multiple(k);
    if (norm_k < 1e-14) {
      if (f != 0.0) throw ResonantDivisor(k);
      continue;
    }
    const cplx d = unit_minus_one(alpha.frac_multiple(k));
    if (std::abs(d) < r.min_divisor) {
      r.min_divisor = std::abs(d);
      r.min_divisor_k = k;
    }
    const cplx psi = f / d;
    out.psi[k] = psi;
    const long ak = std::labs(k);
    const std::size_t block = ak < r.edges.low ? 0 : (ak < r.edges.high ? 1 : 2);
    double w = std::abs(psi);
    for (int j = 0; j <= s_max; ++j) {
      r.weighted[static_cast<std::size_t>(j)] += w;
      r.blocks[block][static_cast<std::size_t>(j)] += w;
      w *= static_cast<double>(ak);
    }
  }
  return out;
}

const char* to_string(CommutantEquation e) {
  switch (e) {
    case CommutantEquation::diagonal:
      return "diagonal";
    case CommutantEquation::plus:
      return "plus";
    case CommutantEquation::minus:
      return "minus";
  }
  return "unknown";
}

CommutantReport commutant_rigidity_check(const contfrac::Phase& rho, const contfrac::ContinuedFraction& alpha,
                                         long bandwidth, double tau, double gamma) {
  if (bandwidth < 0) throw InvalidArgument("bandwidth must be nonnegative");
  if (!(tau > 0.0) || !(gamma > 0.0)) throw InvalidArgument("tau and gamma must be positive");
  CommutantReport report;
  report.bandwidth = bandwidth;
  report.min_ratio = std::numeric_limits<double>::infinity();

  for (long i = 0; i <= 2 * bandwidth; ++i) {
    const long k = scan_index(i);
    for (int s : {0, 1, -1}) {
      const CommutantEquation eq =
          s == 0 ? CommutantEquation::diagonal : (s > 0 ? CommutantEquation::plus : CommutantEquation::minus);
      // |e^{-2 pi i k alpha} - e^{2 pi i s 2 rho}| = 2 sin(pi ||k alpha + 2 s rho||)
      Rational offset = Rational(2 * s) * rho.offset;
      Rational mult = Rational(k) + Rational(2 * s) * rho.alpha_multiple;
      offset.canonicalize();
      mult.canonicalize();
      const contfrac::NormBracket b = contfrac::torus_norm_bracket(offset, mult, alpha);
      const double floor = s == 0 ? 0.0 : 4.0 * gamma / std::pow(static_cast<double>(std::labs(k) + 1), tau);
      const double center = b.center.get_d();
      const double divisor = 2.0 * std::sin(std::numbers::pi * center);
      if (sgn(b.center) == 0 && sgn(b.error) == 0) {
        if (k == 0) {
          report.free_modes.push_back({eq, k, 0.0, floor, true});
          continue;
        }
        throw DivisorFloorViolated(k, 0.0, floor);
      }
      const Rational lower_norm = b.center - b.error;
      const double lower = 2.0 * std::sin(std::numbers::pi * std::max(0.0, lower_norm.get_d()));
      const Rational upper_norm = b.center + b.error;
      const double upper = 2.0 * std::sin(std::numbers::pi * std::min(0.5, upper_norm.get_d()));
      if (s == 0) {
        if (sgn(lower_norm) <= 0) {
          if (sgn(upper_norm) > 0) throw DepthInsufficient("cannot certify a nonzero diagonal divisor");
          throw DivisorFloorViolated(k, divisor, floor);
        }
      } else {
        if (upper < floor) throw DivisorFloorViolated(k, divisor, floor);
        if (lower < floor) throw DepthInsufficient("divisor bracket straddles the floor");
        if (divisor / floor < report.min_ratio) {
          report.min_ratio = divisor / floor;
          report.min_ratio_k = k;
        }
      }
      ++report.killed;
    }
  }
  return report;
}

}  // namespace harperlab::cocycle
