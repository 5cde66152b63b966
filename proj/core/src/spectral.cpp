#include "harperlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "harperlab/parallel.hpp"

namespace harperlab::spectral {

SpectrumApproximation truncated_spectrum(const model::OperatorSample& s, std::size_t size, double tol) {
  if (size < 1) throw InvalidArgument("truncation size must be at least 1");
  const model::Truncation t = model::build_truncation(s, 0, static_cast<long>(size) - 1);
  SpectrumApproximation out;
  out.eigenvalues = tridiag::eigenvalues(t.gauge(), tol);
  out.size = size;
  out.phases = {s.theta()};
  out.tolerance = tol;
  return out;
}

SpectrumApproximation bulk_spectrum(const model::OperatorSample& s, std::size_t size, const EdgeFilter& filter,
                                    double tol) {
  if (size < 1) throw InvalidArgument("truncation size must be at least 1");
  if (!(filter.zone > 0.0 && filter.zone < 0.5)) throw InvalidArgument("edge zone must lie in (0, 1/2)");
  const tridiag::SymTridiag t = model::build_truncation(s, 0, static_cast<long>(size) - 1).gauge();
  const auto zone = static_cast<std::size_t>(filter.zone * static_cast<double>(size));
  SpectrumApproximation out;
  out.size = size;
  out.phases = {s.theta()};
  out.tolerance = tol;
  out.method = "sturm-bisection/edge-filter";
  for (double e : tridiag::eigenvalues(t, tol)) {
    const tridiag::LogVector v = tridiag::eigenvector(t, e);
    double edge = 0.0;
    for (std::size_t j = 0; j < zone; ++j)
      edge += std::exp(2.0 * v.log_abs[j]) + std::exp(2.0 * v.log_abs[size - 1 - j]);
    if (edge > filter.threshold) {
      ++out.edge_dropped;
    } else {
      out.eigenvalues.push_back(e);
    }
  }
  return out;
}

SpectrumApproximation aggregated_spectrum(const model::CouplingTriple& c, const Frequency& alpha, std::size_t size,
                                          const std::vector<double>& phases, unsigned threads, double tol,
                                          std::optional<EdgeFilter> filter) {
  if (phases.empty()) throw InvalidArgument("at least one phase is required");
  std::vector<SpectrumApproximation> parts(phases.size());
  parallel_for(phases.size(), threads, [&](std::size_t j) {
    const model::OperatorSample s(c, alpha, phases[j]);
    parts[j] = filter ? bulk_spectrum(s, size, *filter, tol) : truncated_spectrum(s, size, tol);
  });
  SpectrumApproximation out;
  out.size = size;
  out.phases = phases;
  out.tolerance = tol;
  if (filter) out.method = "sturm-bisection/edge-filter";
  for (const auto& p : parts) {
    out.eigenvalues.insert(out.eigenvalues.end(), p.eigenvalues.begin(), p.eigenvalues.end());
    out.edge_dropped += p.edge_dropped;
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

std::vector<double> phase_grid(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(count);
  for (auto& x : out) x = unit(rng);
  return out;
}

double mid_spectrum_energy(const model::OperatorSample& s, std::size_t size) {
  const model::Truncation t = model::build_truncation(s, 0, static_cast<long>(size) - 1);
  return tridiag::eigenvalue(t.gauge(), size / 2);
}

double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("Hausdorff distance needs nonempty sets");
  // For each point of x, the distance to the nearest point of y, via a
  // pointer that only moves forward through the sorted y.
  auto directed = [](const std::vector<double>& x, const std::vector<double>& y) {
    double worst = 0.0;
    std::size_t j = 0;
    for (double v : x) {
      while (j + 1 < y.size() && y[j + 1] <= v) ++j;
      double d = std::fabs(v - y[j]);
      if (j + 1 < y.size()) d = std::min(d, std::fabs(y[j + 1] - v));
      worst = std::max(worst, d);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

DualityReport duality_check(const model::CouplingTriple& c, const Frequency& alpha, std::size_t size,
                            const std::vector<double>& phases, unsigned threads, std::optional<EdgeFilter> filter) {
  const model::CouplingTriple dual = model::duality(c);
  const SpectrumApproximation here = aggregated_spectrum(c, alpha, size, phases, threads, 1e-10, filter);
  SpectrumApproximation there = here;
  if (!(dual == c)) {
    there = aggregated_spectrum(dual, alpha, size, phases, threads, 1e-10, filter);
    for (double& e : there.eigenvalues) e *= c.lambda2;
  }
  DualityReport r;
  r.filter = filter;
  r.edge_dropped = here.edge_dropped;
  r.edge_dropped_dual = there.edge_dropped;
  r.distance = hausdorff_distance(here.eigenvalues, there.eigenvalues);
  r.dual = dual;
  r.size = size;
  r.phase_count = phases.size();
  r.eigenvalue_count = here.eigenvalues.size();
  return r;
}

namespace {

// ln ||x|| for exact rational x.
double log_torus_norm(const Rational& x) { return log_abs(torus_norm(x)); }

double log_torus_norm(const BigFloat& x) {
  BigFloat f(x.precision());
  mpfr_frac(f.get(), x.get(), MPFR_RNDN);
  if (mpfr_sgn(f.get()) < 0) mpfr_add_ui(f.get(), f.get(), 1, MPFR_RNDN);
  BigFloat g(x.precision());
  mpfr_ui_sub(g.get(), 1, f.get(), MPFR_RNDN);
  if (mpfr_cmp(g.get(), f.get()) < 0) mpfr_set(f.get(), g.get(), MPFR_RNDN);
  if (mpfr_zero_p(f.get())) return -INFINITY;
  mpfr_log(f.get(), f.get(), MPFR_RNDN);
  return mpfr_get_d(f.get(), MPFR_RNDN);
}

}  // namespace

DeltaReport delta_exponent(const model::CouplingTriple& c, const contfrac::ContinuedFraction& cf,
                           const Rational& theta, std::size_t depth, std::size_t warmup) {
  const contfrac::FrequencyExponent fe = contfrac::beta_exponent(cf, depth, warmup);
  const model::ZeroSet z = model::c_zeros(c);
  DeltaReport r;
  r.depth = depth;
  r.warmup = warmup;
  r.zeros = z.kind;
  r.beta_estimate = fe.beta_estimate;
  r.delta_estimate = -INFINITY;
  const Rational alpha = cf.value();
  const bool exact_offsets = z.kind == model::ZeroKind::single || z.kind == model::ZeroKind::double_zero;

  for (const auto& level : fe.per_level) {
    const BigInt& qn = cf.q(level.n);
    const double qn_d = std::exp(log_abs(qn));
    double sum_log = 0.0;
    if (exact_offsets) {
      // theta - theta_k = theta - 1/2 + alpha/2; the double zero counts twice.
      Rational x = Rational(qn) * (theta - Rational(1, 2) + alpha / 2);
      x.canonicalize();
      sum_log = log_torus_norm(x) * (z.kind == model::ZeroKind::double_zero ? 2.0 : 1.0);
    } else if (z.kind == model::ZeroKind::pair) {
      const auto bits = static_cast<mpfr_prec_t>(bit_length(qn) + 2 * bit_length(cf.q(cf.depth())) + 128);
      for (const BigFloat& offset : model::zero_offsets_mp(c, bits)) {
        Rational base = theta + alpha / 2;
        base.canonicalize();
        BigFloat x(bits);
        mpfr_set_q(x.get(), base.get_mpq_t(), MPFR_RNDN);
        mpfr_sub(x.get(), x.get(), offset.get(), MPFR_RNDN);
        mpfr_mul_z(x.get(), x.get(), qn.get_mpz_t(), MPFR_RNDN);
        sum_log += log_torus_norm(x);
      }
    }
    DeltaLevel d{level.n, level.log_ratio, level.log_ratio};
    if (z.kind != model::ZeroKind::none) d.delta = (sum_log + log_abs(cf.q(level.n + 1))) / qn_d;
    r.per_level.push_back(d);
    r.delta_estimate = std::max(r.delta_estimate, d.delta);
  }
  return r;
}

ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("power-law fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double cov = sxy - sx * sy / n;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  ScalingFit f;
  f.exponent = cov / vx;
  f.prefactor = std::exp((sy - f.exponent * sx) / n);
  f.r2 = vy > 0 ? cov * cov / (vx * vy) : 1.0;
  return f;
}

}  // namespace harperlab::spectral
