#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "harperlab/parallel.hpp"
#include "harperlab/spectral.hpp"

namespace harperlab::spectral {

namespace {

using cplx = std::complex<double>;
using cocycle::Matrix2c;

// Rows r_k with u(k) = r_k . (u(0), u(-1)) for 1 <= k <= N and -N <= k <= -2.
std::vector<Eigen::RowVector2cd> solution_rows(const model::OperatorSample& s, double E, int N) {
  std::vector<Eigen::RowVector2cd> rows;
  rows.reserve(static_cast<std::size_t>(2 * N));
  Matrix2c M = Matrix2c::Identity();
  for (int k = 0; k < N; ++k) {
    M = cocycle::transfer_raw(s, E, s.phase(k)) * M;
    rows.push_back(M.row(0));
  }
  Matrix2c Minv = Matrix2c::Identity();
  for (int j = 1; j < N; ++j) {
    Minv = cocycle::transfer_raw(s, E, s.phase(-j)).inverse() * Minv;
    rows.push_back(Minv.row(1));
  }
  return rows;
}

struct MinForm {
  double value;  // min over solutions of (window mass outside {0, -1}) / |(u(0), u(-1))|^2
  double angle_a;
  double angle_b;
};

// The solution space at E is spanned by the truncation eigenvector phi, an
// exact solution on the window interior that stays accurate where it is
// tiny, and a second solution psi grown from the recurrence. The minimum is
// the smaller root of det(G - mu S) for the 2x2 Gram matrices of (phi, psi)
// over the window minus {0, -1} (G) and over {0, -1} (S).
MinForm min_form(const tridiag::SymTridiag& t, double E, int N, double c_minus1_arg) {
  const auto n = t.size();
  const auto j0 = static_cast<std::size_t>(2 * N);  // site 0
  const auto lo = static_cast<std::size_t>(N);      // site -N
  const auto hi = static_cast<std::size_t>(3 * N);  // site N

  const tridiag::LogVector lv = tridiag::eigenvector(t, E);
  double top = -INFINITY;
  for (std::size_t j = lo; j <= hi; ++j) top = std::max(top, lv.log_abs[j]);
  std::vector<double> phi(n, 0.0);
  for (std::size_t j = lo; j <= hi; ++j) phi[j] = lv.sign[j] * std::exp(lv.log_abs[j] - top);

  std::vector<double> psi(n, 0.0);
  const double r = std::hypot(phi[j0], phi[j0 - 1]);
  psi[j0] = r > 0 ? -phi[j0 - 1] / r : 1.0;
  psi[j0 - 1] = r > 0 ? phi[j0] / r : 0.0;
  auto rescale = [&](double x) {
    if (std::fabs(x) > 1e150)
      for (double& v : psi) v *= 1e-150;
  };
  for (std::size_t j = j0; j < hi; ++j) {
    psi[j + 1] = ((E - t.diag[j]) * psi[j] - t.off[j - 1] * psi[j - 1]) / t.off[j];
    rescale(psi[j + 1]);
  }
  for (std::size_t j = j0 - 1; j > lo; --j) {
    psi[j - 1] = ((E - t.diag[j]) * psi[j] - t.off[j] * psi[j + 1]) / t.off[j - 1];
    rescale(psi[j - 1]);
  }

  double g11 = 0, g12 = 0, g22 = 0;
  for (std::size_t j = lo; j <= hi; ++j) {
    if (j == j0 || j == j0 - 1) continue;
    g11 += phi[j] * phi[j];
    g12 += phi[j] * psi[j];
    g22 += psi[j] * psi[j];
  }
  const double s11 = phi[j0] * phi[j0] + phi[j0 - 1] * phi[j0 - 1];
  const double s12 = phi[j0] * psi[j0] + phi[j0 - 1] * psi[j0 - 1];
  const double s22 = psi[j0] * psi[j0] + psi[j0 - 1] * psi[j0 - 1];

  // det(G - mu S) = a mu^2 + b mu + c
  const double a = s11 * s22 - s12 * s12;
  const double b = -(g11 * s22 + g22 * s11 - 2.0 * g12 * s12);
  const double c = g11 * g22 - g12 * g12;
  const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
  const double mu = (-b + disc) > 0 ? 2.0 * c / (-b + disc) : 0.0;

  // (G - mu S) v = 0
  double v1 = -(g12 - mu * s12), v2 = g11 - mu * s11;
  if (std::hypot(v1, v2) == 0.0) {
    v1 = g22 - mu * s22;
    v2 = -(g12 - mu * s12);
  }
  const double u0 = v1 * phi[j0] + v2 * psi[j0];
  const double um1 = v1 * phi[j0 - 1] + v2 * psi[j0 - 1];
  // Back from the real gauge: u(-1)/u(0) picks up the phase of c(theta - alpha).
  const double angle_b = (um1 * u0 < 0 ? std::numbers::pi : 0.0) + c_minus1_arg;
  return {std::max(0.0, mu), std::atan2(std::fabs(um1), std::fabs(u0)), angle_b};
}

}  // namespace

double window_mass(const model::OperatorSample& s, double E, int N, cplx u0, cplx u_minus1) {
  if (N < 1) throw InvalidArgument("window half-width N must be at least 1");
  double mass = std::norm(u0) + std::norm(u_minus1);
  for (const auto& r : solution_rows(s, E, N)) mass += std::norm(r(0) * u0 + r(1) * u_minus1);
  return mass;
}

BadnessReport badness_scan(const model::OperatorSample& s, double C, int N, std::size_t energy_count) {
  if (N < 1) throw InvalidArgument("window half-width N must be at least 1");
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  const model::Truncation t = model::build_truncation(s, -2L * N, 2L * N - 1);
  const std::vector<double> spectrum = tridiag::eigenvalues(t.gauge(), 0.0);

  std::vector<double> grid;
  if (energy_count == 0 || energy_count >= spectrum.size()) {
    grid = spectrum;
  } else {
    for (std::size_t i = 0; i < energy_count; ++i)
      grid.push_back(spectrum[(2 * i + 1) * spectrum.size() / (2 * energy_count)]);
  }

  BadnessReport report;
  report.C = C;
  report.N = N;
  report.truncation_size = spectrum.size();
  report.min_mass = INFINITY;
  const tridiag::SymTridiag sym = t.gauge();
  const double c_arg = std::arg(s.c(s.phase(-1)));
  for (double E : grid) {
    const MinForm m = min_form(sym, E, N, c_arg);
    const BadnessEnergy be{E, 1.0 + std::max(0.0, m.value), m.angle_a, m.angle_b};
    report.energies.push_back(be);
    if (be.min_mass < report.min_mass) {
      report.min_mass = be.min_mass;
      report.witness = be;
    }
  }
  report.bad = report.min_mass >= C * C;
  if (report.bad) {
    report.witness.reset();
    report.note = "no counterexample at this resolution: every sampled energy and every normalized solution "
                  "carries window mass >= C^2";
  } else {
    report.note = "witness energy admits a normalized solution with window mass below C^2";
  }
  return report;
}

PerturbationResult perturbation_experiment(const model::CouplingTriple& c, const Frequency& alpha,
                                           const Frequency& alpha_prime, double theta, int N, std::uint64_t seed) {
  if (N < 1) throw InvalidArgument("N must be at least 1");
  const model::OperatorSample s(c, alpha, theta);
  const model::OperatorSample sp(c, alpha_prime, theta);
  const long x1 = -2L * N;
  const long x2 = 2L * N;
  const auto size = static_cast<std::size_t>(x2 - x1 + 1);
  const double Ep = tridiag::eigenvalue(model::build_truncation(sp, x1, x2).gauge(), size / 2);
  const std::vector<double> spec = tridiag::eigenvalues(model::build_truncation(s, x1, x2).gauge(), 0.0);
  const double E = *std::min_element(spec.begin(), spec.end(),
                                     [Ep](double a, double b) { return std::fabs(a - Ep) < std::fabs(b - Ep); });

  std::mt19937_64 rng(derive_seed(seed, 1));
  std::normal_distribution<double> gauss;
  Eigen::Vector2cd v(cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng)));
  v.normalize();

  PerturbationResult r;
  r.epsilon = std::fabs(alpha.value() - alpha_prime.value());
  r.energy = E;
  r.energy_prime = Ep;
  for (int m = -N; m <= N; ++m) {
    const Matrix2c d = cocycle::transfer_raw(s, E, s.phase(m)) - cocycle::transfer_raw(sp, Ep, sp.phase(m));
    r.matrix_deviation = std::max(r.matrix_deviation, cocycle::op_norm(d));
  }
  Matrix2c M = Matrix2c::Identity(), Mp = Matrix2c::Identity();
  for (int k = 0; k < N; ++k) {
    M = cocycle::transfer_raw(s, E, s.phase(k)) * M;
    Mp = cocycle::transfer_raw(sp, Ep, sp.phase(k)) * Mp;
    r.solution_deviation = std::max(r.solution_deviation, ((M - Mp) * v).norm());
  }
  M = Matrix2c::Identity();
  Mp = Matrix2c::Identity();
  for (int j = 1; j <= N; ++j) {
    M = cocycle::transfer_raw(s, E, s.phase(-j)).inverse() * M;
    Mp = cocycle::transfer_raw(sp, Ep, sp.phase(-j)).inverse() * Mp;
    r.solution_deviation = std::max(r.solution_deviation, ((M - Mp) * v).norm());
  }
  return r;
}

}  // namespace harperlab::spectral
