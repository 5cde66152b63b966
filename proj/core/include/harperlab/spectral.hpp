#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "harperlab/cocycle.hpp"
#include "harperlab/contfrac.hpp"
#include "harperlab/model.hpp"

namespace harperlab::spectral {

struct SpectrumApproximation {
  std::vector<double> eigenvalues;  // ascending
  std::size_t size = 0;
  std::vector<double> phases;
  std::string method = "sturm-bisection";
  double tolerance = 1e-10;
  std::size_t edge_dropped = 0;
};

/// Zero boundary conditions create states pinned to the window ends whose
/// eigenvalues lie in spectral gaps. An eigenvalue is dropped when its
/// eigenvector carries more than `threshold` of its mass within
/// zone * size sites of either end.
struct EdgeFilter {
  double zone = 0.1;
  double threshold = 0.5;
};

/// Eigenvalues of the truncation to sites 0..size-1.
SpectrumApproximation truncated_spectrum(const model::OperatorSample& s, std::size_t size, double tol = 1e-10);

/// truncated_spectrum without the edge states.
SpectrumApproximation bulk_spectrum(const model::OperatorSample& s, std::size_t size, const EdgeFilter& filter,
                                    double tol = 1e-10);

/// Union of truncated (or bulk, with a filter) spectra over several phases, sorted.
SpectrumApproximation aggregated_spectrum(const model::CouplingTriple& c, const Frequency& alpha, std::size_t size,
                                          const std::vector<double>& phases, unsigned threads = 1,
                                          double tol = 1e-10, std::optional<EdgeFilter> filter = std::nullopt);

/// `count` phases in [0, 1) from a seeded uniform generator.
std::vector<double> phase_grid(std::size_t count, std::uint64_t seed);

/// Median eigenvalue of the truncation to sites 0..size-1.
double mid_spectrum_energy(const model::OperatorSample& s, std::size_t size);

/// Hausdorff distance between two sorted nonempty lists (two-pointer sweep).
double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b);

struct DualityReport {
  double distance = 0.0;
  model::CouplingTriple dual;
  std::size_t size = 0;
  std::size_t phase_count = 0;
  std::size_t eigenvalue_count = 0;
  std::optional<EdgeFilter> filter;
  std::size_t edge_dropped = 0;       // on the side of c
  std::size_t edge_dropped_dual = 0;  // on the dual side
};

/// Compares the aggregated spectrum of c with l2 times that of its dual.
/// Edge states are filtered by default; pass std::nullopt for raw truncations.
DualityReport duality_check(const model::CouplingTriple& c, const Frequency& alpha, std::size_t size,
                            const std::vector<double>& phases, unsigned threads = 1,
                            std::optional<EdgeFilter> filter = EdgeFilter{});

struct DeltaLevel {
  std::size_t n;
  double delta;  // (sum_k ln||q_n (theta - theta_k)|| + ln q_{n+1}) / q_n
  double beta;   // ln q_{n+1} / q_n
};

struct DeltaReport {
  double delta_estimate = 0.0;
  double beta_estimate = 0.0;
  std::size_t depth = 0;
  std::size_t warmup = 0;
  model::ZeroKind zeros = model::ZeroKind::none;
  std::vector<DeltaLevel> per_level;
};

/// Finite-depth surrogate of the zero-corrected exponent for the phase theta
/// (exact). Orbit norms use exact rationals for rational zero offsets and
/// multiprecision arithmetic otherwise; alpha enters through its deepest
/// convergent. Without zeros the beta surrogate is returned unchanged.
DeltaReport delta_exponent(const model::CouplingTriple& c, const contfrac::ContinuedFraction& cf,
                           const Rational& theta, std::size_t depth, std::size_t warmup = 0);

struct BadnessEnergy {
  double energy;
  double min_mass;
  /// Minimizing initial data (u(0), u(-1)) = (cos a, e^{i b} sin a).
  double angle_a;
  double angle_b;
};

struct BadnessReport {
  double C = 0.0;
  int N = 0;
  std::size_t truncation_size = 0;
  std::vector<BadnessEnergy> energies;
  double min_mass = 0.0;
  bool bad = false;
  std::optional<BadnessEnergy> witness;  // the not-bad energy when !bad
  std::string note;
};

/// Window mass of every normalized solution, |u(0)|^2 + |u(-1)|^2 = 1, is a
/// Hermitian form v* P v with P = I + (contribution of the other sites), so
/// the minimum over initial data is 1 + lambda_min of that contribution,
/// computed exactly rather than sampled. Energies are taken evenly through the
/// spectrum of the truncation to [-2N, 2N - 1]; energy_count = 0 uses all.
BadnessReport badness_scan(const model::OperatorSample& s, double C, int N, std::size_t energy_count = 0);

/// Window mass sum_{|k|<=N} |u(k)|^2 for explicit initial data.
double window_mass(const model::OperatorSample& s, double E, int N, std::complex<double> u0,
                   std::complex<double> u_minus1);

struct PerturbationResult {
  double epsilon = 0.0;
  double energy = 0.0;        // nearest point of the unperturbed truncated spectrum
  double energy_prime = 0.0;  // chosen in the perturbed truncated spectrum
  double solution_deviation = 0.0;
  double matrix_deviation = 0.0;
};

/// E' is the median eigenvalue of the alpha' truncation to [-2N, 2N] and E the
/// closest eigenvalue of the alpha truncation. Both solutions start from the
/// same normalized data drawn from `seed`.
PerturbationResult perturbation_experiment(const model::CouplingTriple& c, const Frequency& alpha,
                                           const Frequency& alpha_prime, double theta, int N, std::uint64_t seed);

struct ScalingFit {
  double exponent = 0.0;  // slope of log deviation against log epsilon
  double prefactor = 0.0;
  double r2 = 0.0;
};
ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

struct RegularityResult {
  bool regular = false;
  long x1 = 0;
  long x2 = 0;
  std::size_t windows_tested = 0;
  std::size_t windows_skipped = 0;
  std::vector<std::string> log;
};

/// Searches windows [x1, x1 + k - 1] containing y with both edges at distance
/// at least ceil(k/9) from y; y is regular if some window has
/// |G(y, x_i)| < exp(-m |y - x_i|) at both edges.
RegularityResult regularity_test(const model::OperatorSample& s, double E, long y, double m, long k);

struct DecayFit {
  double eigenvalue = 0.0;
  std::size_t index = 0;
  long peak = 0;
  long fit_min = 0;  // fit range of |n - peak|
  long fit_max = 0;
  std::size_t points = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double target = 0.0;  // -L from the closed formula
};

/// Eigenvector of the truncation to [-size/2, size - size/2 - 1]; by default
/// the one with the largest mass in the middle third. Fits
/// (1/2) ln(|phi(n)|^2 + |phi(n+1)|^2) against |n - peak| away from the last
/// 10% of the window and a small core. Throws PoorlyLocalized if r2 < 0.9.
DecayFit decay_fit(const model::OperatorSample& s, std::size_t size, std::optional<std::size_t> which = std::nullopt);

}  // namespace harperlab::spectral
