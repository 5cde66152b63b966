#pragma once

// Small-divisor problems over the rotation x -> x + alpha.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "harperlab/contfrac.hpp"
#include "harperlab/frequency.hpp"

namespace harperlab::cocycle {

/// Fourier coefficients f^(k) for k = -K..K, stored at index k + K.
class FourierSeries {
 public:
  FourierSeries() = default;
  explicit FourierSeries(long bandwidth) : K_(bandwidth), c_(static_cast<std::size_t>(2 * bandwidth + 1)) {}
  FourierSeries(long bandwidth, std::vector<std::complex<double>> coefficients);

  long bandwidth() const noexcept { return K_; }
  std::complex<double>& operator[](long k) { return c_.at(static_cast<std::size_t>(k + K_)); }
  const std::complex<double>& operator[](long k) const { return c_.at(static_cast<std::size_t>(k + K_)); }
  const std::vector<std::complex<double>>& coefficients() const noexcept { return c_; }

  std::complex<double> evaluate(double x) const;
  /// g(x) = f(x + alpha) - f(x), coefficient-wise.
  FourierSeries coboundary(const Frequency& alpha) const;

 private:
  long K_ = 0;
  std::vector<std::complex<double>> c_;
};

/// Modes split at |k| < low, low <= |k| < high, |k| >= high.
struct BlockEdges {
  long low = 0;
  long high = 0;
};

/// Largest n with q_n <= bandwidth gives (q_{n-1}, q_n).
BlockEdges default_blocks(const contfrac::ContinuedFraction& cf, long bandwidth);

struct NormReport {
  /// weighted[j] = sum_k |k|^j |psi^(k)| for j = 0..s_max
  std::vector<double> weighted;
  BlockEdges edges;
  /// blocks[b][j] is the part of weighted[j] carried by block b
  std::vector<std::vector<double>> blocks;
  double min_divisor = 0.0;  // smallest |e^{2 pi i k alpha} - 1| used
  long min_divisor_k = 0;
};

struct CohomologySolution {
  FourierSeries psi;
  NormReport report;
};

/// Solves psi(x + alpha) - psi(x) = phi(x) mode by mode:
/// psi^(k) = phi^(k) / (e^{2 pi i k alpha} - 1), psi^(0) = 0. Requires
/// phi^(0) = 0. A mode whose divisor has ||k alpha|| < 1e-14 and a nonzero
/// coefficient raises ResonantDivisor(k).
CohomologySolution solve_cohomological(const FourierSeries& phi, const Frequency& alpha, int s_max,
                                       std::optional<BlockEdges> edges = std::nullopt);

enum class CommutantEquation { diagonal, plus, minus };
const char* to_string(CommutantEquation e);

struct CommutantMode {
  CommutantEquation equation;
  long k;
  double divisor;  // |e^{-2 pi i k alpha} - e^{i s 4 pi rho}| with s = 0, +1, -1
  double floor;    // 4 gamma / (|k|+1)^tau for the off-diagonal equations
  bool free;       // divisor exactly zero at k = 0: constant solutions survive
};

struct CommutantReport {
  long bandwidth = 0;
  long killed = 0;
  std::vector<CommutantMode> free_modes;
  double min_ratio = 0.0;  // min divisor / floor over off-diagonal modes
  long min_ratio_k = 0;
};

/// For b(x + alpha) = e^{s 4 pi i rho} b(x) with s in {0, +1, -1}, every
/// Fourier mode |k| <= bandwidth must vanish unless its divisor is exactly
/// zero. Off-diagonal divisors are compared against 4 gamma / (|k|+1)^tau,
/// which ||2 rho - k alpha|| >= gamma / (|k|+1)^tau guarantees; a divisor
/// below the floor raises DivisorFloorViolated(k). Modes are scanned in the
/// order k = 0, 1, -1, 2, -2, ...
CommutantReport commutant_rigidity_check(const contfrac::Phase& rho, const contfrac::ContinuedFraction& alpha,
                                         long bandwidth, double tau, double gamma);

}  // namespace harperlab::cocycle
