#pragma once

// The extended Harper operator
//   (H u)_n = c(theta + n alpha) u_{n+1} + conj(c(theta + (n-1) alpha)) u_{n-1}
//             + 2 cos 2pi(theta + n alpha) u_n,
//   c(theta) = l1 e^{-2pi i (theta + alpha/2)} + l2 + l3 e^{2pi i (theta + alpha/2)}.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "harperlab/contfrac.hpp"
#include "harperlab/frequency.hpp"
#include "harperlab/tridiag.hpp"

namespace harperlab::model {

using cplx = std::complex<double>;

inline constexpr double kBoundaryTolerance = 1e-12;

struct CouplingTriple {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;

  bool operator==(const CouplingTriple&) const = default;
};

/// Throws InvalidCoupling for negative or non-finite entries and for (0,0,0).
void validate(const CouplingTriple& c);
CouplingTriple parse_coupling(std::string_view text);  // "l1,l2,l3"
std::string format_coupling(const CouplingTriple& c);

enum class RegionKind {
  I_interior,
  II_interior,
  III_isotropic,
  III_anisotropic,
  line_I,    // l1 + l3 = 1, 0 < l2 <= 1
  line_II,   // l2 = 1, l1 + l3 <= 1 (owns the corner l1 + l3 = l2 = 1)
  line_III,  // l1 + l3 = l2 >= 1
  lambda2_zero,  // outside every region: duality is undefined there
};

struct RegionTag {
  RegionKind kind;
  bool isotropic = false;  // l1 == l3
  bool interior() const;
  std::string name() const;
};

RegionTag classify(const CouplingTriple& c);

/// (l3/l2, 1/l2, l1/l2); throws Lambda2Zero.
CouplingTriple duality(const CouplingTriple& c);

enum class ZeroKind {
  none,
  single,       // l1 + l3 = l2, l1 != l3: zero at 1/2
  pair,         // l1 = l3 > l2/2: zeros at +-arccos(-l2/(2 l1))/(2 pi)
  double_zero,  // l1 = l3 = l2/2: both degeneracies meet at 1/2
};

const char* to_string(ZeroKind k);

/// Zeros of c are offset - alpha/2 (mod 1); offsets do not depend on alpha.
struct ZeroSet {
  ZeroKind kind = ZeroKind::none;
  std::vector<double> offsets;
};

ZeroSet c_zeros(const CouplingTriple& c);

/// Zero offsets at `bits` of precision, reduced to [0, 1).
std::vector<BigFloat> zero_offsets_mp(const CouplingTriple& c, mpfr_prec_t bits);

enum class Admissibility { in_Theta, out, undecided };
const char* to_string(Admissibility a);

struct AdmissibilityReport {
  Admissibility verdict = Admissibility::undecided;
  std::vector<contfrac::FrequencyExponent> exponents;  // one per tested shift
  std::string note;
};

/// Finite-depth test of the full-measure phase set: with no zeros every
/// phase qualifies; otherwise the shifted phases 2 theta + shift must have a
/// beta surrogate below tol (warmup depth/2). theta is an interval of reals.
/// Rational shifted phases are out. The double zero at 1/2 gets the
/// single-zero test and a note saying the verdict is not backed by a theorem.
AdmissibilityReport theta_admissible(const CouplingTriple& c, const contfrac::RealInterval& theta,
                                     std::size_t depth, double tol);

class OperatorSample {
 public:
  OperatorSample(CouplingTriple coupling, Frequency alpha, double theta);

  const CouplingTriple& coupling() const noexcept { return coupling_; }
  const Frequency& alpha() const noexcept { return alpha_; }
  double theta() const noexcept { return theta_; }
  const ZeroSet& zeros() const noexcept { return zeros_; }

  cplx c(double phase) const;
  cplx c_tilde(double phase) const;
  double abs_c(double phase) const;
  static double potential(double phase);  // 2 cos 2 pi phase

  /// frac(theta + n alpha)
  double phase(long n) const { return alpha_.orbit_point(theta_, n); }
  /// Circle distance from phase to the nearest zero of c (inf without zeros).
  double distance_to_zero(double phase) const;

  OperatorSample with_theta(double theta) const;

 private:
  CouplingTriple coupling_;
  Frequency alpha_;
  double theta_;
  double half_alpha_;
  ZeroSet zeros_;
};

/// Restriction of H to sites x1..x2 with zero boundary conditions.
struct Truncation {
  long x1 = 0;
  long x2 = 0;
  std::vector<double> diag;
  std::vector<cplx> offdiag;  // H(n, n+1)

  std::size_t size() const noexcept { return diag.size(); }
  /// Unitarily equivalent real symmetric form with off-diagonal |c|.
  tridiag::SymTridiag gauge() const;
};

Truncation build_truncation(const OperatorSample& s, long x1, long x2);

/// Resolvent entry (H - E)^{-1}(x, y) on the window, from the two-sided
/// pivot recursion. Throws ResolventSingular when an eigenvalue lies within
/// guard of E (guard <= 0 picks a scale-aware default).
cplx green_function(const Truncation& t, double E, long x, long y, double guard = 0.0);

/// All resolvent entries G(y, x1) and G(y, x2) for one y, sharing the pivots.
struct EdgeGreen {
  cplx left;
  cplx right;
};
EdgeGreen green_edges(const Truncation& t, double E, long y, double guard = 0.0);

}  // namespace harperlab::model
