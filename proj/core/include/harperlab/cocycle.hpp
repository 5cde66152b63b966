#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "harperlab/model.hpp"

namespace harperlab::cocycle {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix2r = Eigen::Matrix2d;

enum class Kind { raw, normalized };
const char* to_string(Kind k);

/// Spectral norm of a 2x2 matrix from its Frobenius norm and determinant.
double op_norm(const Matrix2c& m);
double op_norm(const Matrix2r& m);

/// A(x) = (1/c(x)) [[E - 2cos 2pi x, -conj(c(x - alpha))], [c(x), 0]]
Matrix2c transfer_raw(const model::OperatorSample& s, double E, double phase);
/// A~(x) = [[E - 2cos 2pi x, -|c|(x - alpha)], [|c|(x), 0]] / sqrt(|c|(x) |c|(x - alpha))
Matrix2r transfer_normalized(const model::OperatorSample& s, double E, double phase);

/// Exact product = matrix * exp(log_scale).
struct Product {
  Matrix2c matrix = Matrix2c::Identity();
  double log_scale = 0.0;
  double log_norm() const { return log_scale + std::log(op_norm(matrix)); }
};

inline constexpr double kOrbitGuard = 1e-9;

/// A(theta + (n-1) alpha) ... A(theta), rescaled to unit norm whenever the
/// running norm exceeds e^30. Throws SingularSamplingPoint if an orbit point
/// comes within guard of a zero of c.
Product n_step(const model::OperatorSample& s, double E, double theta, long n, Kind kind,
               double guard = kOrbitGuard);

/// Closed form on the positive-exponent region, 0 elsewhere.
double lyapunov_formula(const model::CouplingTriple& c);

struct LyapunovEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_steps = 0;
  int theta_grid = 0;
  int excluded = 0;
  double excluded_fraction = 0.0;
  bool flagged = false;  // excluded_fraction >= 0.01
  Kind kind = Kind::normalized;
};

/// Mean of log||A_n(theta_j)|| / n over theta_j = theta + j/grid. Phases
/// within zero_guard of a zero (raw kind) or whose orbit meets the orbit guard
/// are excluded and counted; more than 10% raises TooManyExclusions.
LyapunovEstimate lyapunov_numeric(const model::OperatorSample& s, double E, long n_steps, int theta_grid, Kind kind,
                                  double zero_guard = 1e-7, unsigned threads = 1);

struct RotationEstimate {
  double value = 0.0;         // lift_average reduced mod 1
  double lift_average = 0.0;  // (y_n - y_0) / n, unreduced
  double std_error = 0.0;
  long n_steps = 0;
  bool slow_decay = false;  // batch-means error did not shrink like n^{-1/2}
  std::string warning;
};

/// Fibered rotation number of the normalized cocycle. Angles are in turns.
/// The lift is anchored by the structure of A~: its bottom-left entry is
/// positive and bottom-right is zero, so directions with positive x-component
/// land in the upper half plane and the rest in the lower half.
RotationEstimate rotation_number(const model::OperatorSample& s, double E, long n_steps, double theta0, double y0);

/// Same estimator for an arbitrary SL(2,R) cocycle over x -> x + alpha, with
/// the principal increment branch |phi| < 1/2. Raises BranchAmbiguity when an
/// increment lies within 1e-9 of 1/2.
RotationEstimate rotation_number_map(const std::function<Matrix2r(double)>& map, const Frequency& alpha,
                                     long n_steps, double theta0, double y0);

/// Angle (radians) of the orthogonal factor in the polar decomposition.
double polar_angle(const Matrix2r& m);

/// Winding of the polar angle in half turns over one traversal, on a fixed
/// grid. Throws GridTooCoarse when consecutive angles differ by >= pi/2 mod pi.
int degree_on_grid(const std::function<Matrix2r(double)>& map, int grid);

/// Dyadic refinement from `grid` until two successive grids agree.
int degree(const std::function<Matrix2r(double)>& map, int grid, int max_grid = 1 << 20);

/// max_j ||B(x_j + alpha) A1(x_j) B(x_j)^{-1} - A2(x_j)||, x_j = j / grid.
double conjugation_residual(const std::function<Matrix2c(double)>& B, const std::function<Matrix2c(double)>& A1,
                            const std::function<Matrix2c(double)>& A2, const Frequency& alpha, int grid);

/// Rotation by 2 pi t (t in turns).
Matrix2r rotation(double t);

}  // namespace harperlab::cocycle
