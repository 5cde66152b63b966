#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace harperlab::tridiag {

/// Real symmetric tridiagonal matrix; off[i] couples rows i and i+1.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Number of eigenvalues strictly below x (negative LDL^T pivots of T - x).
std::size_t sturm_count(const SymTridiag& t, double x);

/// Interval containing the whole spectrum.
std::pair<double, double> gershgorin(const SymTridiag& t);

/// All eigenvalues, ascending, by Sturm bisection. Each is located to
/// absolute accuracy tol; tol = 0 bisects down to adjacent doubles.
std::vector<double> eigenvalues(const SymTridiag& t, double tol = 1e-10);

/// The k-th smallest eigenvalue (0-based) alone.
double eigenvalue(const SymTridiag& t, std::size_t k, double tol = 0.0);

/// Eigenvector stored as log|u_i| and sign(u_i) so that amplitudes far below
/// the double range survive.
struct LogVector {
  std::vector<double> log_abs;
  std::vector<int> sign;
  std::size_t twist = 0;  // index where the factorization was twisted, u = 1
};

/// One inverse-iteration step from the best twisted factorization of
/// T - lambda, which is the eigenvector when lambda is accurate.
LogVector eigenvector(const SymTridiag& t, double lambda);

/// Dense copy normalized to unit l2 norm (entries below 1e-300 flush to 0).
std::vector<double> to_dense(const LogVector& v);

}  // namespace harperlab::tridiag
