#include "harperlab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "harperlab/errors.hpp"

namespace harperlab::tridiag {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min() * 16.0;

double pivot_floor(const SymTridiag& t) {
  double scale = 0.0;
  for (double d : t.diag) scale = std::max(scale, std::fabs(d));
  for (double b : t.off) scale = std::max(scale, std::fabs(b));
  return std::max(scale, 1.0) * std::numeric_limits<double>::epsilon() * 1e-3;
}

double bisect(const SymTridiag& t, std::size_t k, double lo, double hi, double tol) {
  // Invariant: count(lo) <= k < count(hi).
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || (tol > 0.0 && hi - lo <= tol)) return mid;
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
}

void locate(const SymTridiag& t, double lo, double hi, std::size_t count_lo, std::size_t count_hi, double tol,
            std::vector<double>& out) {
  if (count_hi == count_lo) return;
  if (count_hi - count_lo == 1) {
    out[count_lo] = bisect(t, count_lo, lo, hi, tol);
    return;
  }
  const double mid = 0.5 * (lo + hi);
  if (mid <= lo || mid >= hi || (tol > 0.0 && hi - lo <= tol)) {
    // Cluster narrower than the tolerance.
    for (std::size_t k = count_lo; k < count_hi; ++k) out[k] = mid;
    return;
  }
  const std::size_t count_mid = sturm_count(t, mid);
  locate(t, lo, mid, count_lo, count_mid, tol, out);
  locate(t, mid, hi, count_mid, count_hi, tol, out);
}

}  // namespace

std::size_t sturm_count(const SymTridiag& t, double x) {
  const std::size_t n = t.diag.size();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i] - x - (i == 0 ? 0.0 : b2 / q);
    if (q == 0.0) q = -kTiny;
    if (q < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin(const SymTridiag& t) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::fabs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double pad = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
  return {lo - pad, hi + pad};
}

std::vector<double> eigenvalues(const SymTridiag& t, double tol) {
  const std::size_t n = t.size();
  if (n == 0) return {};
  if (t.off.size() + 1 != n) throw InvalidArgument("off-diagonal length must be size - 1");
  const auto [lo, hi] = gershgorin(t);
  std::vector<double> out(n);
  locate(t, lo, hi, 0, n, tol, out);
  return out;
}

double eigenvalue(const SymTridiag& t, std::size_t k, double tol) {
  if (k >= t.size()) throw InvalidArgument("eigenvalue index out of range");
  const auto [lo, hi] = gershgorin(t);
  return bisect(t, k, lo, hi, tol);
}

LogVector eigenvector(const SymTridiag& t, double lambda) {
  const std::size_t n = t.size();
  if (n == 0) throw InvalidArgument("empty matrix");
  const double floor = pivot_floor(t);
  auto guard = [floor](double p) {
    if (std::fabs(p) < floor) return p < 0.0 ? -floor : floor;
    return p;
  };

  // F[i]: pivots of the leading block, B[i]: pivots of the trailing block.
  std::vector<double> F(n), B(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    F[i] = guard(t.diag[i] - lambda - (i == 0 ? 0.0 : b2 / F[i - 1]));
  }
  for (std::size_t j = n; j-- > 0;) {
    const double b2 = j + 1 == n ? 0.0 : t.off[j] * t.off[j];
    B[j] = guard(t.diag[j] - lambda - (j + 1 == n ? 0.0 : b2 / B[j + 1]));
  }
  std::size_t twist = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double gamma = t.diag[k] - lambda;
    if (k > 0) gamma -= t.off[k - 1] * t.off[k - 1] / F[k - 1];
    if (k + 1 < n) gamma -= t.off[k] * t.off[k] / B[k + 1];
    if (std::fabs(gamma) < best) {
      best = std::fabs(gamma);
      twist = k;
    }
  }

  LogVector v;
  v.log_abs.assign(n, 0.0);
  v.sign.assign(n, 1);
  v.twist = twist;
  for (std::size_t i = twist; i-- > 0;) {
    // u_i = -(b_i / F_i) u_{i+1}
    const double ratio = -t.off[i] / F[i];
    if (ratio == 0.0) {
      v.log_abs[i] = -std::numeric_limits<double>::infinity();
      v.sign[i] = 0;
    } else {
      v.log_abs[i] = v.log_abs[i + 1] + std::log(std::fabs(ratio));
      v.sign[i] = v.sign[i + 1] * (ratio < 0.0 ? -1 : 1);
    }
  }
  for (std::size_t i = twist + 1; i < n; ++i) {
    // u_i = -(b_{i-1} / B_i) u_{i-1}
    const double ratio = -t.off[i - 1] / B[i];
    if (ratio == 0.0) {
      v.log_abs[i] = -std::numeric_limits<double>::infinity();
      v.sign[i] = 0;
    } else {
      v.log_abs[i] = v.log_abs[i - 1] + std::log(std::fabs(ratio));
      v.sign[i] = v.sign[i - 1] * (ratio < 0.0 ? -1 : 1);
    }
  }
  // Normalize in log space.
  const double peak = *std::max_element(v.log_abs.begin(), v.log_abs.end());
  double sum = 0.0;
  for (double l : v.log_abs) sum += std::exp(2.0 * (l - peak));
  const double shift = peak + 0.5 * std::log(sum);
  for (double& l : v.log_abs) l -= shift;
  return v;
}

std::vector<double> to_dense(const LogVector& v) {
  std::vector<double> out(v.log_abs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double l = v.log_abs[i];
    out[i] = l < -690.0 ? 0.0 : v.sign[i] * std::exp(l);
  }
  return out;
}

}  // namespace harperlab::tridiag
