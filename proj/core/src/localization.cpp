#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "harperlab/spectral.hpp"

namespace harperlab::spectral {

RegularityResult regularity_test(const model::OperatorSample& s, double E, long y, double m, long k) {
  if (k < 9) throw InvalidArgument("regularity needs k >= 9");
  const long d = (k + 8) / 9;
  RegularityResult r;
  for (long x1 = y + d - k + 1; x1 <= y - d; ++x1) {
    const long x2 = x1 + k - 1;
    ++r.windows_tested;
    const model::Truncation t = model::build_truncation(s, x1, x2);
    model::EdgeGreen g{};
    try {
      g = model::green_edges(t, E, y);
    } catch (const ResolventSingular&) {
      ++r.windows_skipped;
      std::ostringstream os;
      os << "window [" << x1 << ", " << x2 << "] skipped: E is within the guard of an eigenvalue";
      r.log.push_back(os.str());
      continue;
    }
    if (std::abs(g.left) < std::exp(-m * static_cast<double>(y - x1)) &&
        std::abs(g.right) < std::exp(-m * static_cast<double>(x2 - y))) {
      r.regular = true;
      r.x1 = x1;
      r.x2 = x2;
      return r;
    }
  }
  return r;
}

namespace {

double log_sum_exp2(double a, double b) {
  // (1/2) ln(e^{2a} + e^{2b})
  const double hi = std::max(a, b);
  if (!std::isfinite(hi)) return hi;
  return hi + 0.5 * std::log1p(std::exp(2.0 * (std::min(a, b) - hi)));
}

}  // namespace

DecayFit decay_fit(const model::OperatorSample& s, std::size_t size, std::optional<std::size_t> which) {
  if (size < 30) throw InvalidArgument("decay fit needs a truncation of at least 30 sites");
  const long x1 = -static_cast<long>(size / 2);
  const long x2 = x1 + static_cast<long>(size) - 1;
  const tridiag::SymTridiag t = model::build_truncation(s, x1, x2).gauge();
  const std::vector<double> eig = tridiag::eigenvalues(t, 0.0);

  std::size_t index = 0;
  tridiag::LogVector vec;
  if (which) {
    if (*which >= size) throw InvalidArgument("eigenvector index out of range");
    index = *which;
    vec = tridiag::eigenvector(t, eig[index]);
  } else {
    double best = -1.0;
    for (std::size_t i = 0; i < eig.size(); ++i) {
      tridiag::LogVector v = tridiag::eigenvector(t, eig[i]);
      double middle = 0.0;
      for (std::size_t j = size / 3; j < 2 * size / 3; ++j) middle += std::exp(2.0 * v.log_abs[j]);
      if (middle > best) {
        best = middle;
        index = i;
        vec = std::move(v);
      }
    }
  }

  const auto peak_it = std::max_element(vec.log_abs.begin(), vec.log_abs.end());
  const long peak = x1 + static_cast<long>(peak_it - vec.log_abs.begin());
  const std::size_t margin = size / 10;
  constexpr long kCore = 3;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t count = 0;
  long dmin = std::numeric_limits<long>::max(), dmax = 0;
  for (std::size_t j = margin; j + 1 < size - margin; ++j) {
    const long n = x1 + static_cast<long>(j);
    const long dist = std::labs(n - peak);
    if (dist < kCore) continue;
    const double yv = log_sum_exp2(vec.log_abs[j], vec.log_abs[j + 1]);
    if (!std::isfinite(yv)) continue;
    const double xv = static_cast<double>(dist);
    sx += xv;
    sy += yv;
    sxx += xv * xv;
    sxy += xv * yv;
    syy += yv * yv;
    ++count;
    dmin = std::min(dmin, dist);
    dmax = std::max(dmax, dist);
  }
  if (count < 3) throw InvalidArgument("fit window is too small");
  const double n = static_cast<double>(count);
  const double cov = sxy - sx * sy / n;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;

  DecayFit fit;
  fit.eigenvalue = eig[index];
  fit.index = index;
  fit.peak = peak;
  fit.fit_min = dmin;
  fit.fit_max = dmax;
  fit.points = count;
  fit.slope = cov / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = vy > 0 ? cov * cov / (vx * vy) : 0.0;
  fit.target = -cocycle::lyapunov_formula(s.coupling());
  if (fit.r2 < 0.9) throw PoorlyLocalized(fit.r2, fit.slope);
  return fit;
}

}  // namespace harperlab::spectral
