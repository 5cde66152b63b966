#include "harperlab/cocycle.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "harperlab/parallel.hpp"

namespace harperlab::cocycle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kRescaleThreshold = std::exp(60.0);  // squared Frobenius bound for e^30

void check_point(const model::OperatorSample& s, double phase, double guard) {
  const double d = s.distance_to_zero(phase);
  if (d < guard) throw SingularSamplingPoint(phase, d);
}

template <typename M>
void rescale(M& m, double& log_scale) {
  if (m.squaredNorm() > kRescaleThreshold) {
    const double nrm = op_norm(m);
    m /= nrm;
    log_scale += std::log(nrm);
  }
}

struct BatchStats {
  double std_error;
  bool slow_decay;
};

// Increments arrive in 128 equal batches; the error of the full run is read
// off 32 merged batches and compared against the first quarter of the run.
BatchStats batch_statistics(const std::vector<double>& small_batch_sums, long batch_len, long n) {
  auto spread = [](const std::vector<double>& means) {
    const double k = static_cast<double>(means.size());
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= k;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= (k - 1.0);
    return std::sqrt(var / k);
  };
  const double floor = 1.0 / static_cast<double>(n);
  if (batch_len == 0) return {floor, false};
  std::vector<double> full(32), quarter(32);
  for (std::size_t b = 0; b < 32; ++b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) sum += small_batch_sums[4 * b + i];
    full[b] = sum / static_cast<double>(4 * batch_len);
    quarter[b] = small_batch_sums[b] / static_cast<double>(batch_len);
  }
  const double se_full = spread(full);
  const double se_quarter = spread(quarter);
  const bool slow = se_full > floor && se_full > 0.75 * se_quarter;
  return {std::max(se_full, floor), slow};
}

template <typename Step>
RotationEstimate run_rotation(long n_steps, double y0, Step&& step) {
  if (n_steps < 1) throw InvalidArgument("rotation number needs n_steps >= 1");
  const long batch_len = n_steps / 128;
  std::vector<double> sums(128, 0.0);
  double y = y0;
  for (long k = 0; k < n_steps; ++k) {
    const double inc = step(k, y);
    y += inc;
    if (batch_len > 0 && k < 128 * batch_len) sums[static_cast<std::size_t>(k / batch_len)] += inc;
  }
  RotationEstimate r;
  r.n_steps = n_steps;
  r.lift_average = (y - y0) / static_cast<double>(n_steps);
  r.value = wrap01(r.lift_average);
  const BatchStats st = batch_statistics(sums, batch_len, n_steps);
  r.std_error = st.std_error;
  r.slow_decay = st.slow_decay;
  if (st.slow_decay) r.warning = "rotation-number error does not decay like n^{-1/2}; fiber dynamics may not be uniquely ergodic";
  return r;
}

}  // namespace

const char* to_string(Kind k) { return k == Kind::raw ? "raw" : "normalized"; }

double op_norm(const Matrix2c& m) {
  const double f2 = m.squaredNorm();
  const double det = std::abs(m.determinant());
  const double disc = std::max(0.0, f2 * f2 - 4.0 * det * det);
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

double op_norm(const Matrix2r& m) {
  const double f2 = m.squaredNorm();
  const double det = std::fabs(m.determinant());
  const double disc = std::max(0.0, f2 * f2 - 4.0 * det * det);
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

Matrix2c transfer_raw(const model::OperatorSample& s, double E, double phase) {
  const cplx c = s.c(phase);
  if (std::abs(c) == 0.0) throw SingularSamplingPoint(phase, s.distance_to_zero(phase));
  const double prev = wrap01(phase - s.alpha().value());
  Matrix2c m;
  m << E - model::OperatorSample::potential(phase), -std::conj(s.c(prev)), c, 0.0;
  return m / c;
}

Matrix2r transfer_normalized(const model::OperatorSample& s, double E, double phase) {
  const double here = s.abs_c(phase);
  const double prev = s.abs_c(wrap01(phase - s.alpha().value()));
  if (here == 0.0 || prev == 0.0) throw SingularSamplingPoint(phase, s.distance_to_zero(phase));
  Matrix2r m;
  m << E - model::OperatorSample::potential(phase), -prev, here, 0.0;
  return m / std::sqrt(here * prev);
}

Product n_step(const model::OperatorSample& s, double E, double theta, long n, Kind kind, double guard) {
  if (n < 0) throw InvalidArgument("n_step needs n >= 0");
  Product out;
  if (n == 0) return out;
  const Frequency& alpha = s.alpha();
  if (kind == Kind::raw) {
    Matrix2c m = Matrix2c::Identity();
    for (long k = 0; k < n; ++k) {
      const double x = alpha.orbit_point(theta, k);
      check_point(s, x, guard);
      m = transfer_raw(s, E, x) * m;
      rescale(m, out.log_scale);
    }
    out.matrix = m;
    return out;
  }
  Matrix2r m = Matrix2r::Identity();
  check_point(s, alpha.orbit_point(theta, -1), guard);
  double prev_abs = s.abs_c(alpha.orbit_point(theta, -1));
  for (long k = 0; k < n; ++k) {
    const double x = alpha.orbit_point(theta, k);
    check_point(s, x, guard);
    const double here = s.abs_c(x);
    const double scale = 1.0 / std::sqrt(here * prev_abs);
    const double a = (E - model::OperatorSample::potential(x)) * scale;
    const double b = -prev_abs * scale;
    const double c = here * scale;
    // [[a, b], [c, 0]] * m
    const double m00 = a * m(0, 0) + b * m(1, 0);
    const double m01 = a * m(0, 1) + b * m(1, 1);
    m(1, 0) = c * m(0, 0);
    m(1, 1) = c * m(0, 1);
    m(0, 0) = m00;
    m(0, 1) = m01;
    rescale(m, out.log_scale);
    prev_abs = here;
  }
  out.matrix = m.cast<cplx>();
  return out;
}

double lyapunov_formula(const model::CouplingTriple& c) {
  if (model::classify(c).kind != model::RegionKind::I_interior) return 0.0;
  const double p = c.lambda1 * c.lambda3;
  const double M = std::max(c.lambda1 + c.lambda3, c.lambda2);
  return std::log((1.0 + std::sqrt(1.0 - 4.0 * p)) / (M + std::sqrt(M * M - 4.0 * p)));
}

LyapunovEstimate lyapunov_numeric(const model::OperatorSample& s, double E, long n_steps, int theta_grid, Kind kind,
                                  double zero_guard, unsigned threads) {
  if (n_steps < 1) throw InvalidArgument("n_steps must be positive");
  if (theta_grid < 1) throw InvalidArgument("theta_grid must be positive");
  const auto g = static_cast<std::size_t>(theta_grid);
  std::vector<double> values(g, 0.0);
  std::vector<char> kept(g, 0);
  parallel_for(g, threads, [&](std::size_t j) {
    const double theta = wrap01(s.theta() + static_cast<double>(j) / theta_grid);
    if (kind == Kind::raw && s.distance_to_zero(theta) < zero_guard) return;
    try {
      values[j] = n_step(s, E, theta, n_steps, kind).log_norm() / static_cast<double>(n_steps);
      kept[j] = 1;
    } catch (const SingularSamplingPoint&) {
    }
  });

  LyapunovEstimate est;
  est.n_steps = n_steps;
  est.theta_grid = theta_grid;
  est.kind = kind;
  double sum = 0.0;
  int count = 0;
  for (std::size_t j = 0; j < g; ++j) {
    if (!kept[j]) continue;
    sum += values[j];
    ++count;
  }
  est.excluded = theta_grid - count;
  est.excluded_fraction = static_cast<double>(est.excluded) / theta_grid;
  est.flagged = est.excluded_fraction >= 0.01;
  if (est.excluded_fraction > 0.1) throw TooManyExclusions(est.excluded_fraction);
  est.value = sum / count;
  double var = 0.0;
  for (std::size_t j = 0; j < g; ++j)
    if (kept[j]) var += (values[j] - est.value) * (values[j] - est.value);
  est.std_error = count > 1 ? std::sqrt(var / (count - 1)) / std::sqrt(static_cast<double>(count)) : 0.0;
  return est;
}

RotationEstimate rotation_number(const model::OperatorSample& s, double E, long n_steps, double theta0, double y0) {
  const Frequency& alpha = s.alpha();
  check_point(s, alpha.orbit_point(theta0, -1), kOrbitGuard);
  double prev_abs = s.abs_c(alpha.orbit_point(theta0, -1));
  return run_rotation(n_steps, y0, [&](long k, double y) {
    const double x = alpha.orbit_point(theta0, k);
    check_point(s, x, kOrbitGuard);
    const double here = s.abs_c(x);
    // The positive scalar normalization does not move directions.
    const double a = E - model::OperatorSample::potential(x);
    const double ang = kTwoPi * y;
    const double vx = std::cos(ang);
    const double vy = std::sin(ang);
    const double wx = a * vx - prev_abs * vy;
    const double wy = here * vx;
    prev_abs = here;
    const double image = std::atan2(wy, wx) / kTwoPi;
    const double y_red = y - std::floor(y + 0.25);  // in [-1/4, 3/4)
    const double center = y_red < 0.25 ? 0.25 : 0.75;
    const double lifted = image + std::round(center - image);
    return lifted - y_red;
  });
}

RotationEstimate rotation_number_map(const std::function<Matrix2r(double)>& map, const Frequency& alpha,
                                     long n_steps, double theta0, double y0) {
  return run_rotation(n_steps, y0, [&](long k, double y) {
    const Matrix2r m = map(alpha.orbit_point(theta0, k));
    const double ang = kTwoPi * y;
    const Eigen::Vector2d w = m * Eigen::Vector2d(std::cos(ang), std::sin(ang));
    double inc = std::atan2(w(1), w(0)) / kTwoPi - wrap01(y);
    inc -= std::round(inc);
    if (std::fabs(0.5 - std::fabs(inc)) < 1e-9) throw BranchAmbiguity(k, inc);
    return inc;
  });
}

double polar_angle(const Matrix2r& m) { return std::atan2(m(1, 0) - m(0, 1), m(0, 0) + m(1, 1)); }

int degree_on_grid(const std::function<Matrix2r(double)>& map, int grid) {
  if (grid < 2) throw InvalidArgument("degree needs a grid of at least 2 points");
  double total = 0.0;
  double prev = polar_angle(map(0.0));
  for (int j = 1; j <= grid; ++j) {
    const double cur = polar_angle(map(static_cast<double>(j) / grid));
    double step = cur - prev;
    step -= std::numbers::pi * std::round(step / std::numbers::pi);
    if (std::fabs(step) >= 0.5 * std::numbers::pi * (1.0 - 1e-12)) throw GridTooCoarse(grid);
    total += step;
    prev = cur;
  }
  const double turns = total / std::numbers::pi;
  const double rounded = std::round(turns);
  if (std::fabs(turns - rounded) > 0.25) throw GridTooCoarse(grid);
  return static_cast<int>(rounded);
}

int degree(const std::function<Matrix2r(double)>& map, int grid, int max_grid) {
  std::optional<int> previous;
  for (int g = std::max(grid, 2); g <= max_grid; g *= 2) {
    std::optional<int> current;
    try {
      current = degree_on_grid(map, g);
    } catch (const GridTooCoarse&) {
    }
    if (current && previous && *current == *previous) return *current;
    previous = current;
  }
  throw GridTooCoarse(max_grid);
}

double conjugation_residual(const std::function<Matrix2c(double)>& B, const std::function<Matrix2c(double)>& A1,
                            const std::function<Matrix2c(double)>& A2, const Frequency& alpha, int grid) {
  if (grid < 1) throw InvalidArgument("grid must be positive");
  double worst = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double x = static_cast<double>(j) / grid;
    const Matrix2c lhs = B(alpha.orbit_point(x, 1)) * A1(x) * B(x).inverse();
    worst = std::max(worst, op_norm(Matrix2c(lhs - A2(x))));
  }
  return worst;
}

Matrix2r rotation(double t) {
  const double c = std::cos(kTwoPi * t);
  const double s = std::sin(kTwoPi * t);
  Matrix2r m;
  m << c, -s, s, c;
  return m;
}

}  // namespace harperlab::cocycle
