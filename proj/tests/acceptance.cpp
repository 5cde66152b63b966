// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance               run every criterion
//   acceptance --criterion 4 run one

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "harperlab/cocycle.hpp"
#include "harperlab/cohomology.hpp"
#include "harperlab/contfrac.hpp"
#include "harperlab/frequency.hpp"
#include "harperlab/model.hpp"
#include "harperlab/spectral.hpp"
#include "harperlab/tridiag.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace harperlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (ok ? "" : "[failed] ") << what << "; ";
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

Frequency golden_frequency() { return Frequency::from_cf(contfrac::golden(60)); }

model::CouplingTriple triple(double a, double b, double c) { return {a, b, c}; }

// Lyapunov exponent at mid-spectrum against the closed formula.
void criterion_1(Outcome& o) {
  const Frequency alpha = golden_frequency();
  for (auto c : {triple(0.1, 0.5, 0.2), triple(0, 0.5, 0)}) {
    const auto t0 = Clock::now();
    const model::OperatorSample s(c, alpha, 0.0);
    const double E = spectral::mid_spectrum_energy(s, 512);
    const auto est = cocycle::lyapunov_numeric(s, E, 100000, 64, cocycle::Kind::normalized);
    const double secs = seconds_since(t0);
    const double L = cocycle::lyapunov_formula(c);
    const double rel = std::fabs(est.value - L) / L;
    o.check(rel <= 0.02, model::format_coupling(c) + ": L_num=" + fmt(est.value) + " L=" + fmt(L) +
                             " rel=" + fmt(rel, 3));
    o.check(secs < 30.0, "runtime " + fmt(secs, 3) + "s");
  }
}

// Vanishing on the boundary.
void criterion_2(Outcome& o) {
  const auto c = triple(0.25, 1, 0.25);
  const double L = cocycle::lyapunov_formula(c);
  o.check(L == 0.0, "formula=" + fmt(L, 17));
  const model::OperatorSample s(c, golden_frequency(), 0.0);
  const double E = spectral::mid_spectrum_energy(s, 512);
  const auto est = cocycle::lyapunov_numeric(s, E, 100000, 64, cocycle::Kind::normalized);
  o.check(est.value <= 0.05, "numeric=" + fmt(est.value) + " at E=" + fmt(E));
}

// Duality of spectra.
void criterion_3(Outcome& o) {
  const Frequency alpha = golden_frequency();
  const auto phases = spectral::phase_grid(32, 2024);
  const auto r = spectral::duality_check(triple(0.1, 0.5, 0.2), alpha, 1024, phases);
  o.check(r.distance <= 0.05, "hausdorff(0.1,0.5,0.2)=" + fmt(r.distance) + " (edge states dropped " +
                                  std::to_string(r.edge_dropped) + "/" + std::to_string(r.edge_dropped_dual) + ")");
  const auto self = spectral::duality_check(triple(0, 1, 0), alpha, 1024, phases);
  o.check(self.distance == 0.0, "hausdorff(0,1,0)=" + fmt(self.distance, 17));
}

// Eigenfunction decay rate.
void criterion_4(Outcome& o) {
  const Frequency alpha = golden_frequency();
  for (auto c : {triple(0, 0.4, 0), triple(0.1, 0.5, 0.2)}) {
    const auto t0 = Clock::now();
    const auto fit = spectral::decay_fit(model::OperatorSample(c, alpha, 0.25), 800);
    const double secs = seconds_since(t0);
    const double rel = std::fabs(fit.slope - fit.target) / std::fabs(fit.target);
    o.check(rel <= 0.10 && fit.r2 >= 0.95, model::format_coupling(c) + ": slope=" + fmt(fit.slope) +
                                                " target=" + fmt(fit.target) + " r2=" + fmt(fit.r2, 4));
    o.check(secs < 60.0, "runtime " + fmt(secs, 3) + "s");
  }
}

// Zero-corrected exponent against beta on a forged frequency.
void criterion_5(Outcome& o) {
  const auto cf = contfrac::forge(contfrac::golden(4), 4, contfrac::ConstantBeta{0.3}, 3);
  const auto r = spectral::delta_exponent(triple(0.25, 0.5, 0.25), cf, Rational(135, 1000), cf.depth(), 4);
  bool bound = true;
  for (const auto& l : r.per_level) bound = bound && l.delta <= l.beta + 1e-12;
  o.check(bound, "delta <= beta at all " + std::to_string(r.per_level.size()) + " levels");
  const auto& deepest = r.per_level.back();
  const double rel = std::fabs(deepest.delta - deepest.beta) / deepest.beta;
  o.check(rel <= 0.15, "level " + std::to_string(deepest.n) + ": delta=" + fmt(deepest.delta, 8) +
                           " beta=" + fmt(deepest.beta, 8) + " rel=" + fmt(rel, 3));
}

// Sturm bisection against a dense Hermitian solver.
void criterion_6(Outcome& o) {
  gen::Rng rng(6);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 8));
    const auto h = gen::hermitian_tridiag(rng, n);
    model::Truncation t{0, static_cast<long>(n) - 1, h.diag, h.off};
    const auto ours = tridiag::eigenvalues(t.gauge());
    const auto ref = oracle::dense_eigenvalues(h.diag, h.off);
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::fabs(ours[k] - ref[k]));
  }
  o.check(worst <= 1e-9, "max deviation " + fmt(worst, 3));
}

// Cohomological equation.
void criterion_7(Outcome& o) {
  const Frequency alpha = golden_frequency();
  gen::Rng rng(7);
  double worst = 0.0;
  bool blocks_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const long K = rng.integer(4, 40);
    cocycle::FourierSeries psi0(K);
    for (long k = -K; k <= K; ++k)
      if (k != 0) psi0[k] = rng.cgauss() * std::exp(-0.1 * std::labs(k));
    const auto sol = cocycle::solve_cohomological(psi0.coboundary(alpha), alpha, 3);
    for (long k = -K; k <= K; ++k) worst = std::max(worst, std::abs(sol.psi[k] - psi0[k]));
    const auto& rep = sol.report;
    blocks_ok = blocks_ok && rep.edges.low < rep.edges.high && rep.edges.high <= K;
    for (std::size_t j = 0; j < rep.weighted.size(); ++j) {
      const double sum = rep.blocks[0][j] + rep.blocks[1][j] + rep.blocks[2][j];
      blocks_ok = blocks_ok && std::fabs(sum - rep.weighted[j]) <= 1e-12 * rep.weighted[j];
    }
  }
  o.check(worst <= 1e-12, "round-trip error " + fmt(worst, 3));
  o.check(blocks_ok, "three-block split sums to the total with edges q_{n-1} < q_n <= K");
  cocycle::FourierSeries phi(4);
  phi[3] = 1.0;
  long resonant = 0;
  try {
    cocycle::solve_cohomological(phi, Frequency::from_rational(Rational(1, 3)), 1);
  } catch (const ResonantDivisor& e) {
    resonant = e.k();
  }
  o.check(resonant == 3, "alpha=1/3 raises ResonantDivisor(" + std::to_string(resonant) + ")");
}

// Rotation number.
void criterion_8(Outcome& o) {
  const Frequency alpha = golden_frequency();
  const double rho = 0.2;
  const auto r = cocycle::rotation_number_map([&](double) { return cocycle::rotation(rho); }, alpha, 100000, 0.0, 0.0);
  o.check(std::fabs(r.value - rho) <= 1e-6, "constant rotation: " + fmt(r.value, 12));

  const model::OperatorSample s(triple(0.1, 0.5, 0.2), alpha, 0.0);
  const double E = spectral::mid_spectrum_energy(s, 512);
  gen::Rng rng(8);
  std::vector<cocycle::RotationEstimate> est;
  double mean = 0.0;
  for (int i = 0; i < 8; ++i) {
    est.push_back(cocycle::rotation_number(s, E, 100000, 0.0, rng.uniform()));
    mean += est.back().lift_average / 8;
  }
  double worst = 0.0;
  for (const auto& e : est) worst = std::max(worst, std::fabs(e.lift_average - mean) / e.std_error);
  o.check(worst <= 3.0, "y0 spread: max |rho - mean| / stderr = " + fmt(worst, 3) + ", rho=" + fmt(mean));
}

// Badness.
void criterion_9(Outcome& o) {
  gen::Rng rng(9);
  double least = INFINITY;
  for (int i = 0; i < 50; ++i) {
    const auto c = gen::coupling(rng, 1.5);
    const model::OperatorSample s(c, Frequency::from_double(rng.uniform()), rng.uniform());
    const int N = static_cast<int>(rng.integer(1, 30));
    least = std::min(least, spectral::badness_scan(s, 1.0, N, 16).min_mass);
  }
  o.check(least >= 1.0, "min_mass over 50 samples " + fmt(least));

  const auto amo = triple(0, 0.5, 0);
  const auto liouville = contfrac::forge(contfrac::golden(2), 2, contfrac::ConstantBeta{1.0}, 2);
  const model::OperatorSample bad(amo, Frequency::from_cf(liouville), 0.3);
  const model::OperatorSample good(amo, golden_frequency(), 0.3);
  int first_bad = 0;
  bool golden_bounded = true;
  double golden_lo = INFINITY, golden_hi = 0.0;
  std::string trace;
  for (int N : {10, 20, 40, 80, 160, 240}) {
    const auto rb = spectral::badness_scan(bad, 3.0, N);
    const auto rg = spectral::badness_scan(good, 3.0, N);
    if (rb.bad && first_bad == 0) first_bad = N;
    golden_bounded = golden_bounded && !rg.bad;
    golden_lo = std::min(golden_lo, rg.min_mass);
    golden_hi = std::max(golden_hi, rg.min_mass);
    trace += " N=" + std::to_string(N) + ":" + fmt(rb.min_mass, 4) + "/" + fmt(rg.min_mass, 4);
  }
  o.check(first_bad > 0, "beta=1 becomes (3,N)-bad at N=" + std::to_string(first_bad));
  o.check(golden_bounded && golden_hi <= 1.1 * golden_lo,
          "golden stays not_bad with min_mass in [" + fmt(golden_lo, 4) + ", " + fmt(golden_hi, 4) + "]");
  o.detail << "min_mass beta=1/golden:" << trace << "; ";
}

// Perturbation scaling.
void criterion_10(Outcome& o) {
  const auto c = triple(0.1, 0.5, 0.2);
  const Frequency alpha = golden_frequency();
  std::vector<double> eps, dev;
  for (double e : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    const auto r = spectral::perturbation_experiment(c, alpha, Frequency::from_double(alpha.value() + e), 0.135, 20, 10);
    eps.push_back(e);
    dev.push_back(r.solution_deviation);
  }
  const auto fit = spectral::fit_power_law(eps, dev);
  o.check(fit.exponent >= 0.4 && fit.exponent <= 0.6,
          "fitted exponent " + fmt(fit.exponent, 4) + " (r2=" + fmt(fit.r2, 4) + ")");
}

// Continued-fraction exactness.
void criterion_11(Outcome& o) {
  std::vector<contfrac::ContinuedFraction> cfs{contfrac::golden(25), contfrac::silver(16)};
  gen::Rng rng(11);
  for (int i = 0; i < 6; ++i) {
    std::vector<BigInt> d;
    for (int j = 0; j < 12; ++j) d.emplace_back(rng.integer(1, 9));
    cfs.emplace_back(std::move(d), contfrac::Origin{});
  }
  bool recur = true, bracket = true, best = true;
  long checked = 0;
  for (const auto& cf : cfs) {
    const Rational alpha = cf.value();
    for (std::size_t n = 1; n <= cf.depth(); ++n) {
      const BigInt pm2 = n >= 2 ? cf.p(n - 2) : BigInt(1);
      const BigInt qm2 = n >= 2 ? cf.q(n - 2) : BigInt(0);
      recur = recur && cf.p(n) == cf.digit(n) * cf.p(n - 1) + pm2 && cf.q(n) == cf.digit(n) * cf.q(n - 1) + qm2;
      BigInt g;
      mpz_gcd(g.get_mpz_t(), cf.p(n).get_mpz_t(), cf.q(n).get_mpz_t());
      recur = recur && g == 1 && (n < 2 || cf.q(n) > cf.q(n - 1));
    }
    for (std::size_t n = 1; n + 2 <= cf.depth(); ++n) {
      const mpq_class norm = oracle::torus_norm(mpq_class(cf.q(n)) * alpha);
      bracket = bracket && norm <= mpq_class(1, 1) / cf.q(n + 1) && norm >= mpq_class(1, 1) / (2 * cf.q(n + 1));
      if (cf.q(n + 1) > 100000) continue;
      for (long k = cf.q(n).get_si(); k < cf.q(n + 1).get_si(); ++k) {
        best = best && norm <= oracle::torus_norm(mpq_class(k) * alpha);
        ++checked;
      }
    }
  }
  o.check(recur, "recurrences, gcd and monotone q");
  o.check(bracket, "||q_n alpha|| in [1/(2q_{n+1}), 1/q_{n+1}]");
  o.check(best, "best approximation over " + std::to_string(checked) + " k");
}

// Commutant rigidity.
void criterion_12(Outcome& o) {
  const auto alpha = contfrac::golden(40);
  const auto rho = contfrac::Phase::constant(Rational(1, 4));
  const auto dc = contfrac::dc_alpha_membership(rho, alpha, 2.0, 0.05, 1000);
  o.check(dc.holds(), "rho=1/4 in DC_alpha(2, 0.05) up to |k|<=1000");
  const auto r = cocycle::commutant_rigidity_check(rho, alpha, 1000, 2.0, 0.05);
  o.check(r.killed == 3 * 2000 + 2 && r.free_modes.size() == 1,
          "killed " + std::to_string(r.killed) + " modes, " + std::to_string(r.free_modes.size()) +
              " free, min divisor/floor " + fmt(r.min_ratio, 4));
  long k = 0;
  try {
    cocycle::commutant_rigidity_check(contfrac::Phase{Rational(0), Rational(1, 2)}, alpha, 1000, 2.0, 0.05);
  } catch (const DivisorFloorViolated& e) {
    k = e.k();
  }
  o.check(k == 1, "rho=alpha/2 violates the floor at k=" + std::to_string(k));
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<void(Outcome&)>> criteria{
      {1, criterion_1}, {2, criterion_2},   {3, criterion_3},   {4, criterion_4},
      {5, criterion_5}, {6, criterion_6},   {7, criterion_7},   {8, criterion_8},
      {9, criterion_9}, {10, criterion_10}, {11, criterion_11}, {12, criterion_12}};
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);

  bool all = true;
  for (const auto& [id, run] : criteria) {
    if (only != 0 && id != only) continue;
    Outcome o;
    try {
      run(o);
    } catch (const Error& e) {
      o.pass = false;
      o.detail << "raised " << e.name() << ": " << e.what();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "raised " << e.what();
    }
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
