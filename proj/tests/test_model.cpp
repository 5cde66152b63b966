#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "harperlab/model.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace harperlab;
using namespace harperlab::model;

namespace {

OperatorSample sample(const CouplingTriple& c, double alpha, double theta) {
  return OperatorSample(c, Frequency::from_double(alpha), theta);
}

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

}  // namespace

TEST(Classify, Examples) {
  EXPECT_EQ(classify({0.1, 0.5, 0.2}).kind, RegionKind::I_interior);
  EXPECT_EQ(classify({0.25, 0.5, 0.25}).kind, RegionKind::I_interior);
  EXPECT_TRUE(classify({0.25, 0.5, 0.25}).isotropic);
  const RegionTag t = classify({0.5, 0.5, 0.5});
  EXPECT_EQ(t.kind, RegionKind::line_I);
  EXPECT_FALSE(t.interior());
  EXPECT_EQ(t.name(), "L_I");
}

TEST(Classify, RegionsAndLines) {
  EXPECT_EQ(classify({0.4, 2.0, 0.2}).kind, RegionKind::II_interior);
  EXPECT_EQ(classify({1.0, 0.5, 1.0}).kind, RegionKind::III_isotropic);
  EXPECT_EQ(classify({1.0, 0.5, 2.0}).kind, RegionKind::III_anisotropic);
  EXPECT_EQ(classify({0.2, 1.0, 0.3}).kind, RegionKind::line_II);
  EXPECT_EQ(classify({0.5, 1.0, 0.5}).kind, RegionKind::line_II);
  EXPECT_EQ(classify({1.0, 2.0, 1.0}).kind, RegionKind::line_III);
  EXPECT_EQ(classify({0.3, 0.0, 0.2}).kind, RegionKind::lambda2_zero);
}

TEST(Classify, BoundaryToleranceIsAbsolute) {
  EXPECT_EQ(classify({0.3, 0.5, 0.7 + 5e-13}).kind, RegionKind::line_I);
  EXPECT_EQ(classify({0.3, 0.5, 0.7 - 1e-9}).kind, RegionKind::I_interior);
}

TEST(Coupling, ValidationAndParsing) {
  EXPECT_THROW(validate({-0.1, 0.5, 0.2}), InvalidCoupling);
  EXPECT_THROW(validate({0, 0, 0}), InvalidCoupling);
  EXPECT_THROW(validate({NAN, 0.5, 0.2}), InvalidCoupling);
  EXPECT_EQ(parse_coupling("0.1,0.5,0.2"), (CouplingTriple{0.1, 0.5, 0.2}));
  EXPECT_THROW(parse_coupling("0.1,0.5"), InvalidCoupling);
  EXPECT_THROW(parse_coupling("0.1,x,0.2"), InvalidCoupling);
  EXPECT_EQ(format_coupling({0.1, 0.5, 0.2}), "0.1,0.5,0.2");
  gen::Rng r(7);
  for (int i = 0; i < 100; ++i) {
    const CouplingTriple c = gen::coupling(r);
    EXPECT_EQ(parse_coupling(format_coupling(c)), c);
  }
}

TEST(Duality, ExampleAndErrors) {
  const CouplingTriple d = duality({0.1, 0.5, 0.2});
  EXPECT_DOUBLE_EQ(d.lambda1, 0.4);
  EXPECT_DOUBLE_EQ(d.lambda2, 2.0);
  EXPECT_DOUBLE_EQ(d.lambda3, 0.2);
  EXPECT_EQ(duality({0, 1, 0}), (CouplingTriple{0, 1, 0}));
  EXPECT_THROW(duality({0.3, 0.0, 0.2}), Lambda2Zero);
}

TEST(Duality, IsAnInvolution) {
  gen::Rng r(11);
  for (int i = 0; i < 200; ++i) {
    const CouplingTriple c = gen::coupling(r);
    const CouplingTriple back = duality(duality(c));
    EXPECT_NEAR(back.lambda1, c.lambda1, 1e-12 * (1 + c.lambda1));
    EXPECT_NEAR(back.lambda2, c.lambda2, 1e-12 * (1 + c.lambda2));
    EXPECT_NEAR(back.lambda3, c.lambda3, 1e-12 * (1 + c.lambda3));
  }
}

TEST(Duality, MapsRegions) {
  gen::Rng r(12);
  for (int i = 0; i < 200; ++i) {
    const CouplingTriple c = gen::region_one(r);
    ASSERT_EQ(classify(c).kind, RegionKind::I_interior);
    EXPECT_EQ(classify(duality(c)).kind, RegionKind::II_interior);
  }
  for (int i = 0; i < 200; ++i) {
    const double a = r.uniform(0, 1);
    const CouplingTriple on_line_one{a, r.uniform(0.05, 0.99), 1.0 - a};
    ASSERT_EQ(classify(on_line_one).kind, RegionKind::line_I);
    EXPECT_EQ(classify(duality(on_line_one)).kind, RegionKind::line_III);
    const double b = r.uniform(0, 0.99);
    const double w = r.uniform(0, 1);
    const CouplingTriple on_line_two{b * w, 1.0, b * (1 - w)};
    ASSERT_EQ(classify(on_line_two).kind, RegionKind::line_II);
    EXPECT_EQ(classify(duality(on_line_two)).kind, RegionKind::line_II);
  }
}

TEST(Zeros, Examples) {
  EXPECT_EQ(c_zeros({0.1, 0.7, 0.2}).kind, ZeroKind::none);
  const ZeroSet both = c_zeros({0.25, 0.5, 0.25});
  EXPECT_EQ(both.kind, ZeroKind::double_zero);
  EXPECT_EQ(both.offsets, std::vector<double>{0.5});
  const ZeroSet one = c_zeros({0.2, 0.5, 0.3});
  ASSERT_EQ(one.kind, ZeroKind::single);
  EXPECT_EQ(one.offsets, std::vector<double>{0.5});
  const ZeroSet pair = c_zeros({0.5, 0.5, 0.5});
  ASSERT_EQ(pair.kind, ZeroKind::pair);
  EXPECT_NEAR(pair.offsets[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(pair.offsets[1], 2.0 / 3.0, 1e-15);
}

TEST(Zeros, VanishAtReportedPhases) {
  gen::Rng r(21);
  auto check = [&](const CouplingTriple& c, ZeroKind expected) {
    const ZeroSet z = c_zeros(c);
    ASSERT_EQ(z.kind, expected) << format_coupling(c);
    const double alpha = r.uniform(0.01, 0.99);
    const OperatorSample s = sample(c, alpha, 0.0);
    for (double offset : z.offsets) {
      const double phase = offset - alpha / 2;
      EXPECT_LT(std::abs(oracle::hop(c, alpha, phase)), 1e-10);
      EXPECT_LT(s.abs_c(phase), 1e-10);
      EXPECT_LT(s.distance_to_zero(phase), 1e-12);
    }
  };
  for (int i = 0; i < 100; ++i) {
    const double a = r.uniform(0.01, 1), b = r.uniform(0.01, 1);
    if (std::fabs(a - b) < 1e-6) continue;
    check({a, a + b, b}, ZeroKind::single);
  }
  for (int i = 0; i < 100; ++i) {
    const double a = r.uniform(0.05, 1);
    check({a, r.uniform(0.01, 1.98 * a), a}, ZeroKind::pair);
  }
  for (int i = 0; i < 100; ++i) {
    const double a = r.uniform(0.05, 1);
    check({a, 2 * a, a}, ZeroKind::double_zero);
  }
}

TEST(Zeros, HighPrecisionOffsetsMatchDoubles) {
  const CouplingTriple c{0.5, 0.3, 0.5};
  const auto mp = zero_offsets_mp(c, 256);
  const ZeroSet z = c_zeros(c);
  ASSERT_EQ(mp.size(), 2u);
  EXPECT_NEAR(mpfr_get_d(mp[0].get(), MPFR_RNDN), z.offsets[0], 1e-15);
  EXPECT_NEAR(mpfr_get_d(mp[1].get(), MPFR_RNDN), z.offsets[1], 1e-15);
}

TEST(Hopping, TildeIsConjugateAndMatchesDefinition) {
  gen::Rng r(31);
  for (int trial = 0; trial < 5; ++trial) {
    const CouplingTriple c = gen::coupling(r);
    const double alpha = r.uniform(0, 1);
    const OperatorSample s = sample(c, alpha, 0.0);
    for (int i = 0; i < 10000; ++i) {
      const double phase = i / 10000.0;
      const cplx v = s.c(phase);
      EXPECT_LT(std::abs(s.c_tilde(phase) - std::conj(v)), 1e-12);
      EXPECT_LT(std::abs(v - oracle::hop(c, alpha, phase)), 1e-12);
      EXPECT_LT(std::abs(s.c_tilde(phase) - oracle::hop_tilde(c, alpha, phase)), 1e-12);
      EXPECT_NEAR(s.abs_c(phase), std::abs(v), 1e-12);
    }
  }
}

TEST(Admissibility, NoZerosAlwaysQualifies) {
  for (double t : {0.0, 0.25, 0.5})
    EXPECT_EQ(theta_admissible({0.1, 0.7, 0.2}, contfrac::RealInterval::point(exact_rational(t)), 20, 1e-2).verdict,
              Admissibility::in_Theta);
}

TEST(Admissibility, GoldenDoubledPhaseQualifies) {
  const auto g = contfrac::golden_interval(200);
  const contfrac::RealInterval theta{g.lo / 2, g.hi / 2};
  const auto report = theta_admissible({0.25, 0.5, 0.25}, theta, 40, 1e-2);
  EXPECT_EQ(report.verdict, Admissibility::in_Theta) << report.note;
  ASSERT_EQ(report.exponents.size(), 1u);
}

TEST(Admissibility, ForgedDoubledPhaseIsOut) {
  const auto forged = contfrac::forge(contfrac::golden(11), 11, contfrac::ConstantBeta{0.5}, 1);
  std::vector<BigInt> digits = forged.digits();
  for (int i = 0; i < 30; ++i) digits.emplace_back(1);
  const contfrac::ContinuedFraction tail(std::move(digits), contfrac::Origin{});
  const auto theta = contfrac::RealInterval::point(tail.value() / 2);
  const auto report = theta_admissible({0.25, 0.5, 0.25}, theta, forged.depth(), 1e-2);
  EXPECT_EQ(report.verdict, Admissibility::out);
  ASSERT_EQ(report.exponents.size(), 1u);
  EXPECT_GT(report.exponents[0].beta_estimate, 0.4);
}

TEST(Admissibility, RationalShiftAndDoubleZero) {
  EXPECT_EQ(theta_admissible({0.2, 0.5, 0.3}, contfrac::RealInterval::point(Rational(1, 6)), 10, 1e-2).verdict,
            Admissibility::out);
  EXPECT_EQ(theta_admissible({0.25, 0.5, 0.25}, contfrac::RealInterval::point(Rational(0)), 10, 1e-2).verdict,
            Admissibility::out);
  const auto g = contfrac::golden_interval(200);
  const auto both = theta_admissible({0.5, 1.0, 0.5}, {g.lo / 2, g.hi / 2}, 40, 1e-2);
  EXPECT_EQ(both.verdict, Admissibility::in_Theta);
  EXPECT_NE(both.note.find("double zero"), std::string::npos);
  EXPECT_THROW(theta_admissible({0.5, 1.0, 0.5}, contfrac::RealInterval::point(Rational(1, 7)), 1, 1e-2),
               InvalidArgument);
}

TEST(Admissibility, PairCaseTestsBothShifts) {
  const auto g = contfrac::golden_interval(300);
  const contfrac::RealInterval theta{g.lo / 3, g.hi / 3};
  const auto report = theta_admissible({0.5, 0.5, 0.5}, theta, 30, 0.5);
  EXPECT_EQ(report.exponents.size(), 2u) << report.note;
}

TEST(Truncation, SmallWindows) {
  const OperatorSample s = sample({0.1, 0.5, 0.2}, kGolden, 0.3);
  const Truncation one = build_truncation(s, 0, 0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one.diag[0], 2 * std::cos(2 * std::numbers::pi * 0.3), 1e-15);
  EXPECT_TRUE(one.offdiag.empty());
  const Truncation two = build_truncation(s, 0, 1);
  ASSERT_EQ(two.offdiag.size(), 1u);
  EXPECT_LT(std::abs(two.offdiag[0] - oracle::hop(s.coupling(), kGolden, 0.3)), 1e-14);
  EXPECT_NEAR(two.diag[1], 2 * std::cos(2 * std::numbers::pi * (0.3 + kGolden)), 1e-14);
  EXPECT_THROW(build_truncation(s, 3, 2), WindowEmpty);
}

TEST(Truncation, SpectrumIsRealAndGaugeInvariant) {
  gen::Rng r(41);
  for (int trial = 0; trial < 20; ++trial) {
    const OperatorSample s = sample(gen::coupling(r), r.uniform(0, 1), r.uniform(0, 1));
    const long x1 = r.integer(-20, 20);
    const Truncation t = build_truncation(s, x1, x1 + r.integer(0, 15));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> general(oracle::dense(t.diag, t.offdiag), false);
    for (const auto& ev : general.eigenvalues()) EXPECT_LT(std::fabs(ev.imag()), 1e-10);
    const auto dense = oracle::dense_eigenvalues(t.diag, t.offdiag);
    const auto gauged = tridiag::eigenvalues(t.gauge(), 0.0);
    ASSERT_EQ(dense.size(), gauged.size());
    for (std::size_t i = 0; i < dense.size(); ++i) EXPECT_NEAR(dense[i], gauged[i], 1e-10);
  }
}

TEST(Green, SingleSiteIsScalarInverse) {
  const OperatorSample s = sample({0.1, 0.5, 0.2}, kGolden, 0.3);
  const Truncation t = build_truncation(s, 4, 4);
  const double E = 0.2;
  const cplx g = green_function(t, E, 4, 4);
  EXPECT_NEAR(g.real(), 1.0 / (2 * std::cos(2 * std::numbers::pi * s.phase(4)) - E), 1e-14);
  EXPECT_EQ(g.imag(), 0.0);
}

TEST(Green, MatchesDenseInverse) {
  gen::Rng r(51);
  for (int trial = 0; trial < 50; ++trial) {
    const OperatorSample s = sample(gen::coupling(r), r.uniform(0, 1), r.uniform(0, 1));
    const long x1 = r.integer(-10, 10);
    const Truncation t = build_truncation(s, x1, x1 + 5);
    const double E = r.uniform(-3, 3);
    const Eigen::MatrixXcd G = oracle::dense_resolvent(t.diag, t.offdiag, E);
    const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
    for (long x = t.x1; x <= t.x2; ++x) {
      const EdgeGreen edges = green_edges(t, E, x);
      EXPECT_LT(std::abs(edges.left - G(x - t.x1, 0)), 1e-10 * scale);
      EXPECT_LT(std::abs(edges.right - G(x - t.x1, 5)), 1e-10 * scale);
      for (long y = t.x1; y <= t.x2; ++y) {
        const cplx g = green_function(t, E, x, y);
        EXPECT_LT(std::abs(g - G(x - t.x1, y - t.x1)), 1e-10 * scale);
        EXPECT_LT(std::abs(g - std::conj(green_function(t, E, y, x))), 1e-10 * scale);
      }
    }
  }
}

TEST(Green, EigenvalueEnergyIsSingular) {
  const OperatorSample s = sample({0.1, 0.5, 0.2}, kGolden, 0.3);
  const Truncation t = build_truncation(s, -10, 10);
  const double E = tridiag::eigenvalue(t.gauge(), 7);
  EXPECT_THROW(green_function(t, E, 0, 0), ResolventSingular);
  EXPECT_THROW(green_edges(t, E, 0), ResolventSingular);
  EXPECT_NO_THROW(green_function(t, E + 1e-3, 0, 0));
}

TEST(Sample, OrbitAndThetaWrap) {
  const OperatorSample s = sample({0.1, 0.5, 0.2}, 0.25, 1.3);
  EXPECT_NEAR(s.theta(), 0.3, 1e-15);
  EXPECT_NEAR(s.phase(3), 0.05, 1e-15);
  EXPECT_NEAR(s.phase(-2), 0.8, 1e-15);
  EXPECT_NEAR(s.with_theta(0.6).phase(1), 0.85, 1e-15);
  EXPECT_TRUE(std::isinf(sample({0.1, 0.7, 0.2}, 0.25, 0).distance_to_zero(0.1)));
}
