#include <gtest/gtest.h>

#include <cmath>

#include "harperlab/contfrac.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace harperlab;
using namespace harperlab::contfrac;

namespace {

ContinuedFraction from_digits(std::vector<long> d) {
  std::vector<BigInt> big;
  for (long a : d) big.emplace_back(a);
  return ContinuedFraction(std::move(big), Origin{});
}

double brute_norm(const Rational& alpha, long k) { return oracle::torus_norm(mpq_class(k) * alpha).get_d(); }

}  // namespace

TEST(ContFrac, GoldenDigitsAreOnesAndDenominatorsFibonacci) {
  const auto cf = golden(10);
  const auto fib = oracle::fibonacci(10);
  ASSERT_EQ(cf.depth(), 10u);
  for (std::size_t n = 1; n <= 10; ++n) {
    EXPECT_EQ(cf.digit(n), 1);
    EXPECT_EQ(cf.q(n), fib[n - 1]);
  }
  EXPECT_EQ(cf.q(0), 1);
}

TEST(ContFrac, ExpansionOfOneThirdStopsAsRational) {
  try {
    expand_literal("1/3", 5, 30);
    FAIL() << "expected RationalDetected";
  } catch (const RationalDetected& e) {
    ASSERT_EQ(e.partial().cf.depth(), 1u);
    EXPECT_EQ(e.partial().cf.digit(1), 3);
  }
  for (int prec : {10, 40, 200}) EXPECT_THROW(expand(RealInterval::point(Rational(1, 3)), 4, "", prec), RationalDetected);
}

TEST(ContFrac, SilverConvergents) {
  const auto cf = silver(12);
  for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(cf.digit(n), 2);
  EXPECT_EQ(cf.convergent(1), Rational(1, 2));
  EXPECT_EQ(cf.convergent(2), Rational(2, 5));
  EXPECT_EQ(cf.convergent(3), Rational(5, 12));
  EXPECT_EQ(cf.convergent(4), Rational(12, 29));
}

TEST(ContFrac, ExpansionReproducesInputWithinInverseSquare) {
  const auto x = golden_interval(200);
  const auto cf = expand(x, 150, "golden", 200);
  const Rational err = abs(x.lo - cf.value());
  EXPECT_LE(err, Rational(1) / (cf.q(cf.depth()) * cf.q(cf.depth())));
  EXPECT_LE(err, cf.error_bound());
}

TEST(ContFrac, ExpansionBeyondPrecisionIsRefused) {
  EXPECT_THROW(expand(golden_interval(15), 200, "golden", 15), PrecisionExhausted);
  const auto partial = expand_prefix(golden_interval(15), 200, "golden", 15);
  EXPECT_EQ(partial.termination, Termination::precision_exhausted);
  EXPECT_GT(partial.cf.depth(), 20u);
}

TEST(ContFrac, DecimalLiteralExpansion) {
  const auto cf = expand_literal("0.41421356237309504880168872420969807856967187537694", 20, 50);
  for (std::size_t n = 1; n <= 20; ++n) EXPECT_EQ(cf.digit(n), 2);
}

TEST(ContFrac, GoldenBetaVanishes) {
  // ln q_{n+1} / q_n is still 0.011 at q_14 = 610, so the warmup sits at 15.
  const auto fe = beta_exponent(golden(20), 20, 15);
  EXPECT_NEAR(fe.beta_estimate, 0.0, 1e-2);
  EXPECT_LE(fe.digit_estimate, std::log(2.0) / 89.0);
  EXPECT_LE(fe.beta_estimate - fe.digit_estimate, fe.agreement_bound + 1e-15);
}

TEST(ContFrac, ForgeFirstDigitFromE) {
  const auto cf = forge(golden(2), 2, ConstantBeta{0.5}, 1);
  ASSERT_EQ(cf.depth(), 3u);
  EXPECT_EQ(cf.digit(3), 2);  // floor(e^{0.5 * 2})
}

TEST(ContFrac, ForgedBetaMatchesTarget) {
  // The level needs ln q_n / q_n < 0.05, hence the long golden prefix.
  const auto cf = forge(golden(11), 11, ConstantBeta{0.5}, 3);
  EXPECT_TRUE(cf.truncated());
  ASSERT_EQ(cf.depth(), 12u);
  const auto fe = beta_exponent(cf, cf.depth(), 11);
  EXPECT_GE(fe.beta_estimate, 0.45);
  EXPECT_LE(fe.beta_estimate, 0.55);
  for (const auto& l : fe.per_level) {
    const double q = std::exp(log_abs(cf.q(l.n)));
    EXPECT_LE(l.digit_ratio, 0.5 + 1e-12);
    EXPECT_GE(l.digit_ratio, 0.5 + std::log1p(-std::exp(-0.5 * q)) / q - 1e-12);
    EXPECT_GE(l.log_ratio, l.digit_ratio);
    EXPECT_LE(l.log_ratio - l.digit_ratio, (std::log(q) + std::log(2.0)) / q + 1e-12);
  }
}

TEST(ContFrac, SingleHugeDigitSpikes) {
  const auto cf = from_digits({1, 1, 1, 1, 1000000, 1, 1, 1, 1, 1});
  const auto fe = beta_exponent(cf, 9, 0);
  const auto& spike = fe.per_level[4];
  ASSERT_EQ(spike.n, 4u);
  EXPECT_NEAR(spike.digit_ratio, std::log(1e6) / 5.0, 1e-12);
  for (std::size_t i = 5; i < fe.per_level.size(); ++i) EXPECT_LT(fe.per_level[i].log_ratio, spike.log_ratio / 1000);
}

TEST(ContFrac, DcMembershipGoldenMatchesBruteForce) {
  const auto cf = golden(40);
  EXPECT_TRUE(dc_membership(cf, 2.0, 0.2, 100).holds());
  for (long k = 1; k <= 100; ++k) EXPECT_GE(brute_norm(cf.value(), k), 0.2 / std::pow(k + 1.0, 2.0));
}

TEST(ContFrac, DcMembershipViolatedAtForgedDenominator) {
  const auto cf = forge(golden(4), 4, ConstantBeta{0.5}, 2);
  const auto r = dc_membership(cf, 2.0, 0.2, 1000);
  ASSERT_FALSE(r.holds());
  EXPECT_EQ(BigInt(r.violation->k), cf.q(5));
  // ||q_n alpha|| lies in [1/(2 q_{n+1}), 1/q_{n+1}] with q_{n+1} ~ q_n e^{0.5 q_n}.
  EXPECT_LE(r.violation->log_value, -log_abs(cf.q(6)));
  EXPECT_GE(r.violation->log_value, -log_abs(cf.q(6)) - std::log(2.0));
  EXPECT_NEAR(r.violation->log_value, -0.5 * cf.q(5).get_d(), std::log(cf.q(5).get_d()) + 1.0);
  EXPECT_TRUE(dc_membership(cf, 2.0, 0.2, 0).holds());
}

TEST(ContFrac, DcAlphaExamples) {
  const auto cf = golden(40);
  const auto zero = dc_alpha_membership(Phase::constant(Rational(0)), cf, 2.0, 0.1, 10);
  ASSERT_FALSE(zero.holds());
  EXPECT_EQ(zero.violation->k, 0);
  EXPECT_EQ(zero.violation->value, 0.0);

  EXPECT_TRUE(dc_alpha_membership(Phase::constant(Rational(1, 4)), cf, 2.0, 0.1, 50).holds());
  for (long k = -50; k <= 50; ++k)
    EXPECT_GE(oracle::torus_norm(Rational(1, 2) - k * cf.value()).get_d(), 0.1 / std::pow(std::labs(k) + 1.0, 2.0));

  const auto half = dc_alpha_membership(Phase{Rational(0), Rational(1, 2)}, cf, 2.0, 0.1, 10);
  ASSERT_FALSE(half.holds());
  EXPECT_EQ(half.violation->k, 1);
  EXPECT_EQ(half.violation->value, 0.0);
}

TEST(ContFrac, DcNeedsEnoughDepth) {
  EXPECT_THROW(dc_membership(golden(6), 2.0, 0.2, 1000), DepthInsufficient);
}

TEST(ContFrac, ForgePreservesBaseConvergents) {
  const auto base = silver(8);
  const auto cf = forge(base, 6, ConstantBeta{0.3}, 2);
  for (std::size_t n = 0; n <= 6; ++n) {
    EXPECT_EQ(cf.p(n), base.p(n));
    EXPECT_EQ(cf.q(n), base.q(n));
  }
  EXPECT_EQ(cf.origin().kind, Origin::Kind::forged);
}

TEST(ContFrac, SingleBurstTailDecays) {
  const auto cf = forge(golden(3), 3, SingleBurst{0.5}, 12);
  EXPECT_GT(cf.digit(4), 1);
  for (std::size_t n = 5; n <= cf.depth(); ++n) EXPECT_EQ(cf.digit(n), 1);
  const auto fe = beta_exponent(cf, cf.depth(), 4);
  for (std::size_t i = 1; i < fe.per_level.size(); ++i)
    EXPECT_LT(fe.per_level[i].log_ratio, fe.per_level[i - 1].log_ratio);
  EXPECT_LT(fe.per_level.back().log_ratio, 1e-2);
  // Only the tail matters for DC membership; its digits are all ones.
  std::vector<BigInt> tail(cf.digits().begin() + 4, cf.digits().end());
  EXPECT_TRUE(dc_membership(ContinuedFraction(tail, Origin{}), 2.0, 0.2, 3).holds());
}

TEST(ContFrac, ForgeRespectsDigitCap) {
  const auto cf = forge(golden(10), 10, ConstantBeta{1.0}, 3, ForgeOptions{1000});
  EXPECT_TRUE(cf.truncated());
  // a_11 = floor(e^89) has 39 digits; a_12 = floor(e^{q_11}) would have ~10^40.
  ASSERT_EQ(cf.depth(), 11u);
  EXPECT_EQ(to_decimal_string(cf.digit(11)).size(), 39u);
}

TEST(ContFrac, ExplicitTail) {
  const auto cf = forge(golden(3), 3, ExplicitTail{{BigInt(5), BigInt(7)}}, 0);
  ASSERT_EQ(cf.depth(), 5u);
  EXPECT_EQ(cf.digit(4), 5);
  EXPECT_EQ(cf.digit(5), 7);
}

TEST(ContFracProperty, RecurrencesAndNormBracketsOnRandomDigits) {
  gen::Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<long> d;
    const long depth = rng.integer(3, 30);
    for (long i = 0; i < depth; ++i) d.push_back(rng.integer(1, 50));
    const auto cf = from_digits(d);
    for (std::size_t n = 2; n <= cf.depth(); ++n) {
      EXPECT_EQ(cf.p(n), cf.digit(n) * cf.p(n - 1) + cf.p(n - 2));
      EXPECT_EQ(cf.q(n), cf.digit(n) * cf.q(n - 1) + cf.q(n - 2));
      EXPECT_GT(cf.q(n), cf.q(n - 1));
      BigInt g;
      mpz_gcd(g.get_mpz_t(), cf.p(n).get_mpz_t(), cf.q(n).get_mpz_t());
      EXPECT_EQ(g, 1);
    }
    for (std::size_t n = 1; n + 2 <= cf.depth(); ++n) {
      const mpq_class norm = oracle::torus_norm(mpq_class(cf.q(n)) * cf.value());
      EXPECT_LE(norm, mpq_class(1) / cf.q(n + 1));
      EXPECT_GE(norm, mpq_class(1) / (2 * cf.q(n + 1)));
      if (cf.q(n + 1) > 100000) continue;
      for (int s = 0; s < 20; ++s) {
        const long k = rng.integer(cf.q(n).get_si(), cf.q(n + 1).get_si() - 1);
        EXPECT_LE(norm, oracle::torus_norm(mpq_class(k) * cf.value()));
      }
    }
  }
}

TEST(ContFracProperty, ConvergentsApproximateAtInverseProductRate) {
  const auto x = silver_interval(300);
  const auto cf = expand(x, 200, "silver", 300);
  for (std::size_t n = 1; n + 1 <= cf.depth(); ++n)
    EXPECT_LE(abs(x.lo - cf.convergent(n)), Rational(1) / (cf.q(n) * cf.q(n + 1)));
}

TEST(ContFrac, LogOfHugeDenominatorFromBitLength) {
  const auto cf = forge(golden(4), 4, ConstantBeta{0.3}, 3);
  const BigInt& q = cf.q(7);
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_z(x, q.get_mpz_t(), MPFR_RNDN);
  mpfr_log(x, x, MPFR_RNDN);
  const double ref = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  EXPECT_NEAR(log_abs(q), ref, 1e-12 * ref);
}
