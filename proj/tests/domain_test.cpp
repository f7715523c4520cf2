#include "ssfde/domain.hpp"

#include <array>
#include <cmath>

#include <gtest/gtest.h>

#include "ssfde/exactsol.hpp"
#include "test_support.hpp"

namespace ssfde {
namespace {

using testing::ParamSampler;
using testing::throws_code;

TEST(Validate, AcceptsAdmissibleParameters) {
  EXPECT_NO_THROW(validate(ProblemParams{3, 0.2, 1.0, 0.0}));
  EXPECT_NO_THROW(validate(ProblemParams{10, 0.79, -3.0, 2.0}));
}

TEST(Validate, RejectsExponentAboveCriticalValue) {
  EXPECT_TRUE(throws_code(ErrorCode::ExponentOutOfRange,
                          [] { validate(ProblemParams{3, 0.5, 1.0, 0.0}); }));
}

TEST(Validate, RejectsLowDimension) {
  EXPECT_TRUE(throws_code(ErrorCode::DimensionTooSmall,
                          [] { validate(ProblemParams{2, 0.1, 1.0, 0.0}); }));
}

TEST(Validate, BoundaryValuesAreRejected) {
  // (n-2)/n evaluated exactly as the validator does; no epsilon slack.
  EXPECT_TRUE(throws_code(ErrorCode::ExponentOutOfRange,
                          [] { validate(ProblemParams{3, 1.0 / 3.0, 0.0, 0.0}); }));
  EXPECT_TRUE(throws_code(ErrorCode::ExponentOutOfRange,
                          [] { validate(ProblemParams{4, 0.5, 0.0, 0.0}); }));
  EXPECT_TRUE(throws_code(ErrorCode::ExponentOutOfRange,
                          [] { validate(ProblemParams{3, 0.0, 0.0, 0.0}); }));
  EXPECT_NO_THROW(validate(ProblemParams{3, std::nextafter(1.0 / 3.0, 0.0), 0.0, 0.0}));
}

TEST(Validate, RejectsNonFinite) {
  EXPECT_TRUE(throws_code(ErrorCode::NonFinite,
                          [] { validate(ProblemParams{3, 0.2, NAN, 0.0}); }));
  EXPECT_TRUE(throws_code(ErrorCode::NonFinite,
                          [] { validate(ProblemParams{3, 0.2, 0.0, INFINITY}); }));
  EXPECT_TRUE(throws_code(ErrorCode::NonFinite,
                          [] { validate(ProblemParams{3, NAN, 0.0, 0.0}); }));
}

TEST(BlowUpSpec, RequiresPositiveRateAndCoefficient) {
  EXPECT_NO_THROW(BlowUpSpec::make(2.5, 1.0));
  EXPECT_TRUE(throws_code(ErrorCode::InvalidBlowUpSpec, [] { BlowUpSpec::make(0.0, 1.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::InvalidBlowUpSpec, [] { BlowUpSpec::make(-1.0, 1.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::InvalidBlowUpSpec, [] { BlowUpSpec::make(1.0, 0.0); }));
}

TEST(DerivedConstants, ThreeDimensionalExample) {
  const auto c = derived_constants(ProblemParams{3, 0.2, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(c.p, 2.5);
  EXPECT_NEAR(c.c_star, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(c.gamma_crit, 5.0);
  EXPECT_NEAR(c.rhs_110, 1.25, 1e-15);
}

TEST(DerivedConstants, FourDimensionalExample) {
  const auto c = derived_constants(ProblemParams{4, 0.2, 0.0, 0.0});
  EXPECT_NEAR(c.c_star, 3.0, 1e-14);
  EXPECT_NEAR(c.rhs_110, 3.75, 1e-14);
}

TEST(DerivedConstants, CStarVanishesAtTheExponentLimit) {
  const double m = std::nextafter(1.0 / 3.0, 0.0);
  EXPECT_LT(derived_constants(ProblemParams{3, m, 0.0, 0.0}).c_star, 1e-14);
}

TEST(DerivedConstants, OrderingHoldsForRandomValidParams) {
  ParamSampler gen(7);
  for (int i = 0; i < 10000; ++i) {
    const auto p = gen.params();
    const auto c = derived_constants(p);
    ASSERT_GT(c.gamma_crit, c.p) << "n=" << p.n << " m=" << p.m;
    ASSERT_GT(c.p, 2.0);
    ASSERT_GT(c.c_star, 0.0);
    ASSERT_NEAR(c.rhs_110, c.c_star / (1.0 - p.m), 1e-12 * c.rhs_110);
  }
}

TEST(ModeAlpha, Examples) {
  EXPECT_DOUBLE_EQ(mode_alpha(SimilarityMode::Forward, -1.0, 0.2), -3.75);
  EXPECT_DOUBLE_EQ(mode_alpha(SimilarityMode::Backward, 1.0, 0.2), 3.75);
  EXPECT_DOUBLE_EQ(mode_alpha(SimilarityMode::Eternal, 0.0, 0.2), 0.0);
  EXPECT_TRUE(throws_code(ErrorCode::GenericModeHasNoCoupling,
                          [] { mode_alpha(SimilarityMode::Generic, 1.0, 0.2); }));
}

TEST(ModeAlpha, AffineWithSlopeP) {
  ParamSampler gen(11);
  for (int i = 0; i < 2000; ++i) {
    const auto p = gen.params();
    const double slope = 2.0 / (1.0 - p.m);
    const double b0 = gen.uniform(-5, 5);
    const double b1 = gen.uniform(-5, 5);
    for (auto mode : {SimilarityMode::Forward, SimilarityMode::Backward, SimilarityMode::Eternal}) {
      const double d = mode_alpha(mode, b1, p.m) - mode_alpha(mode, b0, p.m);
      ASSERT_NEAR(d, slope * (b1 - b0), 1e-12 * std::max(1.0, std::abs(d)));
    }
    const double gap = mode_alpha(SimilarityMode::Backward, b0, p.m) -
                       mode_alpha(SimilarityMode::Forward, b0, p.m);
    ASSERT_NEAR(gap, slope, 1e-12 * slope);
  }
}

TEST(Reconstruct, ForwardAtUnitTimeIsTheProfile) {
  const ProblemParams params{3, 0.2, 0.3, -0.4};
  const RadialFunction f = [](double r) { return 2.0 + std::sin(r); };
  for (double r : {0.1, 1.0, 7.5}) {
    EXPECT_DOUBLE_EQ(reconstruct(SimilarityMode::Forward, params, f, r, 1.0), f(r));
  }
}

TEST(Reconstruct, BackwardBarenblattExample) {
  ProblemParams params{4, 0.2, 3.75, 1.0};
  const auto b = barenblatt_profile(params).as_function();
  const std::array<double, 4> x{1.0, 0.0, 0.0, 0.0};
  const double u = reconstruct(SimilarityMode::Backward, params, b, x, 1.0, 2.0);
  EXPECT_NEAR(u, std::pow(3.0, 1.25), 1e-12);
  EXPECT_NEAR(u, 3.948222038857477, 1e-12);
}

TEST(Reconstruct, EternalAtTimeZeroIsTheProfile) {
  const ProblemParams params{5, 0.3, 2.0 / 0.7, 1.0};
  const RadialFunction f = [](double r) { return 1.0 / (1.0 + r * r); };
  EXPECT_DOUBLE_EQ(reconstruct(SimilarityMode::Eternal, params, f, 0.7, 0.0), f(0.7));
}

TEST(Reconstruct, BackwardBarenblattMatchesClosedFormOnGrid) {
  ParamSampler gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto params = gen.params();
    params.beta = gen.uniform(0.01, 5.0);
    params.alpha = mode_alpha(SimilarityMode::Backward, params.beta, params.m);
    const auto c = derived_constants(params);
    const auto b = barenblatt_profile(params).as_function();
    const double T = gen.uniform(0.5, 3.0);
    for (double t : {-2.0, 0.0, T - 0.25, T - 1e-3}) {
      for (double r : {1e-3, 0.2, 1.0, 30.0}) {
        const double expected = std::pow(c.c_star * (T - t) / (r * r), 1.0 / (1.0 - params.m));
        const double u = reconstruct(SimilarityMode::Backward, params, b, r, t, T);
        ASSERT_LE(testing::relative_error(u, expected), 1e-12) << "t=" << t << " r=" << r;
      }
    }
  }
}

TEST(Reconstruct, DomainErrors) {
  const ProblemParams params{3, 0.2, 1.0, 0.5};
  const RadialFunction f = [](double) { return 1.0; };
  EXPECT_TRUE(throws_code(ErrorCode::TimeOutOfDomain,
                          [&] { reconstruct(SimilarityMode::Forward, params, f, 1.0, 0.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::TimeOutOfDomain, [&] {
    reconstruct(SimilarityMode::Backward, params, f, 1.0, 2.0, 2.0);
  }));
  EXPECT_TRUE(throws_code(ErrorCode::OriginEvaluation,
                          [&] { reconstruct(SimilarityMode::Eternal, params, f, 0.0, 1.0); }));
  const std::array<double, 3> origin{0.0, 0.0, 0.0};
  EXPECT_TRUE(throws_code(ErrorCode::OriginEvaluation,
                          [&] { reconstruct(SimilarityMode::Forward, params, f, origin, 1.0); }));
  EXPECT_TRUE(throws_code(ErrorCode::GenericModeHasNoCoupling,
                          [&] { reconstruct(SimilarityMode::Generic, params, f, 1.0, 1.0); }));
}

// Finite-difference residual of u_t = Δ(u^m/m) for a radial u(r, t).
double pde_residual(const std::function<double(double, double)>& u, const ProblemParams& p,
                    double r, double t, double dt, double* scale) {
  const double h = 1e-3 * r;
  auto g = [&](double rr) { return std::pow(u(rr, t), p.m) / p.m; };
  const double g0 = g(r);
  const double gl = g(r - h);
  const double gr = g(r + h);
  const double lap = (gr - 2.0 * g0 + gl) / (h * h) + (p.n - 1.0) / r * (gr - gl) / (2.0 * h);
  const double ut = (u(r, t + dt) - u(r, t - dt)) / (2.0 * dt);
  *scale = std::abs(lap) + std::abs(ut);
  return lap - ut;
}

// For any smooth f, the space-time residual of the reconstruction equals a
// positive time factor times the profile-equation residual of f at the
// similarity variable. This pins down the sign conventions of every mode.
TEST(Reconstruct, SpaceTimeResidualFactorsThroughProfileResidual) {
  const RadialFunction f = [](double r) { return 2.0 + std::sin(r); };
  // Exact profile operator applied to 2 + sin r.
  auto exact_residual = [](const ProblemParams& p, double r) {
    const double v = 2.0 + std::sin(r);
    const double d1 = std::cos(r);
    const double d2 = -std::sin(r);
    const double g1 = std::pow(v, p.m - 1.0) * d1;
    const double g2 = std::pow(v, p.m - 1.0) * d2 + (p.m - 1.0) * std::pow(v, p.m - 2.0) * d1 * d1;
    return g2 + (p.n - 1.0) / r * g1 + p.alpha * v + p.beta * r * d1;
  };
  struct Case {
    SimilarityMode mode;
    double t;
    double T;
  };
  for (double beta : {0.7, -0.4}) {
    ProblemParams params{3, 0.2, 0.0, beta};
    for (const Case c : {Case{SimilarityMode::Forward, 0.8, 0.0},
                         Case{SimilarityMode::Forward, 1.7, 0.0},
                         Case{SimilarityMode::Backward, 0.5, 2.0},
                         Case{SimilarityMode::Backward, 1.2, 2.0},
                         Case{SimilarityMode::Eternal, -0.4, 0.0},
                         Case{SimilarityMode::Eternal, 0.9, 0.0}}) {
      params.alpha = mode_alpha(c.mode, beta, params.m);
      const double a = params.alpha;
      auto u = [&](double r, double t) { return reconstruct(c.mode, params, f, r, t, c.T); };
      for (double r : {0.5, 1.3}) {
        double y = 0.0;
        double factor = 0.0;
        switch (c.mode) {
          case SimilarityMode::Forward:
            y = std::pow(c.t, -beta) * r;
            factor = std::pow(c.t, -a - 1.0);
            break;
          case SimilarityMode::Backward:
            y = std::pow(c.T - c.t, beta) * r;
            factor = std::pow(c.T - c.t, a - 1.0);
            break;
          default:
            y = std::exp(-beta * c.t) * r;
            factor = std::exp(-a * c.t);
        }
        double scale = 0.0;
        const double res = pde_residual(u, params, r, c.t, 1e-4, &scale);
        const double expected = factor * exact_residual(params, y);
        EXPECT_NEAR(res, expected, 1e-5 * scale)
            << to_string(c.mode) << " beta=" << beta << " t=" << c.t << " r=" << r;
        EXPECT_GT(std::abs(expected), 1e-3 * scale);  // f is not a solution
      }
    }
  }
}

TEST(ParseMode, RoundTrip) {
  for (auto mode : {SimilarityMode::Forward, SimilarityMode::Backward, SimilarityMode::Eternal,
                    SimilarityMode::Generic}) {
    EXPECT_EQ(parse_mode(to_string(mode)), mode);
  }
  EXPECT_TRUE(throws_code(ErrorCode::InvalidArgument, [] { parse_mode("sideways"); }));
}

}  // namespace
}  // namespace ssfde
