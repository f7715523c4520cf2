#include "ssfde/classify.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "ssfde/exactsol.hpp"
#include "test_support.hpp"

namespace ssfde {
namespace {

using testing::ParamSampler;
using testing::throws_code;

const double kBarenblattEta4 = std::pow(3.0, 1.25);

TEST(Classify, HuiKimForwardExample) {
  const auto v = classify({3, 0.2, -3.75, -1.0}, BlowUpSpec::make(3.75, 1.0));
  EXPECT_EQ(v.status, VerdictStatus::ExistenceKnownUnique);
  EXPECT_TRUE(v.has_reason(Rule::HuiKimRange));
  EXPECT_FALSE(v.relation_gap.has_value());
}

TEST(Classify, ZeroBetaExcludesOffCriticalRate) {
  const auto v = classify({3, 0.2, 3.75, 0.0}, BlowUpSpec::make(3.0, 1.0));
  EXPECT_EQ(v.status, VerdictStatus::Excluded);
  EXPECT_TRUE(v.has_reason(Rule::CaseIImpossible));
}

TEST(Classify, RateBelowCriticalIsExcludedForAnyCoefficients) {
  for (double alpha : {-4.0, 0.0, 0.5, 3.75}) {
    for (double beta : {-2.0, 0.0, 1.0, 0.25}) {
      const auto v = classify({3, 0.2, alpha, beta}, BlowUpSpec::make(1.0, 1.0));
      EXPECT_EQ(v.status, VerdictStatus::Excluded) << alpha << " " << beta;
      EXPECT_TRUE(v.has_reason(Rule::GammaBelowCritical)) << alpha << " " << beta;
    }
  }
}

TEST(Classify, BarenblattWitnessAtCriticalRate) {
  const auto v = classify({4, 0.2, 3.75, 1.0}, BlowUpSpec::make(2.5, kBarenblattEta4));
  EXPECT_EQ(v.status, VerdictStatus::ExistenceKnown);
  EXPECT_TRUE(v.has_reason(Rule::BarenblattWitness));
  ASSERT_TRUE(v.relation_gap.has_value());
  EXPECT_NEAR(*v.relation_gap, 0.0, 1e-12);
}

TEST(Classify, WrongCoefficientAtCriticalRate) {
  const auto v = classify({4, 0.2, 3.75, 1.0}, BlowUpSpec::make(2.5, 1.0));
  EXPECT_EQ(v.status, VerdictStatus::Excluded);
  EXPECT_TRUE(v.has_reason(Rule::EtaRelationFailed));
  ASSERT_TRUE(v.relation_gap.has_value());
  EXPECT_NEAR(*v.relation_gap, -2.5, 1e-12);
}

TEST(Classify, LiteralFormRejectsBarenblattWhenCStarIsNotOne) {
  const ProblemParams params{4, 0.2, 3.75, 1.0};
  const auto v = classify(params, BlowUpSpec::make(2.5, kBarenblattEta4),
                          EtaRelationForm::PaperLiteral);
  EXPECT_EQ(v.status, VerdictStatus::Excluded);
  ASSERT_TRUE(v.relation_gap.has_value());
  EXPECT_NEAR(*v.relation_gap, 1.25 * kBarenblattEta4 - 3.75, 1e-12);
  EXPECT_NEAR(*v.relation_gap, 1.185277548571847, 1e-12);
}

TEST(Classify, BothFormsAgreeWhenCStarIsOne) {
  const ProblemParams params{3, 0.2, 1.25, 0.0};
  for (auto form : {EtaRelationForm::Corrected, EtaRelationForm::PaperLiteral}) {
    const auto v = classify(params, BlowUpSpec::make(2.5, 1.0), form);
    EXPECT_EQ(v.status, VerdictStatus::NecessaryConditionsMet);
    EXPECT_NEAR(*v.relation_gap, 0.0, 1e-12);
  }
}

TEST(Classify, RejectsBadTolerance) {
  const ProblemParams params{3, 0.2, 1.0, 0.0};
  const auto spec = BlowUpSpec::make(3.0, 1.0);
  for (double tol : {0.0, -1e-9, double(NAN), double(INFINITY)}) {
    EXPECT_TRUE(throws_code(ErrorCode::InvalidTolerance, [&] {
      classify(params, spec, EtaRelationForm::Corrected, tol);
    }));
  }
}

TEST(Classify, PropagatesParameterErrors) {
  EXPECT_TRUE(throws_code(ErrorCode::ExponentOutOfRange, [] {
    classify({3, 0.5, 1.0, 0.0}, BlowUpSpec::make(3.0, 1.0));
  }));
}

TEST(Classify, StationaryCaseOnlyAdmitsTheHarmonicRate) {
  const ProblemParams params{3, 0.2, 0.0, 0.0};
  auto v = classify(params, BlowUpSpec::make(5.0, 7.0));
  EXPECT_EQ(v.status, VerdictStatus::ExistenceKnown);
  EXPECT_TRUE(v.has_reason(Rule::StationaryWitness));
  v = classify(params, BlowUpSpec::make(4.0, 1.0));
  EXPECT_EQ(v.status, VerdictStatus::Excluded);
  EXPECT_TRUE(v.has_reason(Rule::StationaryRateMismatch));
}

TEST(Classify, ExcludedVerdictsAlwaysCarryAReason) {
  ParamSampler gen(21);
  for (int i = 0; i < 10000; ++i) {
    const auto p = gen.params(gen.uniform(-6, 6), gen.uniform(-3, 3));
    const auto spec = BlowUpSpec::make(gen.uniform(0.1, 20), gen.log_uniform(1e-3, 1e3));
    const auto v = classify(p, spec);
    ASSERT_FALSE(v.reasons.empty());
  }
}

TEST(CriticalEta, Examples) {
  EXPECT_NEAR(*critical_eta({4, 0.2, 3.75, 1.0}), kBarenblattEta4, 1e-12);
  EXPECT_NEAR(*critical_eta({3, 0.2, 1.25, 0.0}), 1.0, 1e-15);
  EXPECT_FALSE(critical_eta({3, 0.2, 0.0, 1.0}).has_value());
  EXPECT_FALSE(critical_eta({3, 0.2, 0.0, 1.0}, EtaRelationForm::PaperLiteral).has_value());
  EXPECT_NEAR(*critical_eta({4, 0.2, 3.75, 1.0}, EtaRelationForm::PaperLiteral), 3.0, 1e-14);
}

TEST(CriticalEta, ComposesWithClassify) {
  ParamSampler gen(5);
  for (int i = 0; i < 10000; ++i) {
    auto p = gen.params(0.0, gen.uniform(-5, 5));
    const double p_rate = derived_constants(p).p;
    p.alpha = p.beta * p_rate + gen.log_uniform(1e-3, 1e2);
    for (auto form : {EtaRelationForm::Corrected, EtaRelationForm::PaperLiteral}) {
      const auto eta = critical_eta(p, form);
      ASSERT_TRUE(eta.has_value());
      const auto v = classify(p, BlowUpSpec::make(p_rate, *eta), form);
      ASSERT_NE(v.status, VerdictStatus::Excluded) << "n=" << p.n << " m=" << p.m;
      ASSERT_TRUE(v.has_reason(Rule::EtaRelationHolds));
      ASSERT_LE(std::abs(*v.relation_gap), 1e-9 * derived_constants(p).rhs_110);
    }
  }
}

TEST(KnownExistence, Examples) {
  EXPECT_EQ(known_existence({3, 0.2, -3.75, -1.0}, BlowUpSpec::make(3.75, 1.0)),
            KnownExistence::HuiKimForwardUnique);
  EXPECT_EQ(known_existence({3, 0.2, 3.75, 1.0}, BlowUpSpec::make(3.75, 1.0)),
            KnownExistence::BackwardExists);
  EXPECT_EQ(known_existence({3, 0.2, 8.75, 3.0}, BlowUpSpec::make(35.0 / 12.0, 1.0)),
            KnownExistence::BackwardExistsUnique);
}

TEST(KnownExistence, BackwardThresholdsAreInclusive) {
  // n=3, m=0.2: thresholds m/(n-2-nm) = 0.5 and 1/(n-2-nm) = 2.5.
  auto at = [](double beta) {
    const ProblemParams p{3, 0.2, mode_alpha(SimilarityMode::Backward, beta, 0.2), beta};
    return known_existence(p, BlowUpSpec::make(p.alpha / p.beta, 1.0));
  };
  EXPECT_EQ(at(0.49), KnownExistence::None);
  EXPECT_EQ(at(0.5), KnownExistence::BackwardExists);
  EXPECT_EQ(at(2.49), KnownExistence::BackwardExists);
  EXPECT_EQ(at(2.5), KnownExistence::BackwardExistsUnique);
}

TEST(KnownExistence, HuiKimRangeIsOpen) {
  const double m = 0.2;
  const double gamma_crit = 5.0;
  // α/β = (2β - 1)/((1-m)β) = γ_crit  <=>  β = -1/((1-m)γ_crit - 2).
  const double beta_edge = -1.0 / ((1.0 - m) * gamma_crit - 2.0);
  const ProblemParams edge{3, m, mode_alpha(SimilarityMode::Forward, beta_edge, m), beta_edge};
  EXPECT_NEAR(edge.alpha / edge.beta, gamma_crit, 1e-14);
  EXPECT_EQ(known_existence(edge, BlowUpSpec::make(gamma_crit, 1.0)), KnownExistence::None);
  const ProblemParams outside{3, m, mode_alpha(SimilarityMode::Forward, 0.9 * beta_edge, m),
                              0.9 * beta_edge};
  EXPECT_EQ(known_existence(outside, BlowUpSpec::make(outside.alpha / outside.beta, 1.0)),
            KnownExistence::None);  // ratio above γ_crit
  const ProblemParams deeper{3, m, mode_alpha(SimilarityMode::Forward, 1.1 * beta_edge, m),
                             1.1 * beta_edge};
  EXPECT_EQ(known_existence(deeper, BlowUpSpec::make(deeper.alpha / deeper.beta, 1.0)),
            KnownExistence::HuiKimForwardUnique);
}

TEST(KnownExistence, RequiresGammaOnTheRatio) {
  EXPECT_EQ(known_existence({3, 0.2, -3.75, -1.0}, BlowUpSpec::make(4.0, 1.0)),
            KnownExistence::None);
  EXPECT_EQ(known_existence({3, 0.2, 3.75, 1.0}, BlowUpSpec::make(4.0, 1.0)),
            KnownExistence::None);
}

TEST(SignCheck, Examples) {
  EXPECT_EQ(sign_check({3, 0.2, 3.75, 2.0}, SimilarityMode::Forward),
            SignCheck::SignsForceNonexistence);
  EXPECT_EQ(sign_check({3, 0.2, -3.75, -1.0}, SimilarityMode::Forward),
            SignCheck::ConsistentWithExistence);
  EXPECT_EQ(sign_check({3, 0.2, 3.75, 1.0}, SimilarityMode::Backward),
            SignCheck::ConsistentWithExistence);
  EXPECT_EQ(sign_check({3, 0.2, 1.25, 0.0}, SimilarityMode::Backward),
            SignCheck::SignsForceNonexistence);
  EXPECT_TRUE(throws_code(ErrorCode::ModeNotApplicable, [] {
    sign_check({3, 0.2, 2.5, 1.0}, SimilarityMode::Eternal);
  }));
  EXPECT_TRUE(throws_code(ErrorCode::ModeNotApplicable, [] {
    sign_check({3, 0.2, 2.5, 1.0}, SimilarityMode::Generic);
  }));
}

TEST(DetectMode, RecognisesCouplings) {
  for (auto mode : {SimilarityMode::Forward, SimilarityMode::Backward, SimilarityMode::Eternal}) {
    const ProblemParams p{5, 0.3, mode_alpha(mode, 0.7, 0.3), 0.7};
    EXPECT_EQ(detect_mode(p), mode);
  }
  EXPECT_EQ(detect_mode({5, 0.3, 0.1234, 0.7}), SimilarityMode::Generic);
}

// Random γ that lands on p or α/β often enough to exercise both branches.
double pick_gamma(ParamSampler& gen, double p, double ratio) {
  const double u = gen.uniform(0, 1);
  if (u < 0.2) return p;
  if (u < 0.5 && ratio > 0.0) return ratio;
  return gen.uniform(0.05, 25.0);
}

TEST(ClassifyProperties, EternalCouplingIsAlwaysExcluded) {
  ParamSampler gen(101);
  for (int i = 0; i < 10000; ++i) {
    double beta = gen.uniform(-5, 5);
    if (beta == 0.0) beta = 1.0;
    auto p = gen.params(0.0, beta);
    p.alpha = mode_alpha(SimilarityMode::Eternal, beta, p.m);
    const auto c = derived_constants(p);
    const double eta =
        gen.uniform(0, 1) < 0.2 ? barenblatt_eta(p) : gen.log_uniform(1e-4, 1e4);
    const auto spec = BlowUpSpec::make(pick_gamma(gen, c.p, p.alpha / p.beta), eta);
    for (auto form : {EtaRelationForm::Corrected, EtaRelationForm::PaperLiteral}) {
      ASSERT_EQ(classify(p, spec, form).status, VerdictStatus::Excluded)
          << "n=" << p.n << " m=" << p.m << " beta=" << beta << " gamma=" << spec.gamma;
    }
  }
}

TEST(ClassifyProperties, SignViolationsForceExclusion) {
  ParamSampler gen(102);
  int forced = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto mode = i % 2 ? SimilarityMode::Forward : SimilarityMode::Backward;
    auto p = gen.params(0.0, gen.uniform(-5, 5));
    p.alpha = mode_alpha(mode, p.beta, p.m);
    const auto c = derived_constants(p);
    const double ratio = p.beta != 0.0 ? p.alpha / p.beta : -1.0;
    const auto spec = BlowUpSpec::make(pick_gamma(gen, c.p, ratio), 1.0);
    if (approx_equal(spec.gamma, c.p, kDefaultTolerance)) continue;
    if (sign_check(p, mode) == SignCheck::SignsForceNonexistence) {
      ++forced;
      ASSERT_EQ(classify(p, spec).status, VerdictStatus::Excluded);
    }
  }
  EXPECT_GT(forced, 1000);
}

TEST(ClassifyProperties, InvariantUnderPositiveRescalingOffCriticalRate) {
  ParamSampler gen(103);
  for (int i = 0; i < 10000; ++i) {
    const auto p = gen.params(gen.uniform(-10, 10), gen.uniform(-5, 5));
    const auto c = derived_constants(p);
    const auto spec = BlowUpSpec::make(pick_gamma(gen, c.p, p.alpha / p.beta), 1.0);
    if (approx_equal(spec.gamma, c.p, kDefaultTolerance)) continue;
    const double lambda = gen.log_uniform(1e-3, 1e3);
    const ProblemParams scaled{p.n, p.m, lambda * p.alpha, lambda * p.beta};
    const auto v0 = classify(p, spec);
    const auto v1 = classify(scaled, spec);
    ASSERT_EQ(v0.status, v1.status) << "lambda=" << lambda;
    ASSERT_EQ(v0.reasons, v1.reasons);
  }
}

TEST(ClassifyProperties, ExactPowerLawsAreNeverExcluded) {
  ParamSampler gen(104);
  for (int i = 0; i < 10000; ++i) {
    auto p = gen.params(0.0, gen.uniform(-5, 5));
    const double k = gen.log_uniform(1e-3, 1e3);
    p.alpha = power_law_alpha(k, p.beta, p);
    const auto v = classify(p, BlowUpSpec::make(derived_constants(p).p, k));
    ASSERT_NE(v.status, VerdictStatus::Excluded) << "n=" << p.n << " m=" << p.m << " K=" << k;
  }
}

TEST(ClassifyProperties, UniqueImpliesKnown) {
  ParamSampler gen(105);
  for (int i = 0; i < 10000; ++i) {
    const auto mode = i % 2 ? SimilarityMode::Forward : SimilarityMode::Backward;
    auto p = gen.params(0.0, gen.uniform(-5, 5));
    p.alpha = mode_alpha(mode, p.beta, p.m);
    if (p.beta == 0.0 || !(p.alpha / p.beta > 0.0)) continue;
    const auto spec = BlowUpSpec::make(p.alpha / p.beta, 1.0);
    const auto v = classify(p, spec);
    if (v.status == VerdictStatus::ExistenceKnownUnique) {
      ASSERT_NE(known_existence(p, spec), KnownExistence::None);
      ASSERT_TRUE(v.has_reason(Rule::GammaEqualsAlphaOverBeta));
    }
  }
}

}  // namespace
}  // namespace ssfde
