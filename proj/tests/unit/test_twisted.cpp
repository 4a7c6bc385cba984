#include <gtest/gtest.h>

#include <cmath>

#include "subrv/errors.hpp"
#include "subrv/twisted.hpp"

using namespace subrv;

namespace {

ScalarField x(int i) { return ScalarField::coord(4, i); }
ScalarField k4(double v) { return ScalarField::constant(4, v); }

struct Fields {
  ClassifiedVector X{VectorField({k4(1) + x(1) * x(3), 0.5 * x(0) + k4(0.7), k4(0), k4(0)}), TangentKind::Base};
  ClassifiedVector Y{VectorField({x(2) - k4(0.8), k4(1) + 0.3 * x(0) * x(1), k4(0), k4(0)}), TangentKind::Base};
  ClassifiedVector V{VectorField({k4(0), k4(0), k4(1) + x(0) * x(2), k4(0.7) + x(1) - 0.3 * x(3)}), TangentKind::Fiber};
  ClassifiedVector W{VectorField({k4(0), k4(0), 0.4 * x(3) - k4(0.9), k4(0.5) + x(0) * x(0)}), TangentKind::Fiber};
  ClassifiedCovector wb{{x(1) + k4(0.4), k4(1) + x(0) * x(3), k4(0), k4(0)}, TangentKind::Base};
  ClassifiedCovector wf{{k4(0), k4(0), x(0) + x(2) + k4(0.3), k4(1) + x(1) * x(3)}, TangentKind::Fiber};
  std::vector<const ClassifiedVector*> vecs() const { return {&X, &V, &Y, &W}; }
};

ScalarField f1() { return sin(x(0) + 0.5 * x(2)) + x(1) * x(3); }
ScalarField f2() { return exp(0.3 * x(1) - 0.2 * x(3)) + x(0) * x(2) * x(2); }

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

class TwistedOracle : public ::testing::TestWithParam<int> {};

}  // namespace

TEST_P(TwistedOracle, ConnectionAndDual) {
  const auto spec = reference_twisted_specs()[GetParam()];
  const Fields fs;
  for (const auto& p : sample_points(10, 100 + GetParam())) {
    for (const auto* a : fs.vecs())
      for (const auto* b : fs.vecs())
        EXPECT_LT(max_diff(tw_connection(spec, *a, *b, p), oracle_connection(spec, a->field, b->field, p)), 1e-8);
    for (const auto* a : fs.vecs())
      for (const auto* w : {&fs.wb, &fs.wf})
        EXPECT_LT(max_diff(tw_dual_connection(spec, *a, *w, p), oracle_dual_connection(spec, a->field, w->comps, p)),
                  1e-8);
  }
}

TEST_P(TwistedOracle, CurvatureRicciScalarLaplacian) {
  const auto spec = reference_twisted_specs()[GetParam()];
  const Fields fs;
  const auto h = f1();
  for (const auto& p : sample_points(10, 200 + GetParam())) {
    for (const auto* a : fs.vecs())
      for (const auto* b : fs.vecs()) {
        const auto av = a->field.value(p), bv = b->field.value(p);
        EXPECT_NEAR(tw_ricci(spec, *a, *b, p), oracle_ricci(spec, av, bv, p), 1e-8);
        for (const auto* c : fs.vecs()) {
          const auto cv = c->field.value(p);
          EXPECT_LT(max_diff(tw_curvature(spec, *a, *b, *c, p), oracle_curvature(spec, av, bv, cv, p)), 1e-8);
        }
      }
    EXPECT_NEAR(tw_scalar(spec, p), oracle_scalar(spec, p), 1e-8);
    EXPECT_NEAR(tw_laplacian(spec, h, p), oracle_laplacian(spec, h, p), 1e-8);
  }
}

TEST_P(TwistedOracle, DualPairingIdentity) {
  // A(w(B)) = (nabla*_A w)(B) + w(nabla_A B)
  const auto spec = reference_twisted_specs()[GetParam()];
  const Fields fs;
  for (const auto& p : sample_points(5, 300 + GetParam())) {
    for (const auto* a : fs.vecs())
      for (const auto* b : fs.vecs())
        for (const auto* w : {&fs.wb, &fs.wf}) {
          ScalarField pairing = k4(0);
          for (int i = 0; i < 4; ++i) pairing = pairing + w->comps[i] * b->field[i];
          const double lhs = frame_derivative(a->field, pairing, p);
          const auto dw = tw_dual_connection(spec, *a, *w, p);
          const auto nb = tw_connection(spec, *a, *b, p);
          const auto bv = b->field.value(p);
          double rhs = 0.0;
          for (int i = 0; i < 4; ++i) rhs += dw[i] * bv[i] + w->comps[i].value(p) * nb[i];
          EXPECT_NEAR(lhs, rhs, 1e-9);
        }
  }
}

TEST_P(TwistedOracle, EinsteinCasesMatchAssembly) {
  const auto spec = reference_twisted_specs()[GetParam()];
  const Fields fs;
  for (const auto& p : sample_points(5, 400 + GetParam())) {
    EXPECT_NEAR(tw_einstein_case(spec, EinsteinCase::A, fs.X, fs.Y, p), tw_einstein(spec, fs.X, fs.Y, p), 1e-9);
    EXPECT_NEAR(tw_einstein_case(spec, EinsteinCase::B, fs.X, fs.V, p), tw_einstein(spec, fs.X, fs.V, p), 1e-9);
    EXPECT_NEAR(tw_einstein_case(spec, EinsteinCase::C, fs.V, fs.W, p), tw_einstein(spec, fs.V, fs.W, p), 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(ReferenceSpecs, TwistedOracle, ::testing::Range(0, 5));

TEST(Twisted, LtildeArbitrationPicksFiberDimension) {
  const auto arb = arbitrate_ltilde(reference_twisted_specs(), sample_points(5, 7), 1e-8);
  ASSERT_EQ(arb.candidates.size(), 2u);
  EXPECT_EQ(arb.candidates[0].ltilde, 4);
  EXPECT_FALSE(arb.candidates[0].consistent);
  EXPECT_GT(arb.candidates[0].max_residual, 1e-3);
  EXPECT_TRUE(arb.candidates[1].consistent);
  EXPECT_EQ(arb.validated, 2);
  EXPECT_TRUE(arb.differs_from_sum);
  EXPECT_EQ(default_ltilde(2, 2), 2);
}

TEST(Twisted, WarpedReductionKillsMixedRicci) {
  const auto spec = reference_twisted_specs()[3];
  const Fields fs;
  for (const auto& p : sample_points(10, 11)) {
    EXPECT_EQ(tw_ricci(spec, fs.X, fs.V, p), 0.0);
    EXPECT_EQ(tw_einstein_case(spec, EinsteinCase::B, fs.X, fs.V, p), 0.0);
  }
}

TEST(Twisted, FlatEinsteinVanishes) {
  const auto spec = make_twisted(CoordinateMetric::euclidean(2), CoordinateMetric::euclidean(2), k4(1));
  const Fields fs;
  const std::vector<double> p{0.1, 0.2, -0.3, 0.4};
  EXPECT_EQ(tw_einstein(spec, fs.X, fs.Y, p), 0.0);
  EXPECT_EQ(tw_einstein(spec, fs.V, fs.W, p), 0.0);
  EXPECT_EQ(tw_scalar(spec, p), 0.0);
}

TEST(Twisted, InputValidation) {
  const auto spec = reference_twisted_specs()[0];
  const Fields fs;
  const std::vector<double> p{0.1, 0.2, -0.3, 0.4};
  ClassifiedVector mixed{VectorField({k4(1), k4(0), k4(1), k4(0)}), TangentKind::Mixed};
  EXPECT_THROW(tw_connection(spec, mixed, fs.X, p), MixedTangentError);
  ClassifiedVector lying{fs.V.field, TangentKind::Base};
  EXPECT_THROW(tw_ricci(spec, lying, fs.X, p), MixedTangentError);
  EXPECT_THROW(tw_einstein_case(spec, EinsteinCase::A, fs.X, fs.V, p), MixedTangentError);
  EXPECT_EQ(classify(spec, std::vector<double>{1, 0, 1e-3, 0}), TangentKind::Mixed);
  EXPECT_EQ(classify(spec, std::vector<double>{0, 0, 1, 0}), TangentKind::Fiber);
  const auto neg = make_twisted(CoordinateMetric::euclidean(2), CoordinateMetric::euclidean(2), x(0));
  EXPECT_THROW(tw_scalar(neg, std::vector<double>{-0.5, 0, 0, 0}), DomainError);
  auto bad = spec;
  bad.m = 3;
  EXPECT_THROW(bad.validate(), DimensionError);
  const auto s3 = make_twisted(CoordinateMetric::euclidean(3), CoordinateMetric::euclidean(1), ScalarField::constant(4, 1));
  EXPECT_THROW(tw_c_terms(s3, f1(), f2(), p), DimensionError);
}

TEST(TwistedCTerms, FlatHandValue) {
  const auto spec = make_twisted(CoordinateMetric::euclidean(2), CoordinateMetric::euclidean(2), k4(1));
  const auto g = x(0) * x(0);
  for (const auto& p : sample_points(5, 3)) {
    const auto ct = tw_c_terms(spec, g, g, p);
    EXPECT_NEAR(ct.sum(), -6.0, 1e-12);
    EXPECT_NEAR(ct.omega4, -6.0, 1e-12);
    EXPECT_NEAR(ct.oracle_density, -6.0, 1e-12);
  }
}

TEST(TwistedCTerms, ConstantFunctionGivesZero) {
  for (const auto& spec : reference_twisted_specs()) {
    const auto ct = tw_c_terms(spec, k4(2.5), f2(), std::vector<double>{0.1, -0.2, 0.3, 0.05});
    EXPECT_EQ(ct.c1, 0.0);
    EXPECT_EQ(ct.c2, 0.0);
    EXPECT_EQ(ct.c3, 0.0);
    EXPECT_EQ(ct.c4, 0.0);
    EXPECT_EQ(ct.omega4, 0.0);
  }
}

TEST(TwistedCTerms, SecondTermIsExact) {
  for (const auto& spec : reference_twisted_specs())
    for (const auto& p : sample_points(5, 21)) {
      const auto ct = tw_c_terms(spec, f1(), f2(), p);
      EXPECT_NEAR(ct.c2, ct.oracle.lap_inner, 1e-9);
    }
}

TEST(TwistedCTerms, ConstantTwistAmendedTermsMatch) {
  const auto ref = reference_twisted_specs()[2];
  const auto spec = make_twisted(ref.gB, ref.gF, k4(1.7));
  for (const auto& p : sample_points(5, 5)) {
    const auto ct = tw_c_terms(spec, f1(), f2(), p);
    EXPECT_NEAR(ct.c1, ct.oracle.third_r_inner, 1e-10);
    EXPECT_NEAR(ct.c4, ct.oracle.half_lap_prod, 1e-10);
    EXPECT_NEAR(ct.c3_amended, ct.oracle.hess_inner, 1e-10);
    // the literal fiber Hessian pairing breaks frame independence
    const auto swapped = tw_c_terms(spec, f1(), f2(), p, {1, 0}, {1, 0});
    EXPECT_NEAR(ct.c3_amended, swapped.c3_amended, 1e-10);
    EXPECT_GT(std::abs(ct.c3 - swapped.c3), 1e-5);
  }
}

TEST(TwistedCTerms, AmendedFirstAndFourthTermsMatchEverywhere) {
  for (const auto& spec : reference_twisted_specs())
    for (const auto& p : sample_points(5, 31)) {
      const auto ct = tw_c_terms(spec, f1(), f2(), p);
      EXPECT_NEAR(ct.c1_amended, ct.oracle.third_r_inner, 1e-9);
      EXPECT_NEAR(ct.c4_amended, ct.oracle.half_lap_prod, 1e-9);
    }
}

TEST(TwistedCTerms, LiteralTermsDisagreeForNonconstantTwist) {
  const auto spec = reference_twisted_specs()[0];
  const auto ct = tw_c_terms(spec, f1(), f2(), std::vector<double>{0.2, 0.1, -0.3, 0.4});
  const auto r = ct.residuals();
  EXPECT_GT(std::abs(r[0]), 1e-5);
  EXPECT_GT(std::abs(r[2]), 1e-5);
  EXPECT_GT(std::abs(r[3]), 1e-5);
}

TEST(TwistedCTerms, DiagonalFramesAreOrderIndependent) {
  for (int i : {0, 1, 3, 4}) {
    const auto spec = reference_twisted_specs()[i];
    for (const auto& p : sample_points(3, 41)) {
      const auto a = tw_c_terms(spec, f1(), f2(), p);
      const auto b = tw_c_terms(spec, f1(), f2(), p, {1, 0}, {1, 0});
      EXPECT_NEAR(a.sum(), b.sum(), 1e-9);
    }
  }
}
