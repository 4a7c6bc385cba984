#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "subrv/errors.hpp"
#include "subrv/field.hpp"

using namespace subrv;

namespace {

ScalarField x(int i) { return ScalarField::coord(3, i); }

double central(const ScalarField& h, std::vector<double> p, int i, double step = 1e-5) {
  auto a = p, b = p;
  a[i] += step;
  b[i] -= step;
  return (h.value(a) - h.value(b)) / (2 * step);
}

}  // namespace

TEST(Jets, PolynomialSquare) {
  const auto h = x(0) * x(0);
  const std::vector<double> p{2, 0, 0};
  const Jet j = eval_jet(h, p, 2);
  EXPECT_DOUBLE_EQ(j.value(), 4.0);
  EXPECT_DOUBLE_EQ(j.d(0), 4.0);
  EXPECT_DOUBLE_EQ(j.d(1), 0.0);
  EXPECT_DOUBLE_EQ(j.d(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(j.d(1, 1), 0.0);
}

TEST(Jets, Constant) {
  const auto h = ScalarField::constant(3, 3.5);
  const std::vector<double> p{0.1, 0.2, 0.3};
  const Jet j = eval_jet(h, p, 3);
  EXPECT_EQ(j.value(), 3.5);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(j.d(i), 0.0);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(j.d(i, k), 0.0);
  }
}

TEST(Jets, RationalAgainstFiniteDifferences) {
  const auto h = 1.0 / (1.0 + 0.25 * (x(0) * x(0) + x(1) * x(1)));
  const std::vector<double> p{0.3, -0.2, 0.5};
  const Jet j = eval_jet(h, p, 2);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(j.d(i), central(h, p, i), 1e-7);
    const auto hi = h.diff(i);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(j.d(i, k), central(hi, p, k), 1e-7);
  }
}

TEST(Jets, OrderOutOfRange) {
  const std::vector<double> p{0, 0, 0};
  EXPECT_THROW(eval_jet(x(0), p, 0), Error);
  EXPECT_THROW(eval_jet(x(0), p, 4), Error);
  const std::vector<double> bad{0, 0};
  EXPECT_THROW(eval_jet(x(0), bad, 1), DimensionError);
}

TEST(Jets, PolesRaiseDomainErrors) {
  const std::vector<double> p{0, 0, 0};
  EXPECT_THROW(eval_jet(1.0 / x(0), p, 1), DomainError);
  EXPECT_THROW(eval_jet(log(x(0)), p, 1), DomainError);
}

TEST(Jets, FrameDerivativeHeisenberg) {
  const VectorField x1({ScalarField::constant(3, 1), ScalarField::constant(3, 0), -1.0 * x(1)});
  const std::vector<double> p{0, 5, 0};
  EXPECT_DOUBLE_EQ(frame_derivative(x1, x(2), p), -5.0);
  EXPECT_DOUBLE_EQ(frame_derivative(VectorField::coordinate(3, 0), x(1), p), 0.0);
}

TEST(Jets, FrameDerivativeBcvCoefficient) {
  const auto d = 1.0 + 0.25 * (x(0) * x(0) + x(1) * x(1));
  const VectorField x1({d, ScalarField::constant(3, 0), ScalarField::constant(3, 0)});
  const std::vector<double> p{0.3, -0.2, 0.5};
  EXPECT_NEAR(frame_derivative(x1, x(0), p), 1.0325, 1e-15);
}

TEST(Jets, FrameSecondDerivative) {
  const auto zero = ScalarField::constant(3, 0);
  const VectorField x1({ScalarField::constant(3, 1), zero, -1.0 * x(1)});
  const VectorField x2({zero, ScalarField::constant(3, 1), x(0)});
  const std::vector<double> p{0.4, -0.7, 1.1};
  EXPECT_NEAR(frame_second_derivative(x1, x2, x(2), p), 1.0, 1e-15);
  const auto e1 = VectorField::coordinate(3, 0);
  EXPECT_NEAR(frame_second_derivative(e1, e1, x(0) * x(0), p), 2.0, 1e-15);
}

TEST(Jets, FrameSecondDerivativeFiniteDifference) {
  const auto d = 1.0 + 0.25 * (x(0) * x(0) + x(1) * x(1));
  const auto zero = ScalarField::constant(3, 0);
  const VectorField x1({d, zero, x(1) / d});
  const auto h = x(1) * x(2);
  const std::vector<double> p{0.3, -0.2, 0.5};
  const auto inner = x1.apply(h);
  const double step = 1e-5;
  const auto c = x1.value(p);
  double fd = 0.0;
  for (int i = 0; i < 3; ++i) fd += c[i] * central(inner, p, i, step);
  EXPECT_NEAR(frame_second_derivative(x1, x1, h, p), fd, 1e-6);
}

TEST(JetsProperty, SchwarzMatchesBracket) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int t = 0; t < 50; ++t) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const VectorField X({1.0 + a * x(1) * x(1), sin(x(2)) * b, exp(c * x(0))});
    const VectorField Y({cos(x(0) * a), 1.0 + x(2) * x(0) * c, b * x(1)});
    const auto h = exp(a * x(0) + b * x(1)) + x(2) * x(2) * x(1) * c;
    const std::vector<double> p{u(rng), u(rng), u(rng)};
    const double lhs = frame_second_derivative(X, Y, h, p) - frame_second_derivative(Y, X, h, p);
    EXPECT_NEAR(lhs, frame_derivative(bracket(X, Y), h, p), 1e-10);
  }
}

TEST(JetsProperty, PolynomialExactness) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> e(0, 2);
  for (int t = 0; t < 30; ++t) {
    std::vector<Monomial> terms;
    for (int k = 0; k < 5; ++k) terms.push_back({u(rng), {e(rng), e(rng), e(rng)}});
    const auto h = polynomial(3, terms);
    const std::vector<double> p{u(rng), u(rng), u(rng)};
    const Jet j = eval_jet(h, p, 3);
    for (int i = 0; i < 3; ++i) {
      const auto hi = h.diff(i);
      EXPECT_NEAR(j.d(i), hi.value(p), 1e-12 * (1 + std::abs(j.d(i))));
      for (int k = 0; k < 3; ++k) {
        const auto hik = hi.diff(k);
        EXPECT_NEAR(j.d(i, k), hik.value(p), 1e-12 * (1 + std::abs(j.d(i, k))));
        for (int l = 0; l < 3; ++l) EXPECT_NEAR(j.d(i, k, l), hik.diff(l).value(p), 1e-12);
      }
    }
  }
}

TEST(JetsProperty, HigherDerivativesOfLowDegreeVanish) {
  const auto h = 3.0 * x(0) * x(1) + x(2) - 2.0;
  const std::vector<double> p{0.7, -1.3, 2.0};
  const Jet j = eval_jet(h, p, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) EXPECT_EQ(j.d(a, b, c), 0.0);
}

TEST(JetsProperty, OrdersAgreeBitwise) {
  const auto h = exp(x(0)) * sqrt(1.0 + x(1) * x(1)) / (2.0 + cos(x(2)));
  const std::vector<double> p{0.2, 0.4, -0.6};
  const Jet j3 = eval_jet(h, p, 3);
  const Jet j2 = eval_jet(h, p, 2);
  EXPECT_TRUE(j3.truncated(2) == j2);
}

TEST(JetsProperty, ThirdDerivativeSymmetric) {
  const auto h = exp(x(0) * x(1)) * sin(x(2) + x(0));
  const std::vector<double> p{0.2, 0.4, -0.6};
  const Jet j = eval_jet(h, p, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        EXPECT_EQ(j.d(a, b, c), j.d(b, a, c));
        EXPECT_EQ(j.d(a, b, c), j.d(c, b, a));
      }
}
