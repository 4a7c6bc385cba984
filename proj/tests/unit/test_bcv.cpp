#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "subrv/bcv.hpp"
#include "subrv/errors.hpp"

using namespace subrv;

namespace {

std::vector<double> domain_point(std::mt19937_64& rng, const BcvParams& p) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (;;) {
    std::vector<double> x{u(rng), u(rng), u(rng)};
    if (1.0 + p.lambda / 4.0 * (x[0] * x[0] + x[1] * x[1]) > 0.2) return x;
  }
}

}  // namespace

TEST(Bcv, HeisenbergFrameSubstitution) {
  const BcvParams p{0.0, 1.0, 1.0};
  const auto x = bcv_vector_fields(p);
  const std::vector<double> pt{0, 5, 0};
  const auto v = x[0].value(pt);
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], 0.0);
  EXPECT_EQ(v[2], -5.0);
}

TEST(Bcv, CoframeDualityAndNormalization) {
  std::mt19937_64 rng(42);
  for (double lambda : {-1.0, 0.0, 1.0}) {
    const BcvParams p{lambda, 1.5, 3.0};
    const auto x = bcv_vector_fields(p);
    const auto w = bcv_coframe(p);
    const auto g = bcv_metric(p);
    for (int t = 0; t < 20; ++t) {
      const auto pt = domain_point(rng, p);
      for (int a = 0; a < 3; ++a) {
        const auto v = x[a].value(pt);
        for (int b = 0; b < 3; ++b) {
          double s = 0;
          for (int i = 0; i < 3; ++i) s += w.omega[b][i].value(pt) * v[i];
          EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-12);
        }
      }
      const auto x3 = x[2].value(pt);
      double n = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) n += g(i, j).value(pt) * x3[i] * x3[j];
      EXPECT_NEAR(n / p.L, 1.0, 1e-12);
    }
  }
}

TEST(Bcv, ClosedConnectionEntries) {
  const BcvParams p{1.0, 1.0, 2.0};
  const std::vector<double> pt{0.3, -0.2, 0.5};
  const auto t = bcv_connection_closed(p, pt);
  EXPECT_NEAR(t.gamma(0, 2, 1), -std::sqrt(2.0), 1e-15);
  const BcvParams h{0.0, 1.0, 2.0};
  const auto th = bcv_connection_closed(h, pt);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(th.gamma(0, 0, k), 0.0);
}

TEST(Bcv, ClosedCurvatureEntries) {
  const BcvParams p{1.0, 1.0, 2.0};
  const std::vector<double> pt{0.3, -0.2, 0.5};
  const auto c = bcv_curvature_closed(p, pt);
  EXPECT_DOUBLE_EQ(c.riem(0, 2, 2, 0), 2.0);
  EXPECT_DOUBLE_EQ(c.scalar, -2.0);
  EXPECT_DOUBLE_EQ(bcv_scalar(p, pt), -2.0);
  const BcvParams flat{0.0, 1e-300, 1.0};
  const auto fc = bcv_curvature_closed(flat, pt);
  for (double v : fc.riem.data()) EXPECT_NEAR(v, 0.0, 1e-300);
}

TEST(Bcv, Classification) {
  EXPECT_EQ(bcv_classify({1.0, 1.0, 1.0}), BcvClass::SphereLike);
  EXPECT_EQ(bcv_classify({0.0, 1.0, 1.0}), BcvClass::Heisenberg);
  EXPECT_EQ(bcv_classify({-1.0, 1.0, 1.0}), BcvClass::Sl2rLike);
  EXPECT_THROW(bcv_classify({1.0, 0.0, 1.0}), DomainError);
  EXPECT_EQ(to_string(BcvClass::Sl2rLike), "SL2R_LIKE");
}

TEST(Bcv, DomainGuard) {
  const BcvParams p{-1.0, 1.0, 1.0};
  const std::vector<double> bad{2.0, 0.0, 0.0};
  EXPECT_THROW(bcv_connection_closed(p, bad), DomainError);
  EXPECT_THROW(bcv_scalar(p, bad), DomainError);
  EXPECT_THROW(bcv_frame({0.0, 1.0, -1.0}), DomainError);
}

TEST(BcvProperty, LemmaOracleGrid) {
  std::mt19937_64 rng(42);
  for (double lambda : {-1.0, -0.5, 0.0, 0.5, 1.0})
    for (double tau : {0.5, 1.0, 2.0})
      for (double L : {1.0, 2.0, 4.0}) {
        const BcvParams p{lambda, tau, L};
        const auto fr = bcv_frame(p);
        for (int t = 0; t < 10; ++t) {
          const auto pt = domain_point(rng, p);
          const FrameGeometry geo(fr.at(pt, 2));
          EXPECT_LE(max_abs_diff(geo.connection().gamma.data(), bcv_connection_closed(p, pt).gamma.data()), 1e-10);
          const auto cur = geo.curvature();
          EXPECT_LE(max_abs_diff(cur.riem.data(), bcv_curvature_closed(p, pt).riem.data()), 1e-9);
          EXPECT_NEAR(cur.scalar, bcv_scalar(p, pt), 1e-9);
        }
      }
}

TEST(BcvProperty, CoordinateScalarMatches) {
  std::mt19937_64 rng(9);
  for (double lambda : {-1.0, 0.0, 1.0}) {
    const BcvParams p{lambda, 1.0, 2.0};
    const auto g = bcv_metric(p);
    for (int t = 0; t < 10; ++t) {
      const auto pt = domain_point(rng, p);
      EXPECT_NEAR(riemann_ricci_scalar(g, pt).scalar, bcv_scalar(p, pt), 1e-8);
    }
  }
}
