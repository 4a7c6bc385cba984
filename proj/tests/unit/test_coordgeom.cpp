#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "subrv/coordgeom.hpp"
#include "subrv/errors.hpp"

using namespace subrv;

namespace {

ScalarField c(int dim, int i) { return ScalarField::coord(dim, i); }
ScalarField k(int dim, double v) { return ScalarField::constant(dim, v); }

void expect_riemann_symmetries(const CurvatureTable& t, double tol) {
  const int n = t.riem.extent();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          EXPECT_NEAR(t.riem(i, j, a, b), -t.riem(j, i, a, b), tol);
          EXPECT_NEAR(t.riem(i, j, a, b), -t.riem(i, j, b, a), tol);
          EXPECT_NEAR(t.riem(i, j, a, b), t.riem(a, b, i, j), tol);
          EXPECT_NEAR(t.riem(i, j, a, b) + t.riem(j, a, i, b) + t.riem(a, i, j, b), 0.0, tol);
        }
}

CoordinateMetric random_metric4(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  std::vector<ScalarField> e(16);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      ScalarField s = k(4, i == j ? 1.5 : 0.0);
      for (int a = 0; a < 4; ++a) s = s + u(rng) * c(4, a) + u(rng) * 0.5 * c(4, a) * c(4, (a + i + j) % 4);
      e[i * 4 + j] = s;
      e[j * 4 + i] = s;
    }
  return CoordinateMetric(4, e);
}

}  // namespace

TEST(Coordgeom, EuclideanChristoffelZero) {
  const std::vector<double> p{0.3, 0.1, -0.4};
  const auto t = christoffel(CoordinateMetric::euclidean(3), p);
  for (double v : t.data()) EXPECT_EQ(v, 0.0);
}

TEST(Coordgeom, PolarChristoffel) {
  const auto g = CoordinateMetric::diagonal({k(2, 1), c(2, 0) * c(2, 0)});
  const std::vector<double> p{2.0, 0.7};
  const auto t = christoffel(g, p);
  EXPECT_NEAR(t(1, 0, 1), 0.5, 1e-15);
  EXPECT_NEAR(t(1, 1, 0), 0.5, 1e-15);
  EXPECT_NEAR(t(0, 1, 1), -2.0, 1e-15);
}

TEST(Coordgeom, SphereScalarIsTwo) {
  const auto th = c(2, 0);
  const auto g = CoordinateMetric::diagonal({k(2, 1), sin(th) * sin(th)});
  const std::vector<double> p{0.9, 0.3};
  const auto t = riemann_ricci_scalar(g, p);
  EXPECT_NEAR(t.scalar, 2.0, 1e-12);
  // K = -<R(a,b)a,b>/|a^b|^2 = +1
  EXPECT_NEAR(-t.riem(0, 1, 0, 1) / (std::sin(0.9) * std::sin(0.9)), 1.0, 1e-12);
}

TEST(Coordgeom, FlatLaplacianSign) {
  const auto g = CoordinateMetric::euclidean(3);
  const std::vector<double> p{0.5, 1.0, -2.0};
  const auto r = grad_hess_laplacian(g, c(3, 0) * c(3, 0), p);
  EXPECT_DOUBLE_EQ(r.grad[0], 1.0);
  EXPECT_DOUBLE_EQ(r.hess(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(r.laplacian, -2.0);
}

TEST(Coordgeom, PolarLaplacianOfRadius) {
  const auto g = CoordinateMetric::diagonal({k(2, 1), c(2, 0) * c(2, 0)});
  const std::vector<double> p{2.0, 0.1};
  EXPECT_NEAR(grad_hess_laplacian(g, c(2, 0), p).laplacian, -0.5, 1e-15);
}

TEST(Coordgeom, NonPositiveMetricThrows) {
  const auto g = CoordinateMetric::diagonal({k(2, 1), c(2, 0)});
  const std::vector<double> p{-1.0, 0.0};
  EXPECT_THROW(christoffel(g, p), NotPositiveDefiniteError);
}

TEST(Coordgeom, Omega4FlatHandValue) {
  const auto g = CoordinateMetric::euclidean(4);
  const auto f = c(4, 0) * c(4, 0);
  for (double x : {0.0, 0.7, -1.9}) {
    const std::vector<double> p{x, 0.2, 0.3, 0.4};
    EXPECT_NEAR(omega4_density(g, f, f, p), -6.0, 1e-12);
  }
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  EXPECT_NEAR(omega4_density(g, c(4, 0), c(4, 1), p), 0.0, 1e-15);
  EXPECT_NEAR(omega4_density(g, k(4, 3), f, p), 0.0, 1e-15);
}

TEST(Coordgeom, Omega4RequiresDim4) {
  const std::vector<double> p{0.1, 0.2, 0.3};
  EXPECT_THROW(omega4_density(CoordinateMetric::euclidean(3), c(3, 0), c(3, 0), p), DimensionError);
}

TEST(Coordgeom, ProductMetricBlocks) {
  const auto f = exp(c(4, 0));
  const auto g = product_metric(CoordinateMetric::euclidean(2), CoordinateMetric::euclidean(2), f);
  const std::vector<double> p{0.3, -0.2, 0.1, 0.5};
  EXPECT_NEAR(g(2, 2).value(p), std::exp(0.6), 1e-14);
  EXPECT_EQ(g(0, 2).value(p), 0.0);
  EXPECT_EQ(g(0, 0).value(p), 1.0);
  const std::vector<std::vector<double>> bad{{0, 0, 0, 0}};
  EXPECT_THROW(product_metric(CoordinateMetric::euclidean(2), CoordinateMetric::euclidean(2), c(4, 0), bad),
               DomainError);
}

TEST(Coordgeom, PullbackOfPlaneIsEuclidean) {
  const std::vector<ScalarField> phi{c(2, 0), c(2, 1), k(2, 0)};
  const auto g = pullback_metric(CoordinateMetric::euclidean(3), phi);
  const std::vector<double> p{0.3, 0.4};
  EXPECT_EQ(g(0, 0).value(p), 1.0);
  EXPECT_EQ(g(0, 1).value(p), 0.0);
  EXPECT_EQ(g(1, 1).value(p), 1.0);
}

TEST(Coordgeom, PullbackSphereGaussCurvature) {
  // unit sphere graph over the disc
  const auto x = c(2, 0), y = c(2, 1);
  const std::vector<ScalarField> phi{x, y, sqrt(1.0 - x * x - y * y)};
  const auto g = pullback_metric(CoordinateMetric::euclidean(3), phi);
  const std::vector<double> p{0.2, -0.3};
  EXPECT_NEAR(riemann_ricci_scalar(g, p).scalar, 2.0, 1e-11);
}

TEST(CoordgeomProperty, RiemannSymmetriesRandomMetrics) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 5; ++t) {
    const auto g = random_metric4(rng);
    const std::vector<double> p{u(rng), u(rng), u(rng), u(rng)};
    const auto cur = riemann_ricci_scalar(g, p);
    expect_riemann_symmetries(cur, 1e-9);
  }
}

TEST(CoordgeomProperty, ConformalScalarLaw) {
  // 4D: S~ = e^{-2phi}(S + 6 Delta phi - 6 |dphi|^2) with positive Delta
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const auto g = random_metric4(rng);
  const auto phi = 0.3 * c(4, 0) * c(4, 1) + 0.2 * sin(c(4, 2)) - 0.1 * c(4, 3) * c(4, 3);
  const auto gt = g.scaled(exp(2.0 * phi));
  for (int t = 0; t < 10; ++t) {
    const std::vector<double> p{u(rng), u(rng), u(rng), u(rng)};
    const auto mp = MetricPoint::at(g, p, 2);
    const double s = mp.curvature().scalar;
    const Jet ph = phi.eval(p, 2);
    const double lap = mp.laplacian(ph);
    const double grad2 = mp.inner_df(ph, ph).value();
    const double expect = std::exp(-2 * ph.value()) * (s + 6 * lap - 6 * grad2);
    EXPECT_NEAR(riemann_ricci_scalar(gt, p).scalar, expect, 1e-7 * (1 + std::abs(expect)));
  }
}

TEST(CoordgeomProperty, Omega4ConformalInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const auto g = CoordinateMetric::euclidean(4);
  const auto f1 = c(4, 0) * c(4, 1) + sin(c(4, 2)) * c(4, 3);
  const auto f2 = exp(0.3 * c(4, 0)) + c(4, 2) * c(4, 2) * c(4, 1);
  for (const auto& phi : {0.2 * c(4, 0) * c(4, 0), 0.3 * sin(c(4, 1) + c(4, 3)), 0.1 * c(4, 0) * c(4, 2) + 0.2 * c(4, 3)}) {
    const auto gt = g.scaled(exp(2.0 * phi));
    for (int t = 0; t < 10; ++t) {
      const std::vector<double> p{u(rng), u(rng), u(rng), u(rng)};
      const double a = omega4_density(g, f1, f2, p);
      const double b = omega4_density(gt, f1, f2, p);
      EXPECT_NEAR(a, b, 1e-6 * (1 + std::abs(a)));
    }
  }
}
