#pragma once

#include <span>
#include <vector>

#include "subrv/field.hpp"
#include "subrv/tensor.hpp"

namespace subrv {

// Riemannian metric g_ij on a subset of chart coordinates (`axes`).
// Entries are fields on the full chart; derivatives act along the axes only.
class CoordinateMetric {
 public:
  CoordinateMetric() = default;
  CoordinateMetric(int chart_dim, std::vector<int> axes, std::vector<ScalarField> entries);
  // full-chart metric from row-major entries
  CoordinateMetric(int dim, std::vector<ScalarField> entries);

  static CoordinateMetric euclidean(int dim);
  static CoordinateMetric diagonal(std::vector<ScalarField> diag);

  int chart_dim() const { return chart_dim_; }
  int rank() const { return static_cast<int>(axes_.size()); }
  const std::vector<int>& axes() const { return axes_; }
  const ScalarField& operator()(int i, int j) const { return g_[i * rank() + j]; }

  JetMatrix eval(std::span<const Jet> seeds) const;
  CoordinateMetric scaled(const ScalarField& factor) const;
  // move to a bigger chart: local chart coordinate i becomes chart_axes[i]
  CoordinateMetric lifted(int new_chart_dim, const std::vector<int>& chart_axes) const;

 private:
  int chart_dim_ = 0;
  std::vector<int> axes_;
  std::vector<ScalarField> g_;
};

// Levi-Civita data of a metric at one point, built from metric jets.
// Local index i refers to chart coordinate axes[i].
class MetricPoint {
 public:
  MetricPoint(JetMatrix g, std::vector<int> axes);
  static MetricPoint at(const CoordinateMetric& metric, std::span<const double> point, int order = 2);
  static MetricPoint at(const CoordinateMetric& metric, std::span<const Jet> seeds);

  int rank() const { return g_.size(); }
  int order() const { return g_(0, 0).order(); }
  const std::vector<int>& axes() const { return axes_; }
  const JetMatrix& g() const { return g_; }
  const JetMatrix& ginv() const { return ginv_; }
  const Jet& sqrt_det() const { return sqrt_det_; }

  // Gamma^k_{ij} as jets one order below the metric
  const Jet& christoffel_jet(int k, int i, int j) const { return gamma_[(k * rank() + i) * rank() + j]; }
  Tensor3 christoffel() const;  // (k,i,j)
  // R^l_{kij} with R(d_i,d_j)d_k = R^l_{kij} d_l, stored (l,k,i,j)
  Tensor4 riemann_up() const;
  CurvatureTable curvature() const;

  // jet of d_i h along local index i (one order lower)
  Jet partial(const Jet& h, int i) const { return h.derivative(axes_[i]); }
  std::vector<double> gradient(const Jet& h) const;
  Matrix hessian(const Jet& h) const;
  double laplacian(const Jet& h) const;
  // g^{ij} d_i a d_j b as a jet (one order lower)
  Jet inner_df(const Jet& a, const Jet& b) const;
  double inner_vectors(std::span<const double> u, std::span<const double> v) const;

 private:
  JetMatrix g_;
  JetMatrix ginv_;
  Jet sqrt_det_;
  std::vector<int> axes_;
  std::vector<Jet> gamma_;
};

Tensor3 christoffel(const CoordinateMetric& metric, std::span<const double> point);
CurvatureTable riemann_ricci_scalar(const CoordinateMetric& metric, std::span<const double> point);

struct GradHessLaplacian {
  std::vector<double> grad;
  Matrix hess;
  double laplacian = 0.0;
};
GradHessLaplacian grad_hess_laplacian(const CoordinateMetric& metric, const ScalarField& h,
                                      std::span<const double> point);

// Pairing of scalar-curvature sign and Laplacian sign used inside Omega_4.
struct Omega4Convention {
  int curvature_sign = +1;
  int laplacian_sign = -1;
};

struct Omega4Terms {
  double third_r_inner = 0.0;   // (1/3) r <df1,df2>
  double lap_inner = 0.0;       // Delta <df1,df2>
  double hess_inner = 0.0;      // <nabla df1, nabla df2>
  double half_lap_prod = 0.0;   // -(1/2) Delta f1 Delta f2
  double sum() const { return third_r_inner + lap_inner + hess_inner + half_lap_prod; }
};

Omega4Terms omega4_terms(const MetricPoint& mp, const Jet& f1, const Jet& f2, Omega4Convention conv = {});
Omega4Terms omega4_terms(const CoordinateMetric& metric, const ScalarField& f1, const ScalarField& f2,
                         std::span<const double> point, Omega4Convention conv = {});
// density against coordinate volume: terms.sum() * sqrt(det g)
double omega4_density(const CoordinateMetric& metric, const ScalarField& f1, const ScalarField& f2,
                      std::span<const double> point, Omega4Convention conv = {});

// g_B (+) f^2 g_F on the product chart: base coordinates first.
CoordinateMetric product_metric(const CoordinateMetric& gB, const CoordinateMetric& gF, const ScalarField& f,
                                std::span<const std::vector<double>> check_points = {});

// Pullback of a metric through a parametrization chartmap: R^k -> R^n.
CoordinateMetric pullback_metric(const CoordinateMetric& g, const std::vector<ScalarField>& chartmap);

}  // namespace subrv
