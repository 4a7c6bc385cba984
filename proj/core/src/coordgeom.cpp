#include "subrv/coordgeom.hpp"

#include <cmath>

#include "subrv/errors.hpp"

namespace subrv {

CoordinateMetric::CoordinateMetric(int chart_dim, std::vector<int> axes, std::vector<ScalarField> entries)
    : chart_dim_(chart_dim), axes_(std::move(axes)), g_(std::move(entries)) {
  const int r = rank();
  if (static_cast<int>(g_.size()) != r * r) throw DimensionError("metric entry count does not match rank");
  for (int a : axes_)
    if (a < 0 || a >= chart_dim_) throw DimensionError("metric axis outside chart");
  for (const auto& e : g_)
    if (e.dim() != chart_dim_) throw DimensionError("metric entry lives on a different chart");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < i; ++j) g_[i * r + j] = g_[j * r + i];
}

CoordinateMetric::CoordinateMetric(int dim, std::vector<ScalarField> entries)
    : CoordinateMetric(dim,
                       [dim] {
                         std::vector<int> a(dim);
                         for (int i = 0; i < dim; ++i) a[i] = i;
                         return a;
                       }(),
                       std::move(entries)) {}

CoordinateMetric CoordinateMetric::euclidean(int dim) {
  std::vector<ScalarField> e;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) e.push_back(ScalarField::constant(dim, i == j ? 1.0 : 0.0));
  return CoordinateMetric(dim, std::move(e));
}

CoordinateMetric CoordinateMetric::diagonal(std::vector<ScalarField> diag) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) throw DimensionError("empty diagonal metric");
  const int dim = diag[0].dim();
  std::vector<ScalarField> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e.push_back(i == j ? diag[i] : ScalarField::constant(dim, 0.0));
  std::vector<int> axes(n);
  for (int i = 0; i < n; ++i) axes[i] = i;
  return CoordinateMetric(dim, std::move(axes), std::move(e));
}

JetMatrix CoordinateMetric::eval(std::span<const Jet> seeds) const {
  const int r = rank();
  JetMatrix m(r, Jet(static_cast<int>(seeds.size()), seeds.empty() ? 0 : seeds[0].order()));
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      m(i, j) = g_[i * r + j].eval(seeds);
      m(j, i) = m(i, j);
    }
  return m;
}

CoordinateMetric CoordinateMetric::scaled(const ScalarField& factor) const {
  std::vector<ScalarField> e;
  for (const auto& x : g_) e.push_back(factor * x);
  return CoordinateMetric(chart_dim_, axes_, std::move(e));
}

CoordinateMetric CoordinateMetric::lifted(int new_chart_dim, const std::vector<int>& chart_axes) const {
  if (static_cast<int>(chart_axes.size()) != chart_dim_) throw DimensionError("lift: axes count mismatch");
  std::vector<ScalarField> e;
  for (const auto& x : g_) e.push_back(x.lift(new_chart_dim, chart_axes));
  std::vector<int> axes;
  for (int a : axes_) axes.push_back(chart_axes[a]);
  return CoordinateMetric(new_chart_dim, std::move(axes), std::move(e));
}

MetricPoint::MetricPoint(JetMatrix g, std::vector<int> axes) : g_(std::move(g)), axes_(std::move(axes)) {
  const int n = rank();
  if (static_cast<int>(axes_.size()) != n) throw DimensionError("metric axes/rank mismatch");
  auto inv = spd_inverse(g_);
  ginv_ = std::move(inv.inverse);
  sqrt_det_ = inv.sqrt_det;
  const int ord = order();
  if (ord < 1) throw DimensionError("metric jets must have order >= 1");
  const Jet zero(g_(0, 0).dim(), ord - 1, 0.0);
  // first kind [ij,l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  std::vector<Jet> first(n * n * n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        Jet v = partial(g_(j, l), i) + partial(g_(i, l), j) - partial(g_(i, j), l);
        v *= 0.5;
        first[(i * n + j) * n + l] = v;
        first[(j * n + i) * n + l] = v;
      }
  gamma_.assign(n * n * n, zero);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = zero;
        for (int l = 0; l < n; ++l) s += ginv_(k, l).truncated(ord - 1) * first[(i * n + j) * n + l];
        gamma_[(k * n + i) * n + j] = s;
        gamma_[(k * n + j) * n + i] = s;
      }
}

MetricPoint MetricPoint::at(const CoordinateMetric& metric, std::span<const double> point, int order) {
  if (static_cast<int>(point.size()) != metric.chart_dim()) throw DimensionError("point dimension mismatch");
  const auto seeds = seed_point(point, order);
  return at(metric, seeds);
}

MetricPoint MetricPoint::at(const CoordinateMetric& metric, std::span<const Jet> seeds) {
  return MetricPoint(metric.eval(seeds), metric.axes());
}

Tensor3 MetricPoint::christoffel() const {
  const int n = rank();
  Tensor3 t(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(k, i, j) = christoffel_jet(k, i, j).value();
  return t;
}

Tensor4 MetricPoint::riemann_up() const {
  if (order() < 2) throw DimensionError("curvature needs metric jets of order >= 2");
  const int n = rank();
  Tensor4 r(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double v = christoffel_jet(l, j, k).d(axes_[i]) - christoffel_jet(l, i, k).d(axes_[j]);
          for (int m = 0; m < n; ++m)
            v += christoffel_jet(l, i, m).value() * christoffel_jet(m, j, k).value() -
                 christoffel_jet(l, j, m).value() * christoffel_jet(m, i, k).value();
          r(l, k, i, j) = v;
          r(l, k, j, i) = -v;
        }
  return r;
}

CurvatureTable MetricPoint::curvature() const {
  const int n = rank();
  const Tensor4 up = riemann_up();
  const Matrix g = g_.values();
  const Matrix gi = ginv_.values();
  CurvatureTable c{Tensor4(n), Matrix(n), 0.0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += g(l, m) * up(m, k, i, j);
          c.riem(i, j, k, l) = s;
        }
  // Ric(d_j,d_k) = sum_i (R(d_i,d_j)d_k)^i
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += up(i, k, i, j);
      c.ricci(j, k) = s;
    }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) c.scalar += gi(j, k) * c.ricci(j, k);
  return c;
}

std::vector<double> MetricPoint::gradient(const Jet& h) const {
  const int n = rank();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += ginv_(i, j).value() * h.d(axes_[j]);
  return out;
}

Matrix MetricPoint::hessian(const Jet& h) const {
  const int n = rank();
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = h.d(axes_[i], axes_[j]);
      for (int k = 0; k < n; ++k) v -= christoffel_jet(k, i, j).value() * h.d(axes_[k]);
      m(i, j) = v;
    }
  return m;
}

double MetricPoint::laplacian(const Jet& h) const {
  const Matrix hs = hessian(h);
  const int n = rank();
  double tr = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr += ginv_(i, j).value() * hs(i, j);
  return -tr;
}

Jet MetricPoint::inner_df(const Jet& a, const Jet& b) const {
  const int n = rank();
  const int ord = std::min({a.order(), b.order(), order() + 1}) - 1;
  Jet s(a.dim(), ord, 0.0);
  for (int i = 0; i < n; ++i) {
    const Jet ai = partial(a, i).truncated(ord);
    for (int j = 0; j < n; ++j) s += ginv_(i, j).truncated(ord) * ai * partial(b, j).truncated(ord);
  }
  return s;
}

double MetricPoint::inner_vectors(std::span<const double> u, std::span<const double> v) const {
  const int n = rank();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += g_(i, j).value() * u[i] * v[j];
  return s;
}

Tensor3 christoffel(const CoordinateMetric& metric, std::span<const double> point) {
  return MetricPoint::at(metric, point, 1).christoffel();
}

CurvatureTable riemann_ricci_scalar(const CoordinateMetric& metric, std::span<const double> point) {
  return MetricPoint::at(metric, point, 2).curvature();
}

GradHessLaplacian grad_hess_laplacian(const CoordinateMetric& metric, const ScalarField& h,
                                      std::span<const double> point) {
  const auto seeds = seed_point(point, 2);
  const MetricPoint mp(metric.eval(seeds), metric.axes());
  const Jet hj = h.eval(seeds);
  return {mp.gradient(hj), mp.hessian(hj), mp.laplacian(hj)};
}

Omega4Terms omega4_terms(const MetricPoint& mp, const Jet& f1, const Jet& f2, Omega4Convention conv) {
  if (mp.rank() != 4) throw DimensionError("omega4 needs a 4-dimensional metric");
  if (f1.order() < 3 || f2.order() < 3 || mp.order() < 2)
    throw DimensionError("omega4 needs order-3 functions and an order-2 metric");
  const int n = 4;
  const double r = conv.curvature_sign * mp.curvature().scalar;
  const Jet inner = mp.inner_df(f1, f2);
  // laplacian_sign -1 is the positive Laplacian returned by MetricPoint
  const auto lap = [&](const Jet& h) { return -conv.laplacian_sign * mp.laplacian(h); };
  const Matrix h1 = mp.hessian(f1), h2 = mp.hessian(f2);
  const Matrix gi = mp.ginv().values();
  double hh = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) hh += gi(i, k) * gi(j, l) * h1(i, j) * h2(k, l);
  Omega4Terms t;
  t.third_r_inner = r * inner.value() / 3.0;
  t.lap_inner = lap(inner);
  t.hess_inner = hh;
  t.half_lap_prod = -0.5 * lap(f1) * lap(f2);
  return t;
}

Omega4Terms omega4_terms(const CoordinateMetric& metric, const ScalarField& f1, const ScalarField& f2,
                         std::span<const double> point, Omega4Convention conv) {
  if (metric.rank() != 4) throw DimensionError("omega4 needs a 4-dimensional metric");
  const auto seeds = seed_point(point, 3);
  const auto low = seed_point(point, 2);
  const MetricPoint mp(metric.eval(low), metric.axes());
  return omega4_terms(mp, f1.eval(seeds), f2.eval(seeds), conv);
}

double omega4_density(const CoordinateMetric& metric, const ScalarField& f1, const ScalarField& f2,
                      std::span<const double> point, Omega4Convention conv) {
  if (metric.rank() != 4) throw DimensionError("omega4 needs a 4-dimensional metric");
  const auto seeds = seed_point(point, 3);
  const auto low = seed_point(point, 2);
  const MetricPoint mp(metric.eval(low), metric.axes());
  return omega4_terms(mp, f1.eval(seeds), f2.eval(seeds), conv).sum() * mp.sqrt_det().value();
}

CoordinateMetric product_metric(const CoordinateMetric& gB, const CoordinateMetric& gF, const ScalarField& f,
                                std::span<const std::vector<double>> check_points) {
  const int m = gB.rank(), n = gF.rank();
  const int dim = m + n;
  if (gB.chart_dim() != m || gF.chart_dim() != n) throw DimensionError("factor metrics must be full-rank on their charts");
  if (f.dim() != dim) throw DimensionError("twisting function must live on the product chart");
  for (const auto& p : check_points)
    if (!(f.value(p) > 0.0)) throw DomainError("twisting function must be positive");
  std::vector<int> base_axes(m), fiber_axes(n);
  for (int i = 0; i < m; ++i) base_axes[i] = i;
  for (int i = 0; i < n; ++i) fiber_axes[i] = m + i;
  const auto b = gB.lifted(dim, base_axes);
  const auto fb = gF.lifted(dim, fiber_axes);
  const ScalarField f2 = f * f;
  std::vector<ScalarField> e;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (i < m && j < m)
        e.push_back(b(i, j));
      else if (i >= m && j >= m)
        e.push_back(f2 * fb(i - m, j - m));
      else
        e.push_back(ScalarField::constant(dim, 0.0));
    }
  return CoordinateMetric(dim, std::move(e));
}

CoordinateMetric pullback_metric(const CoordinateMetric& g, const std::vector<ScalarField>& chartmap) {
  if (g.rank() != g.chart_dim()) throw DimensionError("pullback needs a full-rank metric");
  const int n = g.chart_dim();
  if (static_cast<int>(chartmap.size()) != n) throw DimensionError("chart map must have one field per coordinate");
  const int k = chartmap[0].dim();
  std::vector<std::vector<ScalarField>> jac(n);
  for (int a = 0; a < n; ++a)
    for (int al = 0; al < k; ++al) jac[a].push_back(chartmap[a].diff(al));
  std::vector<ScalarField> gc;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) gc.push_back(g(a, b).compose(chartmap));
  std::vector<ScalarField> e;
  for (int al = 0; al < k; ++al)
    for (int be = 0; be < k; ++be) {
      ScalarField s = ScalarField::constant(k, 0.0);
      if (be >= al)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s = s + jac[a][al] * jac[b][be] * gc[a * n + b];
      e.push_back(s);
    }
  return CoordinateMetric(k, std::move(e));
}

}  // namespace subrv
