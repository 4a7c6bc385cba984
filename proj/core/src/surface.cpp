#include "subrv/surface.hpp"

#include <cmath>

#include "subrv/errors.hpp"
#include "subrv/frames.hpp"

namespace subrv {

namespace {

struct Quantities {
  std::array<VectorField, 3> X;
  ScalarField p, q, w, r, l, lL, pbar, qbar, pbarL, qbarL, rbarL;
};

Quantities quantities(const SurfaceDef& surf) {
  if (surf.u.dim() != 3) throw DimensionError("surface function must live on R^3");
  surf.params.validate();
  Quantities z;
  z.X = bcv_vector_fields(surf.params);
  z.p = z.X[0].apply(surf.u);
  z.q = z.X[1].apply(surf.u);
  z.w = z.X[2].apply(surf.u);
  z.r = z.w / std::sqrt(surf.params.L);
  z.l = sqrt(z.p * z.p + z.q * z.q);
  z.lL = sqrt(z.p * z.p + z.q * z.q + z.r * z.r);
  z.pbar = z.p / z.l;
  z.qbar = z.q / z.l;
  z.pbarL = z.p / z.lL;
  z.qbarL = z.q / z.lL;
  z.rbarL = z.r / z.lL;
  return z;
}

void require_regular(const SurfaceDef& surf, std::span<const double> point, double tol) {
  if (point.size() != 3) throw DimensionError("surface points live in R^3");
  require_bcv_domain(surf.params, point);
  if (is_characteristic(surf, point, tol)) throw CharacteristicPointError("characteristic point");
}

// E_j(h) for the orthonormal frame (X1, X2, X~3)
std::array<double, 3> frame_grad(const Quantities& z, const BcvParams& params, const ScalarField& h,
                                 std::span<const double> point) {
  return {frame_derivative(z.X[0], h, point), frame_derivative(z.X[1], h, point),
          frame_derivative(z.X[2], h, point) / std::sqrt(params.L)};
}

double along(const std::array<double, 3>& e, const std::array<double, 3>& g) {
  return e[0] * g[0] + e[1] * g[1] + e[2] * g[2];
}

}  // namespace

SurfaceDef graph_surface(const ScalarField& phi, const BcvParams& params) {
  if (phi.dim() != 2) throw DimensionError("graph function must live on R^2");
  const auto x1 = ScalarField::coord(3, 0), x2 = ScalarField::coord(3, 1), x3 = ScalarField::coord(3, 2);
  return {x3 - phi.compose({x1, x2}), params};
}

std::vector<ScalarField> graph_chart(const ScalarField& phi) {
  if (phi.dim() != 2) throw DimensionError("graph function must live on R^2");
  return {ScalarField::coord(2, 0), ScalarField::coord(2, 1), phi};
}

HorizontalGradient horizontal_gradient(const SurfaceDef& surf, std::span<const double> point) {
  const auto X = bcv_vector_fields(surf.params);
  HorizontalGradient g;
  g.p = frame_derivative(X[0], surf.u, point);
  g.q = frame_derivative(X[1], surf.u, point);
  const auto x1 = X[0].value(point), x2 = X[1].value(point);
  for (int i = 0; i < 3; ++i) g.vector[i] = g.p * x1[i] + g.q * x2[i];
  return g;
}

bool is_characteristic(const SurfaceDef& surf, std::span<const double> point, double tol) {
  if (!(tol > 0.0)) throw DomainError("characteristic tolerance must be positive");
  const auto g = horizontal_gradient(surf, point);
  return std::hypot(g.p, g.q) < tol;
}

std::array<double, 3> SurfaceFrame::coordinates(const std::array<double, 3>& comps, const SurfaceDef& surf,
                                                std::span<const double> point) const {
  const auto X = bcv_vector_fields(surf.params);
  const double s = 1.0 / std::sqrt(surf.params.L);
  std::array<double, 3> out{};
  for (int a = 0; a < 3; ++a) {
    const auto v = X[a].value(point);
    for (int i = 0; i < 3; ++i) out[i] += comps[a] * v[i] * (a == 2 ? s : 1.0);
  }
  return out;
}

SurfaceFrame surface_frame(const SurfaceDef& surf, std::span<const double> point, double tol) {
  require_regular(surf, point, tol);
  const auto z = quantities(surf);
  SurfaceFrame f;
  f.p = z.p.value(point);
  f.q = z.q.value(point);
  f.r = z.r.value(point);
  f.l = std::hypot(f.p, f.q);
  f.lL = std::sqrt(f.p * f.p + f.q * f.q + f.r * f.r);
  f.pbar = f.p / f.l;
  f.qbar = f.q / f.l;
  f.pbarL = f.p / f.lL;
  f.qbarL = f.q / f.lL;
  f.rbarL = f.r / f.lL;
  f.vL = {f.pbarL, f.qbarL, f.rbarL};
  f.e1bar = {f.qbar, -f.pbar, 0.0};
  f.e2bar = {f.rbarL * f.pbar, f.rbarL * f.qbar, -f.l / f.lL};
  return f;
}

SecondFundamentalForm second_fundamental_form(const SurfaceDef& surf, std::span<const double> point, double tol) {
  const SurfaceFrame fr = surface_frame(surf, point, tol);
  const auto z = quantities(surf);
  const BcvParams& bp = surf.params;
  const auto gp = frame_grad(z, bp, z.pbar, point);
  const auto gq = frame_grad(z, bp, z.qbar, point);
  const auto grL = frame_grad(z, bp, z.rbarL, point);
  const auto grl = frame_grad(z, bp, z.r / z.l, point);
  SecondFundamentalForm h;
  h.h11 = fr.l / fr.lL * (gp[0] + gq[1]) - bp.lambda / 2.0 * (fr.pbarL * point[0] + fr.qbarL * point[1]);
  // <e1, grad_H h> only sees the horizontal part of e1
  h.h12 = -fr.lL / fr.l * (fr.e1bar[0] * grL[0] + fr.e1bar[1] * grL[1]) - bp.tau * std::sqrt(bp.L);
  h.h22 = -(fr.l * fr.l) / (fr.lL * fr.lL) * (fr.e2bar[0] * grl[0] + fr.e2bar[1] * grl[1]) + grL[2] +
          (fr.pbarL - fr.qbarL) * fr.pbar * fr.qbar * fr.rbarL * fr.rbarL * bp.lambda / 2.0 * point[1];
  return h;
}

SecondFundamentalForm second_fundamental_form_direct(const SurfaceDef& surf, std::span<const double> point,
                                                     ConnectionSource source, double tol) {
  const SurfaceFrame fr = surface_frame(surf, point, tol);
  const auto z = quantities(surf);
  const ConnectionTable con = source == ConnectionSource::Closed
                                  ? bcv_connection_closed(surf.params, point)
                                  : koszul_connection(bcv_frame(surf.params), point);
  const std::array<std::array<double, 3>, 3> grads{frame_grad(z, surf.params, z.pbarL, point),
                                                   frame_grad(z, surf.params, z.qbarL, point),
                                                   frame_grad(z, surf.params, z.rbarL, point)};
  const auto entry = [&](const std::array<double, 3>& ei, const std::array<double, 3>& ej) {
    double s = 0.0;
    for (int m = 0; m < 3; ++m) {
      double dv = along(ei, grads[m]);
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) dv += ei[j] * fr.vL[k] * con.gamma(j, k, m);
      s += ej[m] * dv;
    }
    return s;
  };
  SecondFundamentalForm h;
  h.h11 = entry(fr.e1bar, fr.e1bar);
  h.h12 = 0.5 * (entry(fr.e1bar, fr.e2bar) + entry(fr.e2bar, fr.e1bar));
  h.h22 = entry(fr.e2bar, fr.e2bar);
  return h;
}

MeanCurvatures mean_curvatures(const SurfaceDef& surf, std::span<const double> point, double tol) {
  const SurfaceFrame fr = surface_frame(surf, point, tol);
  const auto z = quantities(surf);
  MeanCurvatures m;
  m.H_L = second_fundamental_form(surf, point, tol).trace();
  m.H_inf = frame_derivative(z.X[0], z.pbar, point) + frame_derivative(z.X[1], z.qbar, point) -
            surf.params.lambda / 2.0 * (fr.pbar * point[0] + fr.qbar * point[1]);
  return m;
}

GaussSectional gauss_sectional(const SurfaceDef& surf, std::span<const double> point, double tol) {
  const SurfaceFrame fr = surface_frame(surf, point, tol);
  const CurvatureTable cur = bcv_curvature_closed(surf.params, point);
  double k = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) k -= cur.riem(i, j, a, b) * fr.e1bar[i] * fr.e2bar[j] * fr.e1bar[a] * fr.e2bar[b];
  GaussSectional g;
  g.K_ambient = k;
  g.det_II = second_fundamental_form_direct(surf, point, ConnectionSource::Closed, tol).det();
  g.K_sigma = g.K_ambient + g.det_II;
  return g;
}

namespace {

double a1_terms(const SurfaceDef& surf, std::span<const double> point, double tol, bool with_lambda) {
  const SurfaceFrame fr = surface_frame(surf, point, tol);
  const auto z = quantities(surf);
  const double tau = surf.params.tau;
  const double w = z.w.value(point);
  const ScalarField ratio = z.w / z.l;
  const double e1 = fr.qbar * frame_derivative(z.X[0], ratio, point) - fr.pbar * frame_derivative(z.X[1], ratio, point);
  double a = -2.0 * tau * e1 - 4.0 * tau * tau * w * w / (fr.l * fr.l);
  if (with_lambda) a += surf.params.lambda * tau * fr.qbar * w / fr.l;
  return a;
}

}  // namespace

double a1_limit(const SurfaceDef& surf, std::span<const double> point, double tol) {
  return a1_terms(surf, point, tol, true);
}

double a1_limit_exact(const SurfaceDef& surf, std::span<const double> point, double tol) {
  return a1_terms(surf, point, tol, false);
}

std::array<double, 3> jl_rotate(const SurfaceFrame& frame, std::span<const double> v, double tol) {
  if (v.size() != 3) throw DimensionError("tangent vector needs three frame components");
  const double a = v[0] * frame.e1bar[0] + v[1] * frame.e1bar[1] + v[2] * frame.e1bar[2];
  const double b = v[0] * frame.e2bar[0] + v[1] * frame.e2bar[1] + v[2] * frame.e2bar[2];
  const double n = v[0] * frame.vL[0] + v[1] * frame.vL[1] + v[2] * frame.vL[2];
  double scale = 1.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (std::abs(n) > tol * scale) throw DomainError("vector is not tangent to the surface");
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[i] = a * frame.e2bar[i] - b * frame.e1bar[i];
  return out;
}

CoordinateMetric induced_surface_metric(const BcvParams& params, const std::vector<ScalarField>& chartmap) {
  if (chartmap.size() != 3) throw DimensionError("surface chart must map into R^3");
  return pullback_metric(bcv_metric(params), chartmap);
}

double intrinsic_gauss_curvature(const BcvParams& params, const std::vector<ScalarField>& chartmap,
                                 std::span<const double> point2) {
  const auto g = induced_surface_metric(params, chartmap);
  return MetricPoint::at(g, point2, 2).curvature().scalar / 2.0;
}

double surface_measure_density(const SurfaceDef& surf, const std::vector<ScalarField>& chartmap,
                               std::span<const double> point2, MeasureMode mode, double tol) {
  if (chartmap.size() != 3) throw DimensionError("surface chart must map into R^3");
  if (point2.size() != 2) throw DimensionError("surface chart points are 2D");
  std::vector<double> x(3);
  std::array<std::array<double, 2>, 3> J{};
  const auto seeds = seed_point(point2, 1);
  for (int i = 0; i < 3; ++i) {
    const Jet c = chartmap[i].eval(seeds);
    x[i] = c.value();
    J[i] = {c.d(0), c.d(1)};
  }
  const double rank_check =
      std::abs(J[0][0] * J[1][1] - J[0][1] * J[1][0]) + std::abs(J[0][0] * J[2][1] - J[0][1] * J[2][0]) +
      std::abs(J[1][0] * J[2][1] - J[1][1] * J[2][0]);
  if (rank_check < 1e-14) throw DomainError("surface chart is not immersive");
  if (mode == MeasureMode::Riemannian) {
    require_bcv_domain(surf.params, x);
    const auto g = induced_surface_metric(surf.params, chartmap);
    return MetricPoint::at(g, point2, 1).sqrt_det().value();
  }
  const SurfaceFrame fr = surface_frame(surf, x, tol);
  const BcvCoframe cf = bcv_coframe(surf.params);
  std::array<std::array<double, 2>, 3> w{};  // w[a][s] = omega_a(d chart / d s)
  for (int a = 0; a < 3; ++a)
    for (int s = 0; s < 2; ++s)
      for (int i = 0; i < 3; ++i) w[a][s] += cf.omega[a][i].value(x) * J[i][s];
  const auto wedge = [&](int a, int b) { return w[a][0] * w[b][1] - w[a][1] * w[b][0]; };
  return fr.pbar * wedge(1, 2) - fr.qbar * wedge(0, 2);
}

}  // namespace subrv
