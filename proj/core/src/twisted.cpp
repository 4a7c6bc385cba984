#include "subrv/twisted.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "subrv/conventions.hpp"
#include "subrv/errors.hpp"

namespace subrv {

namespace {

std::vector<int> iota_axes(int from, int count) {
  std::vector<int> a(count);
  for (int i = 0; i < count; ++i) a[i] = from + i;
  return a;
}

void require_kind(const TwistedProductSpec& spec, const std::vector<double>& v, TangentKind declared) {
  if (declared == TangentKind::Mixed) throw MixedTangentError("mixed tangent input: decompose into base and fiber parts");
  const TangentKind actual = classify(spec, v, 1e-12);
  if (actual == TangentKind::Mixed || (actual != declared && actual != TangentKind::Base && actual != TangentKind::Fiber))
    throw MixedTangentError("vector does not lie in a single factor");
  // zero vectors classify as Base; accept any declaration for them
  bool zero = true;
  for (double x : v) zero = zero && x == 0.0;
  if (!zero && actual != declared) throw MixedTangentError("declared tangent class does not match components");
}

}  // namespace

void TwistedProductSpec::validate() const {
  if (m < 1 || n < 1 || m + n > kMaxDim) throw DimensionError("twisted product needs 1 <= m, n and m + n <= 4");
  if (gB.chart_dim() != m || gB.rank() != m) throw DimensionError("base metric must live on the m-chart");
  if (gF.chart_dim() != n || gF.rank() != n) throw DimensionError("fiber metric must live on the n-chart");
  if (f.dim() != m + n) throw DimensionError("twisting function must live on the product chart");
}

CoordinateMetric TwistedProductSpec::product() const {
  validate();
  return product_metric(gB, gF, f);
}

int default_ltilde(int m, int n) {
  (void)m;
  static_assert(conventions::kLtildeIsFiberDim);
  return n;
}

TwistedProductSpec make_twisted(CoordinateMetric gB, CoordinateMetric gF, ScalarField f, std::optional<int> ltilde) {
  TwistedProductSpec s;
  s.m = gB.rank();
  s.n = gF.rank();
  s.gB = std::move(gB);
  s.gF = std::move(gF);
  s.f = std::move(f);
  s.ltilde = ltilde.value_or(default_ltilde(s.m, s.n));
  s.validate();
  return s;
}

std::vector<TwistedProductSpec> reference_twisted_specs() {
  const auto b = [](int i) { return ScalarField::coord(2, i); };
  const auto x = [](int i) { return ScalarField::coord(4, i); };
  const auto one2 = ScalarField::constant(2, 1.0);
  const auto one4 = ScalarField::constant(4, 1.0);
  const auto square = [](const ScalarField& a) { return a * a; };
  std::vector<TwistedProductSpec> out;
  out.push_back(make_twisted(CoordinateMetric::euclidean(2), CoordinateMetric::euclidean(2),
                             one4 + 0.3 * x(0) + 0.2 * x(2)));
  out.push_back(make_twisted(CoordinateMetric::diagonal({one2, square(one2 + 0.2 * b(0))}),
                             CoordinateMetric::diagonal({one2 + 0.1 * b(1) * b(1), one2}),
                             exp(0.2 * x(0) - 0.1 * x(1) + 0.15 * x(2) * x(3))));
  out.push_back(make_twisted(
      CoordinateMetric(2, {1.2 * one2 + 0.1 * b(1), 0.1 * b(0), 0.1 * b(0), one2 + 0.2 * b(0) * b(0)}),
      CoordinateMetric(2, {one2, 0.2 * b(0), 0.2 * b(0), 1.5 * one2}),
      one4 + 0.1 * x(0) * x(0) + 0.2 * x(1) * x(3) + 0.1 * x(2)));
  out.push_back(make_twisted(CoordinateMetric::diagonal({one2, one2 + 0.3 * b(0) * b(0)}),
                             CoordinateMetric::diagonal({one2, square(one2 + 0.3 * b(0))}),
                             one4 + 0.3 * x(0) + 0.1 * x(1) * x(1)));
  out.push_back(make_twisted(CoordinateMetric::diagonal({square(one2 + 0.1 * b(1)), one2 + 0.1 * b(0) * b(1)}),
                             CoordinateMetric::diagonal({one2 + 0.2 * b(1) * b(1), one2 + 0.1 * b(0)}),
                             2.0 * one4 + 0.5 * sin(x(0) + x(3))));
  return out;
}

std::vector<std::vector<double>> sample_points(int count, unsigned seed, double r) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<std::vector<double>> out(count);
  for (auto& p : out) p = {u(rng), u(rng), u(rng), u(rng)};
  return out;
}

std::string to_string(TangentKind k) {
  switch (k) {
    case TangentKind::Base: return "BASE";
    case TangentKind::Fiber: return "FIBER";
    case TangentKind::Mixed: return "MIXED";
  }
  return "?";
}

TangentKind classify(const TwistedProductSpec& spec, std::span<const double> values, double tol) {
  if (static_cast<int>(values.size()) != spec.dim()) throw DimensionError("vector length does not match product chart");
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double t = tol * std::max(1.0, scale);
  bool base = false, fiber = false;
  for (int i = 0; i < spec.m; ++i) base = base || std::abs(values[i]) > t;
  for (int i = spec.m; i < spec.dim(); ++i) fiber = fiber || std::abs(values[i]) > t;
  if (base && fiber) return TangentKind::Mixed;
  return fiber ? TangentKind::Fiber : TangentKind::Base;
}

TwistedPoint::TwistedPoint(const TwistedProductSpec& spec, std::span<const double> point)
    : spec_(&spec),
      seeds3_((spec.validate(), seed_point(point, 3))),
      seeds2_(seed_point(point, 2)),
      base_(MetricPoint::at(spec.gB.lifted(spec.dim(), iota_axes(0, spec.m)), seeds2_)),
      fiber_(MetricPoint::at(spec.gF.lifted(spec.dim(), iota_axes(spec.m, spec.n)), seeds2_)),
      leaf_(MetricPoint::at(spec.gF.lifted(spec.dim(), iota_axes(spec.m, spec.n)).scaled(spec.f * spec.f), seeds2_)),
      f_(spec.f.eval(seeds3_)) {
  if (static_cast<int>(point.size()) != spec.dim()) throw DimensionError("point dimension mismatch");
  if (!(f_.value() > 0.0)) throw DomainError("twisting function must be positive");
  lnf_ = log(f_);
}

std::vector<double> TwistedPoint::grad_B(const Jet& h) const { return base_.gradient(h); }
std::vector<double> TwistedPoint::grad_F(const Jet& h) const { return fiber_.gradient(h); }
double TwistedPoint::grad_B_norm2(const Jet& h) const {
  const auto g = grad_B(h);
  double s = 0.0;
  for (int a = 0; a < spec_->m; ++a) s += g[a] * h.d(a);
  return s;
}
double TwistedPoint::laplacian_B(const Jet& h) const { return base_.laplacian(h); }
double TwistedPoint::laplacian_F(const Jet& h) const { return fiber_.laplacian(h); }
Matrix TwistedPoint::hessian_B(const Jet& h) const { return base_.hessian(h); }

double TwistedPoint::gF_inner(std::span<const double> u, std::span<const double> v) const {
  return fiber_.inner_vectors(u.subspan(spec_->m), v.subspan(spec_->m));
}
double TwistedPoint::gB_inner(std::span<const double> u, std::span<const double> v) const {
  return base_.inner_vectors(u.first(spec_->m), v.first(spec_->m));
}

double TwistedPoint::directional(std::span<const double> v, const Jet& h) const {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * h.d(static_cast<int>(i));
  return s;
}

double TwistedPoint::frozen_second(std::span<const double> y, std::span<const double> x, const Jet& h) const {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += y[i] * x[j] * h.d(static_cast<int>(i), static_cast<int>(j));
  return s;
}

// Prop. on the Levi-Civita connection
std::vector<double> tw_connection(const TwistedProductSpec& spec, const ClassifiedVector& a,
                                  const ClassifiedVector& b, std::span<const double> point) {
  const TwistedPoint tp(spec, point);
  const int m = spec.m, d = spec.dim();
  const auto av = a.field.value(point);
  const auto bv = b.field.value(point);
  require_kind(spec, av, a.kind);
  require_kind(spec, bv, b.kind);
  const auto bj = b.field.eval(tp.seeds2());
  std::vector<double> out(d, 0.0);
  for (int k = 0; k < d; ++k) out[k] = tp.directional(av, bj[k]);
  const double fv = tp.f().value();
  if (a.kind == TangentKind::Base && b.kind == TangentKind::Base) {
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[c] += tp.base().christoffel_jet(c, i, j).value() * av[i] * bv[j];
  } else if (a.kind == TangentKind::Base) {
    const double xf = tp.directional(av, tp.f()) / fv;
    for (int k = m; k < d; ++k) out[k] += xf * bv[k];
  } else if (b.kind == TangentKind::Base) {
    const double xf = tp.directional(bv, tp.f()) / fv;
    for (int k = m; k < d; ++k) out[k] += xf * av[k];
  } else {
    const double ul = tp.directional(av, tp.lnf()), wl = tp.directional(bv, tp.lnf());
    const double guw = tp.gF_inner(av, bv);
    const auto gf = tp.grad_F(tp.f());
    const auto gb = tp.grad_B(tp.f());
    for (int k = m; k < d; ++k) out[k] += ul * bv[k] + wl * av[k] - guw / fv * gf[k - m];
    for (int c = 0; c < m; ++c) out[c] -= fv * guw * gb[c];
    for (int c = 0; c < spec.n; ++c)
      for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j)
          out[m + c] += tp.fiber().christoffel_jet(c, i, j).value() * av[m + i] * bv[m + j];
  }
  return out;
}

// Prop. on the dual connection
std::vector<double> tw_dual_connection(const TwistedProductSpec& spec, const ClassifiedVector& a,
                                       const ClassifiedCovector& w, std::span<const double> point) {
  const TwistedPoint tp(spec, point);
  const int m = spec.m, n = spec.n, d = spec.dim();
  if (static_cast<int>(w.comps.size()) != d) throw DimensionError("covector length does not match product chart");
  const auto av = a.field.value(point);
  require_kind(spec, av, a.kind);
  std::vector<double> wv(d);
  std::vector<Jet> wj;
  for (int j = 0; j < d; ++j) {
    wj.push_back(w.comps[j].eval(tp.seeds2()));
    wv[j] = wj.back().value();
  }
  require_kind(spec, wv, w.kind);
  std::vector<double> out(d, 0.0);
  for (int j = 0; j < d; ++j) out[j] = tp.directional(av, wj[j]);
  const double fv = tp.f().value();
  const Matrix gF = tp.fiber().g().values();
  const auto flatF = [&](int nu) {
    double s = 0.0;
    for (int mu = 0; mu < n; ++mu) s += gF(nu, mu) * av[m + mu];
    return s;
  };
  if (a.kind == TangentKind::Base && w.kind == TangentKind::Base) {
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int i = 0; i < m; ++i) out[b] -= wv[c] * tp.base().christoffel_jet(c, i, b).value() * av[i];
  } else if (a.kind == TangentKind::Base) {
    const double xf = tp.directional(av, tp.f()) / fv;
    for (int k = m; k < d; ++k) out[k] -= xf * wv[k];
  } else if (w.kind == TangentKind::Base) {
    const auto gb = tp.grad_B(tp.f());
    double wg = 0.0;
    for (int c = 0; c < m; ++c) wg += wv[c] * gb[c];
    for (int nu = 0; nu < n; ++nu) out[m + nu] += fv * wg * flatF(nu);
  } else {
    const double ul = tp.directional(av, tp.lnf());
    double wu = 0.0;
    for (int k = m; k < d; ++k) wu += wv[k] * av[k];
    const auto gf = tp.grad_F(tp.f());
    double wgf = 0.0;
    for (int k = 0; k < n; ++k) wgf += wv[m + k] * gf[k];
    for (int nu = 0; nu < n; ++nu) {
      out[m + nu] += -ul * wv[m + nu] - wu * tp.lnf().d(m + nu) + wgf / fv * flatF(nu);
      for (int rho = 0; rho < n; ++rho)
        for (int mu = 0; mu < n; ++mu)
          out[m + nu] -= wv[m + rho] * tp.fiber().christoffel_jet(rho, mu, nu).value() * av[m + mu];
    }
    for (int c = 0; c < m; ++c) out[c] -= wu / fv * tp.f().d(c);
  }
  return out;
}

namespace {

// R^l_{kij} contraction for a factor metric, results in chart coordinates
void add_factor_curvature(const MetricPoint& mp, int offset, std::span<const double> x, std::span<const double> y,
                          std::span<const double> z, std::vector<double>& out) {
  const Tensor4 up = mp.riemann_up();
  const int r = mp.rank();
  for (int l = 0; l < r; ++l)
    for (int k = 0; k < r; ++k)
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out[offset + l] += up(l, k, i, j) * x[offset + i] * y[offset + j] * z[offset + k];
}

// case (2): R(V,X)Y = -H^f(X,Y)/f V
std::vector<double> curv_vxy(const TwistedPoint& tp, std::span<const double> v, std::span<const double> x,
                             std::span<const double> y) {
  const int m = tp.spec().m, d = tp.spec().dim();
  const Matrix h = tp.hessian_B(tp.f());
  double hxy = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) hxy += h(a, b) * x[a] * y[b];
  std::vector<double> out(d, 0.0);
  for (int k = m; k < d; ++k) out[k] = -hxy / tp.f().value() * v[k];
  return out;
}

// case (4): R(V,W)X = VX(ln f) W - WX(ln f) V
std::vector<double> curv_vwx(const TwistedPoint& tp, std::span<const double> v, std::span<const double> w,
                             std::span<const double> x) {
  const int d = tp.spec().dim();
  const double vx = tp.frozen_second(v, x, tp.lnf());
  const double wx = tp.frozen_second(w, x, tp.lnf());
  std::vector<double> out(d, 0.0);
  for (int k = tp.spec().m; k < d; ++k) out[k] = vx * w[k] - wx * v[k];
  return out;
}

// case (5): R(X,V)W
std::vector<double> curv_xvw(const TwistedPoint& tp, std::span<const double> x, std::span<const double> v,
                             std::span<const double> w) {
  const int m = tp.spec().m, n = tp.spec().n, d = tp.spec().dim();
  const double fv = tp.f().value();
  const double gvw = fv * fv * tp.gF_inner(v, w);
  const Matrix h = tp.hessian_B(tp.f());
  const Matrix gbi = tp.base().ginv().values();
  const Matrix gfi = tp.fiber().ginv().values();
  std::vector<double> out(d, 0.0);
  for (int c = 0; c < m; ++c) {
    double s = 0.0;
    for (int a = 0; a < m; ++a)
      for (int e = 0; e < m; ++e) s += gbi(c, e) * h(a, e) * x[a];
    out[c] = -gvw / fv * s;
  }
  const double wx = tp.frozen_second(w, x, tp.lnf());
  const double gfwv = tp.gF_inner(w, v);
  for (int mu = 0; mu < n; ++mu) {
    double g = 0.0;
    for (int nu = 0; nu < n; ++nu)
      for (int a = 0; a < m; ++a) g += gfi(mu, nu) * x[a] * tp.lnf().d(m + nu, a);
    out[m + mu] = wx * v[m + mu] - gfwv * g;
  }
  return out;
}

// case (6): R(V,W)U, fiber curvature of the leaf metric
std::vector<double> curv_vwu(const TwistedPoint& tp, std::span<const double> v, std::span<const double> w,
                             std::span<const double> u) {
  const int m = tp.spec().m, d = tp.spec().dim();
  const double fv = tp.f().value();
  const double gvu = fv * fv * tp.gF_inner(v, u);
  const double gwu = fv * fv * tp.gF_inner(w, u);
  const Matrix gbi = tp.base().ginv().values();
  std::vector<double> out(d, 0.0);
  for (int c = 0; c < m; ++c) {
    double gw = 0.0, gv = 0.0;
    for (int b = 0; b < m; ++b)
      for (int k = m; k < d; ++k) {
        gw += gbi(c, b) * w[k] * tp.lnf().d(b, k);
        gv += gbi(c, b) * v[k] * tp.lnf().d(b, k);
      }
    out[c] = gvu * gw - gwu * gv;
  }
  add_factor_curvature(tp.leaf(), m, v, w, u, out);
  const double g2 = tp.grad_B_norm2(tp.f()) / (fv * fv);
  for (int k = m; k < d; ++k) out[k] -= g2 * (gwu * v[k] - gvu * w[k]);
  return out;
}

std::vector<double> negated(std::vector<double> v) {
  for (auto& x : v) x = -x;
  return v;
}

}  // namespace

std::vector<double> tw_curvature(const TwistedProductSpec& spec, const ClassifiedVector& a,
                                 const ClassifiedVector& b, const ClassifiedVector& c,
                                 std::span<const double> point) {
  const TwistedPoint tp(spec, point);
  const auto av = a.field.value(point), bv = b.field.value(point), cv = c.field.value(point);
  require_kind(spec, av, a.kind);
  require_kind(spec, bv, b.kind);
  require_kind(spec, cv, c.kind);
  using K = TangentKind;
  const K ka = a.kind, kb = b.kind, kc = c.kind;
  if (ka == K::Base && kb == K::Base && kc == K::Base) {
    std::vector<double> out(spec.dim(), 0.0);
    add_factor_curvature(tp.base(), 0, av, bv, cv, out);
    return out;
  }
  if (ka == K::Fiber && kb == K::Base && kc == K::Base) return curv_vxy(tp, av, bv, cv);
  if (ka == K::Base && kb == K::Fiber && kc == K::Base) return negated(curv_vxy(tp, bv, av, cv));
  if (ka == K::Base && kb == K::Base && kc == K::Fiber) return std::vector<double>(spec.dim(), 0.0);
  if (ka == K::Fiber && kb == K::Fiber && kc == K::Base) return curv_vwx(tp, av, bv, cv);
  if (ka == K::Base && kb == K::Fiber && kc == K::Fiber) return curv_xvw(tp, av, bv, cv);
  if (ka == K::Fiber && kb == K::Base && kc == K::Fiber) return negated(curv_xvw(tp, bv, av, cv));
  return curv_vwu(tp, av, bv, cv);
}

double tw_ricci_with(const TwistedProductSpec& spec, int ltilde, const ClassifiedVector& a,
                     const ClassifiedVector& b, std::span<const double> point) {
  const TwistedPoint tp(spec, point);
  const auto av = a.field.value(point), bv = b.field.value(point);
  require_kind(spec, av, a.kind);
  require_kind(spec, bv, b.kind);
  const int m = spec.m, n = spec.n;
  const double l = ltilde;
  const double fv = tp.f().value();
  if (a.kind == TangentKind::Base && b.kind == TangentKind::Base) {
    const Matrix ric = tp.base().curvature().ricci;
    const Matrix h = tp.hessian_B(tp.f());
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += (ric(i, j) - l / fv * h(i, j)) * av[i] * bv[j];
    return s;
  }
  if (a.kind != b.kind) {
    const auto& x = a.kind == TangentKind::Base ? av : bv;
    const auto& v = a.kind == TangentKind::Base ? bv : av;
    return -(l - 1.0) * tp.frozen_second(v, x, tp.lnf());
  }
  const Matrix ric = tp.leaf().curvature().ricci;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += ric(i, j) * av[m + i] * bv[m + j];
  const double g = fv * fv * tp.gF_inner(av, bv);
  return s + (tp.laplacian_B(tp.f()) / fv - (l - 1.0) * tp.grad_B_norm2(tp.f()) / (fv * fv)) * g;
}

double tw_ricci(const TwistedProductSpec& spec, const ClassifiedVector& a, const ClassifiedVector& b,
                std::span<const double> point) {
  return tw_ricci_with(spec, spec.ltilde, a, b, point);
}

double tw_scalar_with(const TwistedProductSpec& spec, int ltilde, std::span<const double> point) {
  const TwistedPoint tp(spec, point);
  const double l = ltilde;
  const double fv = tp.f().value();
  return tp.base().curvature().scalar + 2.0 * l / fv * tp.laplacian_B(tp.f()) + tp.leaf().curvature().scalar -
         l * (l - 1.0) * tp.grad_B_norm2(tp.f()) / (fv * fv);
}

double tw_scalar(const TwistedProductSpec& spec, std::span<const double> point) {
  return tw_scalar_with(spec, spec.ltilde, point);
}

double tw_laplacian(const TwistedProductSpec& spec, const ScalarField& h, std::span<const double> point) {
  const TwistedPoint tp(spec, point);
  const Jet hj = h.eval(tp.seeds());
  const double fv = tp.f().value();
  const double n = spec.n;
  const double gf = tp.fiber().inner_df(tp.f(), hj).value();
  const double gb = tp.base().inner_df(tp.f(), hj).value();
  return tp.laplacian_B(hj) + tp.laplacian_F(hj) / (fv * fv) + (2.0 - n) / (fv * fv * fv) * gf - n / fv * gb;
}

double tw_einstein(const TwistedProductSpec& spec, const ClassifiedVector& a, const ClassifiedVector& b,
                   std::span<const double> point) {
  const auto av = a.field.value(point), bv = b.field.value(point);
  const auto mp = MetricPoint::at(spec.product(), point, 1);
  return tw_ricci(spec, a, b, point) - 0.5 * tw_scalar(spec, point) * mp.inner_vectors(av, bv);
}

std::string to_string(EinsteinCase c) {
  switch (c) {
    case EinsteinCase::A: return "A";
    case EinsteinCase::B: return "B";
    case EinsteinCase::C: return "C";
  }
  return "?";
}

double tw_einstein_case(const TwistedProductSpec& spec, EinsteinCase which, const ClassifiedVector& a,
                        const ClassifiedVector& b, std::span<const double> point) {
  const TwistedPoint tp(spec, point);
  const auto av = a.field.value(point), bv = b.field.value(point);
  require_kind(spec, av, a.kind);
  require_kind(spec, bv, b.kind);
  const int m = spec.m, n = spec.n;
  const double l = spec.ltilde;
  const double fv = tp.f().value();
  const double lap = tp.laplacian_B(tp.f());
  const double g2 = tp.grad_B_norm2(tp.f());
  const double sb = tp.base().curvature().scalar;
  const double sleaf = tp.leaf().curvature().scalar;
  switch (which) {
    case EinsteinCase::A: {
      if (a.kind != TangentKind::Base || b.kind != TangentKind::Base) throw MixedTangentError("case A needs base vectors");
      const Matrix ric = tp.base().curvature().ricci;
      const Matrix h = tp.hessian_B(tp.f());
      double r = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) r += (ric(i, j) + (-l / fv) * h(i, j)) * av[i] * bv[j];
      const double bracket = sb / 2.0 + l / fv * lap + sleaf / 2.0 - l * (l - 1.0) * g2 / (2.0 * fv * fv);
      return r - bracket * tp.gB_inner(av, bv);
    }
    case EinsteinCase::B: {
      if (a.kind != TangentKind::Base || b.kind != TangentKind::Fiber)
        throw MixedTangentError("case B needs (base, fiber) vectors");
      return -(l - 1.0) * tp.frozen_second(bv, av, tp.lnf());
    }
    case EinsteinCase::C: {
      if (a.kind != TangentKind::Fiber || b.kind != TangentKind::Fiber) throw MixedTangentError("case C needs fiber vectors");
      const Matrix ric = tp.leaf().curvature().ricci;
      double r = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r += ric(i, j) * av[m + i] * bv[m + j];
      const double g = fv * fv * tp.gF_inner(av, bv);
      const double s = sb + 2.0 * l / fv * lap + sleaf - l * (l - 1.0) * g2 / (fv * fv);
      return r + (lap / fv - (l - 1.0) * g2 / (fv * fv)) * g - 0.5 * s * g;
    }
  }
  return 0.0;
}

LtildeArbitration arbitrate_ltilde(const std::vector<TwistedProductSpec>& specs,
                                   const std::vector<std::vector<double>>& points, double tol) {
  LtildeArbitration out;
  if (specs.empty()) throw DimensionError("arbitration needs at least one spec");
  const int m = specs[0].m, n = specs[0].n;
  for (int l : {m + n, n}) {
    LtildeCandidate c{l, 0.0, false};
    for (const auto& s : specs) {
      const int d = s.dim();
      std::vector<ClassifiedVector> basis;
      for (int i = 0; i < d; ++i)
        basis.push_back({VectorField::coordinate(d, i), i < s.m ? TangentKind::Base : TangentKind::Fiber});
      for (const auto& p : points) {
        const auto mp = MetricPoint::at(s.product(), p, 2);
        const auto cur = mp.curvature();
        c.max_residual = std::max(c.max_residual, std::abs(tw_scalar_with(s, l, p) - cur.scalar));
        for (int i = 0; i < d; ++i)
          for (int j = i; j < d; ++j)
            c.max_residual =
                std::max(c.max_residual, std::abs(tw_ricci_with(s, l, basis[i], basis[j], p) - cur.ricci(i, j)));
      }
    }
    c.consistent = c.max_residual <= tol;
    out.candidates.push_back(c);
  }
  int count = 0;
  for (const auto& c : out.candidates)
    if (c.consistent) {
      ++count;
      out.validated = c.ltilde;
    }
  if (count != 1) out.validated = -1;
  out.differs_from_sum = out.validated != -1 && out.validated != m + n;
  return out;
}

std::vector<double> CTerms::residuals() const {
  return {c1 - oracle.third_r_inner, c2 - oracle.lap_inner, c3 - oracle.hess_inner, c4 - oracle.half_lap_prod};
}

CTerms tw_c_terms(const TwistedProductSpec& spec, const ScalarField& f1, const ScalarField& f2,
                  std::span<const double> point, std::vector<int> base_order, std::vector<int> fiber_order) {
  if (spec.m != 2 || spec.n != 2) throw DimensionError("the c-term expansion is for m = n = 2");
  const TwistedPoint tp(spec, point);
  const int m = 2, nn = 2, d = 4;
  const double n = nn;
  const double l = spec.ltilde;
  const auto gBl = spec.gB.lifted(d, iota_axes(0, m));
  const auto gFl = spec.gF.lifted(d, iota_axes(m, nn));
  const FramePoint eb = OrthonormalFrame::gram_schmidt(gBl, base_order).at(tp.seeds2());
  const FramePoint ef = OrthonormalFrame::gram_schmidt(gFl, fiber_order).at(tp.seeds2());
  const FrameGeometry geoB(eb), geoF(ef);
  const Jet F1 = f1.eval(tp.seeds()), F2 = f2.eval(tp.seeds());
  const Jet& fj = tp.f();
  const double fv = fj.value();
  const auto fp = [fv](int k) { return std::pow(fv, k); };

  // first and second frame derivatives
  double e1[2], e2[2], ef_[2], b1[2], b2[2], bf[2], bl[2];
  double EE1[2][2], EE2[2][2], EB1[2][2], EB2[2][2], BE1[2][2], BE2[2][2], BB1[2][2], BB2[2][2];
  for (int i = 0; i < 2; ++i) {
    const Jet a1 = eb.apply(i, F1), a2 = eb.apply(i, F2);
    const Jet c1j = ef.apply(i, F1), c2j = ef.apply(i, F2);
    e1[i] = a1.value();
    e2[i] = a2.value();
    ef_[i] = eb.apply(i, fj).value();
    b1[i] = c1j.value();
    b2[i] = c2j.value();
    bf[i] = ef.apply(i, fj).value();
    bl[i] = ef.apply(i, tp.lnf()).value();
    for (int j = 0; j < 2; ++j) {
      EE1[j][i] = eb.apply(j, a1).value();
      EE2[j][i] = eb.apply(j, a2).value();
      EB1[j][i] = eb.apply(j, c1j).value();
      EB2[j][i] = eb.apply(j, c2j).value();
      BE1[j][i] = ef.apply(j, a1).value();
      BE2[j][i] = ef.apply(j, a2).value();
      BB1[j][i] = ef.apply(j, c1j).value();
      BB2[j][i] = ef.apply(j, c2j).value();
    }
  }
  // <e_a^*, nabla*_{e_j} e_b^*> = -Gamma(j, a, b)
  const auto DB = [&](int j, int a, int b) { return -geoB.gamma(j, a, b).value(); };
  const auto DF = [&](int k, int a, int b) { return -geoF.gamma(k, a, b).value(); };
  double gradB2 = 0.0, gradFlnf2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    gradB2 += ef_[i] * ef_[i];
    gradFlnf2 += bl[i] * bl[i];
  }

  CTerms out;
  // c1
  {
    const double sb = tp.base().curvature().scalar;
    const double sf = tp.fiber().curvature().scalar;
    const double lap = tp.laplacian_B(fj);
    double pb = 0.0, qf = 0.0;
    for (int i = 0; i < 2; ++i) {
      pb += e1[i] * e2[i];
      qf += b1[i] * b2[i];
    }
    const double r = tw_scalar(spec, point);
    out.c1_amended = r / 3.0 * (pb + qf / fp(2));
    out.c1 = (sb + 2 * l / fv * lap + sf / fp(2) + l * (l - 1) * gradB2 / fp(2)) * pb / 3.0 +
             (sb / fp(2) + 2 * l / fp(3) * lap + sf / fp(4) + l * (l - 1) * gradB2 / fp(4)) * qf / 3.0;
  }
  // c2
  {
    const Jet pb = tp.base().inner_df(F1, F2);
    const Jet qf = tp.fiber().inner_df(F1, F2);
    const Jet inv2 = reciprocal(fj * fj);
    const auto gradFf = [&](const Jet& h) { return tp.fiber().inner_df(fj, h).value(); };
    const auto gradBf = [&](const Jet& h) { return tp.base().inner_df(fj, h).value(); };
    const double q = qf.value();
    double c2 = tp.laplacian_B(pb) + tp.laplacian_F(pb) / fp(2) + (2 - n) / fp(3) * gradFf(pb) - n / fv * gradBf(pb);
    c2 += tp.laplacian_B(inv2) * q + tp.laplacian_B(qf) / fp(2) - 2 * tp.base().inner_df(inv2, qf).value();
    c2 += (tp.laplacian_F(inv2) * q + tp.laplacian_F(qf) / fp(2) - 2 * tp.fiber().inner_df(inv2, qf).value()) / fp(2);
    c2 += (2 - n) / fp(3) * gradFf(inv2) * q + (2 - n) / fp(5) * gradFf(qf) - n / fv * gradBf(inv2) * q -
          n / fp(3) * gradBf(qf);
    out.c2 = c2;
  }
  // c3, term by term
  double t3fix = 0.0;
  {
    double t = 0.0;
    for (int j = 0; j < m; ++j)
      for (int a = 0; a < m; ++a) {
        t += EE1[j][a] * EE2[j][a];
        for (int a2 = 0; a2 < m; ++a2) {
          t += EE1[j][a] * e2[a2] * DB(j, a, a2);
          t += e1[a] * EE2[j][a2] * DB(j, a2, a);
          double dd = 0.0;
          for (int g = 0; g < m; ++g) dd += DB(j, g, a) * DB(j, g, a2);
          t += e1[a] * e2[a2] * dd;
        }
      }
    for (int j = 0; j < m; ++j)
      for (int b = 0; b < nn; ++b) {
        t += EB1[j][b] * EB2[j][b] / fp(2);
        t -= EB1[j][b] * b2[b] * ef_[j] / fp(3);
        t -= b1[b] * ef_[j] * EB2[j][b] / fp(3);
        t += b1[b] * ef_[j] * b2[b] * ef_[j] / fp(4);
      }
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < nn; ++k) {
        t += BE1[k][a] * BE2[k][a] / fp(2);
        t -= BE1[k][a] * b2[k] * ef_[a] / fp(3);
      }
    for (int a = 0; a < m; ++a)
      for (int a2 = 0; a2 < m; ++a2) t += e1[a] * e2[a2] * ef_[a] * ef_[a2] / fp(2);
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < nn; ++k) {
        t += e1[a] * BB2[k][k] * ef_[a] / fp(3);
        t -= 2.0 * e1[a] * b2[k] * bl[k] * ef_[a] / fp(3);  // doubled term
      }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < nn; ++b) {
        t += e1[a] * b2[b] * ef_[a] * bf[b] / fp(4);
        for (int k = 0; k < nn; ++k) t += e1[a] * b2[b] * ef_[a] * DF(k, k, b) / fp(3);
      }
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < nn; ++k) t += BB1[k][k] * e2[a] * ef_[a] / fp(3);
    for (int k = 0; k < nn; ++k)
      for (int b = 0; b < nn; ++b) {
        t += BB1[k][b] * BB2[k][b] / fp(4);
        t -= BB1[k][b] * b2[b] * bl[k] / fp(4);
        t -= BB1[k][b] * b2[k] * bl[b] / fp(4);
      }
    for (int k = 0; k < nn; ++k)
      for (int b = 0; b < nn; ++b) {
        t += BB1[k][k] * b2[b] * bf[b] / fp(5);
        for (int b2i = 0; b2i < nn; ++b2i) {
          t += BB1[k][b] * b2[b2i] * DF(k, k, b2i) / fp(4);
          t3fix += BB1[k][b] * b2[b2i] * (DF(k, b, b2i) - DF(k, k, b2i)) / fp(4);
        }
      }
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < nn; ++k) t -= b1[k] * e2[a] * bl[k] * ef_[a] / fp(3);
    for (int k = 0; k < nn; ++k)
      for (int b = 0; b < nn; ++b) {
        t -= b1[b] * BB2[k][b] * bl[k] / fp(4);
        t += b1[b] * b2[b] * bl[k] * bl[k] / fp(4);
        t += b1[b] * b2[k] * bl[k] * bl[b] / fp(4);
        t -= b1[k] * b2[b] * bl[k] * bf[b] / fp(5);
        for (int b2i = 0; b2i < nn; ++b2i) t -= b1[b] * b2[b2i] * bl[k] * DF(k, b, b2i) / fp(4);
      }
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < nn; ++k) t -= b1[k] * e2[a] * ef_[a] * bl[k] / fp(3);
    for (int k = 0; k < nn; ++k)
      for (int b = 0; b < nn; ++b) {
        t -= b1[k] * BB2[k][b] * bl[b] / fp(4);
        t += b1[b] * b2[k] * bl[k] * bl[k] / fp(4);
      }
    for (int k = 0; k < nn; ++k) t += b1[k] * b2[k] * gradFlnf2 / fp(4);
    for (int k = 0; k < nn; ++k)
      for (int b = 0; b < nn; ++b) {
        t -= b1[k] * b2[b] * bf[b] * bl[k] / fp(5);
        double gd = 0.0;
        for (int g = 0; g < nn; ++g) gd += bl[g] * DF(k, g, b);
        t -= b1[k] * b2[b] * gd / fp(4);
      }
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < nn; ++k) t -= b1[k] * BE2[k][a] * ef_[a] / fp(3);
    for (int k = 0; k < nn; ++k) t += b1[k] * b2[k] * gradB2 / fp(4);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < nn; ++b) t += b1[b] * e2[a] * ef_[a] * bf[b] / fp(4);
    for (int k = 0; k < nn; ++k)
      for (int b = 0; b < nn; ++b) {
        t += b1[b] * BB2[k][k] * bf[b] / fp(5);
        t -= 2.0 * b1[b] * b2[k] * bl[k] * bf[b] / fp(5);  // doubled term
      }
    for (int b = 0; b < nn; ++b)
      for (int b2i = 0; b2i < nn; ++b2i) {
        t += b1[b] * b2[b2i] * bf[b] * bf[b2i] / fp(6);
        for (int k = 0; k < nn; ++k) t += b1[b] * b2[b2i] * bf[b] * DF(k, k, b2i) / fp(5);
      }
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < nn; ++k)
        for (int b = 0; b < nn; ++b) t += b1[b] * e2[a] * ef_[a] * DF(k, k, b) / fp(3);
    for (int k = 0; k < nn; ++k)
      for (int b = 0; b < nn; ++b) {
        for (int b2i = 0; b2i < nn; ++b2i) {
          t += b1[b] * BB2[k][b2i] * DF(k, b2i, b) / fp(4);
          t -= b1[b] * b2[b2i] * bl[k] * DF(k, b2i, b) / fp(4);
          t += b1[b] * b2[b2i] * bf[b2i] * DF(k, k, b) / fp(5);
          double dd = 0.0;
          for (int g = 0; g < nn; ++g) dd += DF(k, g, b) * DF(k, g, b2i);
          t += b1[b] * b2[b2i] * dd / fp(4);
        }
        double gd = 0.0;
        for (int g = 0; g < nn; ++g) gd += DF(k, g, b) * bl[g];
        t -= b1[b] * b2[k] * gd / fp(4);
      }
    out.c3 = t;
    out.c3_amended = t + t3fix;
  }
  // c4
  {
    const double lb1 = tp.laplacian_B(F1), lb2 = tp.laplacian_B(F2);
    const double lf1 = tp.laplacian_F(F1), lf2 = tp.laplacian_F(F2);
    const double gF1 = tp.fiber().inner_df(fj, F1).value(), gF2 = tp.fiber().inner_df(fj, F2).value();
    const double gB1 = tp.base().inner_df(fj, F1).value(), gB2 = tp.base().inner_df(fj, F2).value();
    const double X1 = fp(2) * lb1 + lf1, X2 = fp(2) * lb2 + lf2;
    double s = lb1 * lb2 + (lb1 * lf2 + lb2 * lf1) / fp(2) + lf1 * lf2 / fp(4);
    s += ((2 - n) / fp(5) * gF2 - n / fp(3) * X1 * gB2) * X1;
    s += ((2 - n) / fp(5) * X1 - n * (2 - n) / fp(4) * gB2 + (2 - n) * (2 - n) / fp(6) * gF2) * gF1;
    s -= (n / fp(3) * X2 - n * n / fp(2) * gB2 + n * (2 - n) / fp(4) * gF2) * gB1;
    out.c4 = -0.5 * s;
    const double d1 = X1 / fp(2) + (2 - n) / fp(3) * gF1 - n / fv * gB1;
    const double d2 = X2 / fp(2) + (2 - n) / fp(3) * gF2 - n / fv * gB2;
    out.c4_amended = -0.5 * d1 * d2;
  }
  out.f_pow_n = fp(nn);
  out.volume = tp.base().sqrt_det().value() * tp.fiber().sqrt_det().value();
  out.omega4 = out.sum() * out.f_pow_n * out.volume;
  const MetricPoint full = MetricPoint::at(spec.product(), tp.seeds2());
  out.oracle = omega4_terms(full, F1, F2);
  out.oracle_density = out.oracle.sum() * full.sqrt_det().value();
  return out;
}

std::vector<double> oracle_connection(const TwistedProductSpec& spec, const VectorField& a, const VectorField& b,
                                      std::span<const double> point) {
  const auto seeds = seed_point(point, 2);
  const MetricPoint mp = MetricPoint::at(spec.product(), seeds);
  const auto av = a.value(point);
  const auto bj = b.eval(seeds);
  const int d = spec.dim();
  std::vector<double> out(d, 0.0);
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) out[k] += av[i] * bj[k].d(i);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[k] += mp.christoffel_jet(k, i, j).value() * av[i] * bj[j].value();
  }
  return out;
}

std::vector<double> oracle_dual_connection(const TwistedProductSpec& spec, const VectorField& a,
                                           const std::vector<ScalarField>& w, std::span<const double> point) {
  const auto seeds = seed_point(point, 2);
  const MetricPoint mp = MetricPoint::at(spec.product(), seeds);
  const auto av = a.value(point);
  const int d = spec.dim();
  std::vector<Jet> wj;
  for (const auto& c : w) wj.push_back(c.eval(seeds));
  std::vector<double> out(d, 0.0);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) out[j] += av[i] * wj[j].d(i);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i) out[j] -= wj[k].value() * mp.christoffel_jet(k, i, j).value() * av[i];
  }
  return out;
}

std::vector<double> oracle_curvature(const TwistedProductSpec& spec, std::span<const double> a,
                                     std::span<const double> b, std::span<const double> c,
                                     std::span<const double> point) {
  const MetricPoint mp = MetricPoint::at(spec.product(), point, 2);
  std::vector<double> out(spec.dim(), 0.0);
  add_factor_curvature(mp, 0, a, b, c, out);
  return out;
}

double oracle_ricci(const TwistedProductSpec& spec, std::span<const double> a, std::span<const double> b,
                    std::span<const double> point) {
  const auto ric = MetricPoint::at(spec.product(), point, 2).curvature().ricci;
  double s = 0.0;
  for (int i = 0; i < spec.dim(); ++i)
    for (int j = 0; j < spec.dim(); ++j) s += ric(i, j) * a[i] * b[j];
  return s;
}

double oracle_scalar(const TwistedProductSpec& spec, std::span<const double> point) {
  return MetricPoint::at(spec.product(), point, 2).curvature().scalar;
}

double oracle_laplacian(const TwistedProductSpec& spec, const ScalarField& h, std::span<const double> point) {
  return grad_hess_laplacian(spec.product(), h, point).laplacian;
}

}  // namespace subrv
