#include "subrv/functionals.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "subrv/errors.hpp"
#include "subrv/frames.hpp"

namespace subrv {

LimitFit fit_sqrt_limit(std::span<const LSample> samples, bool with_inverse_L) {
  const int n = static_cast<int>(samples.size());
  if (n < 4) throw DomainError("limit fit needs at least 4 samples");
  for (int i = 0; i < n; ++i) {
    if (!(samples[i].first > 0.0) || !std::isfinite(samples[i].second))
      throw DomainError("limit fit samples need L > 0 and finite values");
    if (i > 0 && !(samples[i].first > samples[i - 1].first)) throw DomainError("L must be strictly increasing");
  }
  if (std::log10(samples.back().first / samples.front().first) < 4.0 - 1e-12)
    throw DomainError("limit fit samples must span at least 4 decades");

  const int cols = with_inverse_L ? 3 : 2;
  Eigen::MatrixXd A(n, cols);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const double L = samples[i].first;
    A(i, 0) = 1.0;
    A(i, 1) = 1.0 / std::sqrt(L);
    if (with_inverse_L) A(i, 2) = 1.0 / L;
    v(i) = samples[i].second;
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(v);
  LimitFit fit;
  fit.with_inverse_L = with_inverse_L;
  fit.a = x(0);
  fit.b = x(1);
  fit.c = with_inverse_L ? x(2) : 0.0;
  fit.rms = std::sqrt((A * x - v).squaredNorm() / n);

  // log-log slope over samples whose distance to the limit is resolvable
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fit.a));
  std::vector<double> lx, ly;
  for (const auto& [L, val] : samples) {
    const double d = std::abs(val - fit.a);
    if (d > floor) {
      lx.push_back(std::log(L));
      ly.push_back(std::log(d));
    }
  }
  if (lx.size() < 2) {
    fit.rate = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double k = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i] / k;
      my += ly[i] / k;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.rate = sxy / sxx;
  }
  return fit;
}

std::string to_string(WresKind k) { return k == WresKind::KKW ? "KKW" : "DSZ"; }

double wres_constants(int m, WresKind kind) {
  if (m < 1) throw DomainError("Wres constants need m >= 1");
  const double sphere = 2.0 * std::pow(std::numbers::pi, m) / std::tgamma(static_cast<double>(m));
  const double lead = kind == WresKind::KKW ? (m - 1) / 6.0 : std::pow(2.0, m) / 6.0;
  return lead * sphere;
}

void TwistedBcvSpec::validate() const {
  if (gB.chart_dim() != 2 || gB.rank() != 2) throw DimensionError("base metric must live on a 2-chart");
  if (surf.u.dim() != 3) throw DimensionError("surface function must live on R^3");
  if (chart.size() != 3) throw DimensionError("fibre chart must map into R^3");
  for (const auto& c : chart)
    if (c.dim() != 2) throw DimensionError("fibre chart components must live on R^2");
  if (f.dim() != 4) throw DimensionError("twisting function must live on the 4D product chart");
  if (ltilde < 1) throw DomainError("ltilde must be positive");
  surf.params.validate();
}

std::vector<double> TwistedBcvSpec::ambient(std::span<const double> t) const {
  if (t.size() != 2) throw DimensionError("fibre chart points are 2D");
  return {chart[0].value(t), chart[1].value(t), chart[2].value(t)};
}

std::array<double, 2> TwistedBcvSpec::chart_components(std::span<const double> t, std::span<const double> v) const {
  if (v.size() != 3) throw DimensionError("tangent vectors live in R^3");
  const auto seeds = seed_point(t, 1);
  double J[3][2];
  for (int i = 0; i < 3; ++i) {
    const Jet c = chart[i].eval(seeds);
    J[i][0] = c.d(0);
    J[i][1] = c.d(1);
  }
  // normal equations of J c = v
  double a = 0, b = 0, d = 0, r0 = 0, r1 = 0;
  for (int i = 0; i < 3; ++i) {
    a += J[i][0] * J[i][0];
    b += J[i][0] * J[i][1];
    d += J[i][1] * J[i][1];
    r0 += J[i][0] * v[i];
    r1 += J[i][1] * v[i];
  }
  const double det = a * d - b * b;
  if (!(std::abs(det) > 1e-14)) throw DomainError("fibre chart is not immersive");
  return {(d * r0 - b * r1) / det, (a * r1 - b * r0) / det};
}

TwistedProductSpec TwistedBcvSpec::at_L(double L) const {
  validate();
  BcvParams p = surf.params;
  p.L = L;
  p.validate();
  return make_twisted(gB, induced_surface_metric(p, chart), f, ltilde);
}

std::vector<ScalarField> polar_plane_chart() {
  const auto rho = ScalarField::coord(2, 0), theta = ScalarField::coord(2, 1);
  return {rho * cos(theta), rho * sin(theta), ScalarField::constant(2, 0.0)};
}

std::string to_string(Reading r) {
  switch (r) {
    case Reading::Literal: return "literal";
    case Reading::Ledger: return "ledger";
    case Reading::Amended: return "amended";
  }
  return "?";
}

namespace {

std::vector<double> join(std::span<const double> b, std::span<const double> s) {
  if (b.size() != 2 || s.size() != 2) throw DimensionError("base and fibre points are 2D");
  return {b[0], b[1], s[0], s[1]};
}

// pieces shared by every limit integrand at one (b, s)
struct LimitPoint {
  std::vector<Jet> seeds;
  MetricPoint base;
  Jet f;
  double lap_f = 0, grad_f2 = 0, scalar_B = 0;
  double a1 = 0;
  double kappa = 0;  // tau X3u / l
  std::vector<Jet> e1bar;  // chart components of e1bar on the product chart

  LimitPoint(const TwistedBcvSpec& spec, std::span<const double> b, std::span<const double> s)
      : seeds(seed_point(join(b, s), 3)),
        base(MetricPoint::at(spec.gB.lifted(4, {0, 1}), seeds)),
        f(spec.f.eval(seeds)) {
    spec.validate();
    if (!(f.value() > 0.0)) throw DomainError("twisting function must be positive");
    lap_f = base.laplacian(f);
    grad_f2 = base.inner_df(f, f).value();
    scalar_B = base.curvature().scalar;
    const SurfaceDef surf = spec.surface();
    const auto x = spec.ambient(s);
    if (is_characteristic(surf, x)) throw CharacteristicPointError("characteristic fibre point");
    a1 = a1_limit(surf, x);
    const auto X = bcv_vector_fields(surf.params);
    const ScalarField p = X[0].apply(surf.u), q = X[1].apply(surf.u), w = X[2].apply(surf.u);
    const ScalarField l = sqrt(p * p + q * q);
    kappa = surf.params.tau * w.value(x) / l.value(x);
    const auto& chart = spec.chart;
    std::array<ScalarField, 3> T;
    for (int i = 0; i < 3; ++i) T[i] = (q / l * X[0][i] - p / l * X[1][i]).compose(chart);
    ScalarField a = ScalarField::constant(2, 0.0), bb = a, d = a, r0 = a, r1 = a;
    for (int i = 0; i < 3; ++i) {
      const ScalarField j0 = chart[i].diff(0), j1 = chart[i].diff(1);
      a = a + j0 * j0;
      bb = bb + j0 * j1;
      d = d + j1 * j1;
      r0 = r0 + j0 * T[i];
      r1 = r1 + j1 * T[i];
    }
    const ScalarField det = a * d - bb * bb;
    const ScalarField c0 = (d * r0 - bb * r1) / det, c1 = (a * r1 - bb * r0) / det;
    e1bar.assign(4, Jet(4, 3, 0.0));
    e1bar[2] = c0.lift(4, {2, 3}).eval(seeds);
    e1bar[3] = c1.lift(4, {2, 3}).eval(seeds);
  }

  Jet E(const Jet& h) const { return directional(e1bar, h); }
  double gradB(const Jet& a, const Jet& h) const { return base.inner_df(a, h).value(); }
};

}  // namespace

double kkw_limit_integrand(const TwistedBcvSpec& spec, std::span<const double> b, std::span<const double> s,
                           Reading reading) {
  const LimitPoint lp(spec, b, s);
  const double l = spec.ltilde, fv = lp.f.value();
  const double grad_sign = reading == Reading::Literal ? 1.0 : -1.0;
  const double a1_factor = reading == Reading::Amended ? 2.0 : 1.0;
  return fv * fv * lp.scalar_B + 2.0 * l * fv * lp.lap_f + a1_factor * lp.a1 +
         grad_sign * l * (l - 1.0) * lp.grad_f2;
}

FiberSplit fiber_decompose(const SurfaceFrame& frame, std::span<const double> a, double L) {
  if (a.size() != 3) throw DimensionError("fibre decomposition takes 3 coefficients");
  if (!(L > 0.0)) throw DomainError("L must be positive");
  return {a[0] * frame.qbar - a[1] * frame.pbar,
          a[0] * frame.rbarL * frame.pbar + a[1] * frame.rbarL * frame.qbar - a[2] * frame.l / frame.lL * std::sqrt(L)};
}

std::array<double, 2> fiber_chart_vector(const TwistedBcvSpec& spec, std::span<const double> s,
                                         std::span<const double> a, double L) {
  SurfaceDef surf = spec.surface();
  surf.params.L = L;
  const auto x = spec.ambient(s);
  const SurfaceFrame fr = surface_frame(surf, x);
  const FiberSplit sp = fiber_decompose(fr, a, L);
  std::array<double, 3> comps{};
  for (int i = 0; i < 3; ++i) comps[i] = sp.phi1 * fr.e1bar[i] + sp.phi2 * fr.e2bar[i];
  const auto c = fr.coordinates(comps, surf, x);
  return spec.chart_components(s, c);
}

double einstein_case_integrand(const TwistedBcvSpec& spec, EinsteinCase which, std::span<const double> x,
                               std::span<const double> y, std::span<const double> b, std::span<const double> s,
                               Reading reading) {
  const std::size_t want = which == EinsteinCase::C ? 3 : 2;
  if (x.size() != want || y.size() != want)
    throw MixedTangentError("vectors do not match Einstein case " + to_string(which));
  const LimitPoint lp(spec, b, s);
  const double l = spec.ltilde, fv = lp.f.value();
  const bool literal = reading == Reading::Literal;
  switch (which) {
    case EinsteinCase::A: {
      const Matrix ric = lp.base.curvature().ricci;
      const Matrix hess = lp.base.hessian(lp.f);
      double rxy = 0, hxy = 0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          rxy += ric(i, j) * x[i] * y[j];
          hxy += hess(i, j) * x[i] * y[j];
        }
      const double gxy = lp.base.inner_vectors(x, y);
      const double sign = literal ? 1.0 : -1.0;
      const double a1_factor = reading == Reading::Amended ? 1.0 : 0.5;
      return fv * fv * rxy + sign * l * fv * hxy -
             (fv * fv * lp.scalar_B / 2.0 + l * fv * lp.lap_f + a1_factor * lp.a1 +
              sign * l * (l - 1.0) / 2.0 * lp.grad_f2) *
                 gxy;
    }
    case EinsteinCase::B: {
      const Jet lnf = log(lp.f);
      double yx = 0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) yx += y[i] * x[j] * lnf.d(2 + i, j);
      return (literal ? 1.0 : -1.0) * (l - 1.0) * fv * fv * yx;
    }
    case EinsteinCase::C: {
      const double sign = literal ? 1.0 : -1.0;
      const double a1_term = reading == Reading::Amended ? 0.0 : fv * fv * lp.a1 / 2.0;
      return (a1_term + (1.0 - l) * fv * fv * fv * lp.lap_f - std::pow(fv, 4) * lp.scalar_B / 2.0 +
              sign * (2.0 - l) * (l - 1.0) / 2.0 * fv * fv * lp.grad_f2) *
             x[2] * y[2];
    }
  }
  return 0.0;
}

std::array<double, 4> connes_d_integrands(const TwistedBcvSpec& spec, const ScalarField& f0, const ScalarField& f1,
                                          const ScalarField& f2, std::span<const double> b,
                                          std::span<const double> s) {
  for (const auto* h : {&f0, &f1, &f2})
    if (h->dim() != 4) throw DimensionError("test functions must live on the 4D product chart");
  const LimitPoint lp(spec, b, s);
  const double n = 2.0, l = spec.ltilde;
  const double fv = lp.f.value(), k = lp.kappa, A1 = lp.a1;
  const auto fp = [fv](int e) { return std::pow(fv, e); };
  const Jet F0 = f0.eval(lp.seeds), F1 = f1.eval(lp.seeds), F2 = f2.eval(lp.seeds);
  const Jet& F = lp.f;
  const Jet lnF = log(F);
  const Jet inv2 = reciprocal(F * F);

  const Jet E1 = lp.E(F1), E2 = lp.E(F2);  // order 2
  const Jet EE1 = lp.E(E1), EE2 = lp.E(E2);
  const double Ef = lp.E(F).value(), Elnf = lp.E(lnF).value();
  const Jet PB = lp.base.inner_df(F1, F2);  // order 2
  const Jet Q = E1 * E2;                    // order 2
  const double pb = PB.value(), q = Q.value();
  const double gBf2 = lp.grad_f2, lapf = lp.lap_f;
  const auto gradBf = [&](const Jet& h) { return lp.gradB(F, h); };
  // f^2 Delta_B - E E - 2 kappa E applied to h
  const auto lim_op = [&](const Jet& h) {
    return fv * fv * lp.base.laplacian(h) - lp.E(lp.E(h)).value() - 2.0 * k * lp.E(h).value();
  };

  std::array<double, 4> d{};
  // d1
  d[0] = (fv * fv * lp.scalar_B + 2 * l * fv * lapf + A1 + l * (l - 1) * gBf2) * pb +
         (lp.scalar_B + 2 * l / fv * lapf + A1 / fp(2) + l * (l - 1) * gBf2 / fp(2)) * q;
  d[0] /= 3.0;

  // d2
  {
    double t = fv * fv * lp.base.laplacian(PB) - lp.E(lp.E(PB)).value() - 2 * k * lp.E(PB).value() +
               (2 - n) / fv * Ef * lp.E(PB).value() - n * fv * gradBf(PB);
    t += fv * fv * lp.base.laplacian(inv2) * q + lp.base.laplacian(Q) - 2 * fv * fv * lp.gradB(inv2, Q);
    const double Einv2 = lp.E(inv2).value(), EQ = lp.E(Q).value();
    t -= (lp.E(lp.E(inv2)).value() + 2 * k * Einv2) * q;
    t -= (lp.E(lp.E(Q)).value() + 2 * k * EQ) / fp(2);
    t -= 2 * Einv2 * EQ;
    t += (2 - n) / fv * Ef * Einv2 * q + (2 - n) / fp(3) * Ef * EQ;
    t -= n * fv * gradBf(inv2) * q + n / fv * gradBf(Q);
    d[1] = t;
  }

  // d3
  {
    const FramePoint eb = OrthonormalFrame::gram_schmidt(spec.gB.lifted(4, {0, 1})).at(lp.seeds);
    const FrameGeometry geo(eb);
    const auto DB = [&](int j, int a, int c) { return -geo.gamma(j, a, c).value(); };
    double e1[2], e2[2], ef[2], EE1b[2][2], EE2b[2][2], eE1[2], eE2[2], Ee2[2];
    for (int i = 0; i < 2; ++i) {
      const Jet a1j = eb.apply(i, F1), a2j = eb.apply(i, F2);
      e1[i] = a1j.value();
      e2[i] = a2j.value();
      ef[i] = eb.apply(i, F).value();
      eE1[i] = eb.apply(i, E1).value();
      eE2[i] = eb.apply(i, E2).value();
      Ee2[i] = lp.E(a2j).value();
      for (int j = 0; j < 2; ++j) {
        EE1b[j][i] = eb.apply(j, a1j).value();
        EE2b[j][i] = eb.apply(j, a2j).value();
      }
    }
    double base = 0;
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a) {
        base += EE1b[j][a] * EE2b[j][a];
        for (int a2 = 0; a2 < 2; ++a2) {
          base += EE1b[j][a] * e2[a2] * DB(j, a, a2);
          base += e1[a] * EE2b[j][a2] * DB(j, a2, a);
          double dd = 0;
          for (int g = 0; g < 2; ++g) dd += DB(j, g, a) * DB(j, g, a2);
          base += e1[a] * e2[a2] * dd;
        }
      }
    const double e1v = E1.value(), e2v = E2.value(), ee1 = EE1.value(), ee2 = EE2.value();
    double t = fv * fv * base;
    for (int j = 0; j < 2; ++j) t += (fv * eE1[j] - e1v * ef[j]) * (fv * eE2[j] - e2v * ef[j]) / fp(2);
    for (int a = 0; a < 2; ++a) t += lp.E(eb.apply(a, F1)).value() * Ee2[a];
    for (int a = 0; a < 2; ++a)
      t += (fv * ee1 * e2[a] + fv * e1v * Ee2[a] - 2 * fv * Elnf * e1v * e2[a] + Ef * e1v * e2[a] +
            fv * k * e1v * e2[a]) *
           ef[a] / fp(2);
    t -= (2 * fv * Elnf - Ef - fv * k) * (ee1 * e2v + e1v * ee2) / fp(3);
    t += (4 * fv * fv * Elnf * Elnf + fv * fv * gBf2 + 5 * fv * fv * k * k + Ef * Ef - 3 * fv * Elnf * Ef +
          2 * fv * k * Ef) *
         q / fp(4);
    d[2] = t;
  }

  // d4
  {
    const double lb1 = lp.base.laplacian(F1), lb2 = lp.base.laplacian(F2);
    const double ee1 = EE1.value(), ee2 = EE2.value(), e1v = E1.value(), e2v = E2.value();
    const double g1 = gradBf(F1), g2 = gradBf(F2);
    const double op1 = lim_op(F1), op2 = lim_op(F2);
    double t = fv * fv * lb1 * lb2 - (lb1 * ee2 + lb1 * 2 * k * e2v + lb2 * ee1 + lb2 * 2 * k * e1v) +
               (ee1 + 2 * k * e1v) * (ee2 + 2 * k * e2v) / fp(2);
    t += ((2 - n) / fp(3) * Ef * e2v - n / fv * g2) * op1;
    t += ((2 - n) / fp(3) * op1 - n * (2 - n) / fp(2) * g2 + (2 - n) * (2 - n) / fp(4) * Ef * e2v) * Ef * e1v;
    t -= (n / fv * op2 - n * n * g2 + n * (2 - n) / fp(2) * Ef * e2v) * g1;
    d[3] = -0.5 * t;
  }
  const double f0v = F0.value();
  for (auto& v : d) v *= f0v;
  return d;
}

namespace {

using NodeFn = std::function<std::vector<double>(std::span<const double> b, std::span<const double> s)>;

std::vector<double> integrate_nodes(const PatchGrid& grid, int ncomp, const NodeFn& fn) {
  const auto bn = tensor_nodes(grid.base);
  const auto sn = tensor_nodes(grid.fiber);
  if (grid.base.dim() != 2 || grid.fiber.dim() != 2) throw DimensionError("patch grids are 2 x 2 dimensional");
  std::vector<std::vector<double>> terms(ncomp);
  for (const auto& qb : bn)
    for (const auto& qs : sn) {
      const auto v = fn(qb.x, qs.x);
      for (int c = 0; c < ncomp; ++c) {
        const double t = qb.w * qs.w * v[c];
        if (!std::isfinite(t)) throw DomainError("non-finite integrand sample");
        terms[c].push_back(t);
      }
    }
  std::vector<double> out(ncomp);
  for (int c = 0; c < ncomp; ++c) out[c] = pairwise_sum(terms[c]);
  return out;
}

// L^{-power} * int integrand * f^2 dvol_B dvol_L for each L
using FiniteFactory = std::function<std::function<std::vector<double>(const TwistedProductSpec&,
                                                                      std::span<const double>)>(double L)>;

std::vector<std::vector<double>> finite_sweep(const TwistedBcvSpec& spec, const PatchGrid& grid,
                                              std::span<const double> Ls, double power, int ncomp,
                                              const FiniteFactory& factory) {
  std::vector<std::vector<double>> out;
  for (double L : Ls) {
    const TwistedProductSpec tw = spec.at_L(L);
    const auto integrand = factory(L);
    const double pre = std::pow(L, -power);
    auto vals = integrate_nodes(grid, ncomp, [&](std::span<const double> b, std::span<const double> s) {
      const auto pt = join(b, s);
      const double fv = tw.f.value(pt);
      const double volB = MetricPoint::at(tw.gB, b, 1).sqrt_det().value();
      const double volF = MetricPoint::at(tw.gF, s, 1).sqrt_det().value();
      auto v = integrand(tw, pt);
      for (auto& x : v) x *= fv * fv * volB * volF;
      return v;
    });
    for (auto& v : vals) v *= pre;
    out.push_back(std::move(vals));
  }
  return out;
}

std::vector<double> limit_integral(const TwistedBcvSpec& spec, const PatchGrid& grid, int ncomp, const NodeFn& fn) {
  const SurfaceDef& surf = spec.surface();
  const auto& chart = spec.chart;
  return integrate_nodes(grid, ncomp, [&](std::span<const double> b, std::span<const double> s) {
    const double volB = MetricPoint::at(spec.gB, b, 1).sqrt_det().value();
    const double sigma = std::abs(surface_measure_density(surf, chart, s, MeasureMode::Limit));
    auto v = fn(b, s);
    for (auto& x : v) x *= volB * sigma;
    return v;
  });
}

ClassifiedVector constant_vector(std::span<const double> comps, TangentKind kind) {
  std::vector<ScalarField> c;
  for (double x : comps) c.push_back(ScalarField::constant(4, x));
  return {VectorField(c), kind};
}

void check_Ls(std::span<const double> Ls) {
  if (Ls.empty()) throw DomainError("empty L grid");
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    if (!(Ls[i] > 0.0)) throw DomainError("L values must be positive");
    if (i > 0 && !(Ls[i] > Ls[i - 1])) throw DomainError("L grid must be strictly increasing");
  }
}

std::vector<LSample> pair_up(std::span<const double> Ls, const std::vector<std::vector<double>>& vals, int comp) {
  std::vector<LSample> out;
  for (std::size_t i = 0; i < Ls.size(); ++i) out.emplace_back(Ls[i], vals[i][comp]);
  return out;
}

}  // namespace

RefereeResult kkw_referee(const TwistedBcvSpec& spec, const PatchGrid& grid, std::span<const double> Ls) {
  check_Ls(Ls);
  RefereeResult r;
  r.name = "kkw";
  r.power = 0.5;
  const auto fin = finite_sweep(spec, grid, Ls, r.power, 1, [](double) {
    return [](const TwistedProductSpec& tw, std::span<const double> pt) {
      return std::vector<double>{tw_scalar(tw, pt)};
    };
  });
  r.finite = pair_up(Ls, fin, 0);
  for (Reading rd : {Reading::Literal, Reading::Ledger, Reading::Amended}) {
    const auto v = limit_integral(spec, grid, 1, [&](std::span<const double> b, std::span<const double> s) {
      return std::vector<double>{kkw_limit_integrand(spec, b, s, rd)};
    });
    r.limits.push_back({to_string(rd), v[0]});
  }
  return r;
}

RefereeResult einstein_referee(const TwistedBcvSpec& spec, EinsteinCase which, std::span<const double> x,
                               std::span<const double> y, const PatchGrid& grid, std::span<const double> Ls) {
  check_Ls(Ls);
  RefereeResult r;
  r.name = "einstein-" + to_string(which);
  r.power = which == EinsteinCase::C ? 1.5 : 0.5;
  const std::vector<double> xv(x.begin(), x.end()), yv(y.begin(), y.end());
  const auto fin = finite_sweep(spec, grid, Ls, r.power, 1, [&](double L) {
    return [&, L](const TwistedProductSpec& tw, std::span<const double> pt) {
      std::vector<double> a(4, 0.0), c(4, 0.0);
      TangentKind ka = TangentKind::Base, kc = TangentKind::Base;
      if (which == EinsteinCase::A) {
        a = {xv[0], xv[1], 0, 0};
        c = {yv[0], yv[1], 0, 0};
      } else if (which == EinsteinCase::B) {
        a = {xv[0], xv[1], 0, 0};
        c = {0, 0, yv[0], yv[1]};
        kc = TangentKind::Fiber;
      } else {
        const auto s = pt.subspan(2);
        const auto u = fiber_chart_vector(spec, s, xv, L), v = fiber_chart_vector(spec, s, yv, L);
        a = {0, 0, u[0], u[1]};
        c = {0, 0, v[0], v[1]};
        ka = kc = TangentKind::Fiber;
      }
      return std::vector<double>{tw_einstein(tw, constant_vector(a, ka), constant_vector(c, kc), pt)};
    };
  });
  r.finite = pair_up(Ls, fin, 0);
  for (Reading rd : {Reading::Literal, Reading::Ledger, Reading::Amended}) {
    const auto v = limit_integral(spec, grid, 1, [&](std::span<const double> b, std::span<const double> s) {
      return std::vector<double>{einstein_case_integrand(spec, which, xv, yv, b, s, rd)};
    });
    r.limits.push_back({to_string(rd), v[0]});
  }
  return r;
}

std::array<RefereeResult, 4> connes_referee(const TwistedBcvSpec& spec, const ScalarField& f0, const ScalarField& f1,
                                            const ScalarField& f2, const PatchGrid& grid,
                                            std::span<const double> Ls) {
  check_Ls(Ls);
  const auto fin = finite_sweep(spec, grid, Ls, 0.5, 4, [&](double) {
    return [&](const TwistedProductSpec& tw, std::span<const double> pt) {
      const Omega4Terms t = omega4_terms(tw.product(), f1, f2, pt);
      const double w = f0.value(pt);
      return std::vector<double>{w * t.third_r_inner, w * t.lap_inner, w * t.hess_inner, w * t.half_lap_prod};
    };
  });
  const auto lim = limit_integral(spec, grid, 4, [&](std::span<const double> b, std::span<const double> s) {
    const auto d = connes_d_integrands(spec, f0, f1, f2, b, s);
    return std::vector<double>(d.begin(), d.end());
  });
  std::array<RefereeResult, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i].name = "connes-d" + std::to_string(i + 1);
    out[i].power = 0.5;
    out[i].finite = pair_up(Ls, fin, i);
    out[i].limits.push_back({"literal", lim[i]});
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Flagged: return "FLAGGED";
    case Verdict::Fail: return "FAIL";
  }
  return "?";
}

RefereeVerdict judge(const RefereeResult& r, const RefereeTolerances& tol) {
  if (r.limits.empty()) throw DomainError("referee has no candidate limits");
  RefereeVerdict out;
  out.fit = fit_sqrt_limit(r.finite, true);
  out.extrapolated = out.fit.a;
  out.literal = r.limits.front().value;
  std::size_t at = r.finite.size();
  for (std::size_t i = 0; i < r.finite.size(); ++i)
    if (std::abs(r.finite[i].first - tol.check_L) <= 1e-9 * tol.check_L) at = i;
  if (at == r.finite.size()) throw DomainError("check L is not on the grid");

  const auto rel = [&](double value, double target) {
    const double den = std::max({std::abs(target), std::abs(out.extrapolated), 1e-12});
    return std::abs(value - target) / den;
  };
  struct Test {
    double err_at = 0;
    bool monotone = true;
    bool ok = false;
  };
  const auto test = [&](double target) {
    Test t;
    t.err_at = rel(r.finite[at].second, target);
    for (std::size_t i = 1; i < r.finite.size(); ++i) {
      const double prev = rel(r.finite[i - 1].second, target), cur = rel(r.finite[i].second, target);
      if (!(cur <= prev || cur <= tol.noise_floor)) t.monotone = false;
    }
    t.ok = t.err_at <= tol.rel_tol && t.monotone;
    return t;
  };

  const Test lit = test(out.literal);
  out.rel_err_literal = lit.err_at;
  if (lit.ok) {
    out.verdict = Verdict::Pass;
    out.matched = r.limits.front().label;
    out.rel_err_matched = lit.err_at;
    out.monotone = true;
    return out;
  }
  std::vector<Candidate> others(r.limits.begin() + 1, r.limits.end());
  others.push_back({"extrapolated", out.extrapolated});
  for (const auto& c : others) {
    const Test t = test(c.value);
    if (t.ok) {
      out.verdict = Verdict::Flagged;
      out.matched = c.label;
      out.rel_err_matched = t.err_at;
      out.monotone = true;
      return out;
    }
  }
  out.verdict = Verdict::Fail;
  out.monotone = lit.monotone;
  return out;
}

std::vector<double> default_L_grid() { return {1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8}; }

RefereeSetup default_referee_setup(int base_nodes, int fiber_nodes) {
  const int d = 4;
  const auto b1 = ScalarField::coord(d, 0), b2 = ScalarField::coord(d, 1);
  const auto t1 = ScalarField::coord(d, 2), t2 = ScalarField::coord(d, 3);
  const auto c1 = ScalarField::coord(2, 0);
  CoordinateMetric gB(2, {ScalarField::constant(2, 1.0), ScalarField::constant(2, 0.0),
                          ScalarField::constant(2, 0.0), 1.0 + 0.25 * c1 * c1});
  const BcvParams heis{0.0, 1.0, 1.0};
  const SurfaceDef plane{ScalarField::coord(3, 2), heis};
  RefereeSetup r;
  r.warped = {gB, plane, polar_plane_chart(), 1.1 + 0.2 * b1 + 0.1 * b2 * b2, 2};
  r.twisted = {gB, plane, polar_plane_chart(), 1.1 + 0.2 * b1 + 0.1 * b2 * b2 + 0.15 * t1 - 0.1 * t2, 2};
  r.grid = {Box{{-0.3, -0.3}, {0.3, 0.3}, {base_nodes, base_nodes}},
            Box{{1.2, 0.6}, {1.6, 1.0}, {fiber_nodes, fiber_nodes}}};
  r.f0 = 1.0 + 0.3 * b2 + 0.2 * t2;
  r.f1 = b1 * t1 + 0.5 * t2 * t2;
  r.f2 = b2 + t1 * t2 - 0.3 * b1 * b1;
  return r;
}

}  // namespace subrv
