#include "subrv/bcv.hpp"

#include <cmath>

#include "subrv/errors.hpp"

namespace subrv {

void BcvParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("BCV parameter tau must be > 0");
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("BCV parameter L must be > 0");
  if (!std::isfinite(lambda)) throw DomainError("BCV parameter lambda must be finite");
}

std::string to_string(BcvClass c) {
  switch (c) {
    case BcvClass::SphereLike: return "SPHERE_LIKE";
    case BcvClass::Sl2rLike: return "SL2R_LIKE";
    case BcvClass::Heisenberg: return "HEISENBERG";
  }
  return "?";
}

ScalarField bcv_conformal_factor(const BcvParams& params) {
  const auto x1 = ScalarField::coord(3, 0), x2 = ScalarField::coord(3, 1);
  if (params.lambda == 0.0) return ScalarField::constant(3, 1.0);
  return 1.0 + (params.lambda / 4.0) * (x1 * x1 + x2 * x2);
}

void require_bcv_domain(const BcvParams& params, std::span<const double> point) {
  if (point.size() != 3) throw DimensionError("BCV points live in R^3");
  const double d = 1.0 + params.lambda / 4.0 * (point[0] * point[0] + point[1] * point[1]);
  if (!(d > kBcvDomainGuard)) throw DomainError("point outside the BCV domain");
}

BcvCoframe bcv_coframe(const BcvParams& params) {
  params.validate();
  const auto d = bcv_conformal_factor(params);
  const auto x1 = ScalarField::coord(3, 0), x2 = ScalarField::coord(3, 1);
  const auto zero = ScalarField::constant(3, 0.0);
  BcvCoframe c;
  c.omega[0] = {1.0 / d, zero, zero};
  c.omega[1] = {zero, 1.0 / d, zero};
  c.omega[2] = {params.tau * x2 / d, -params.tau * x1 / d, ScalarField::constant(3, 1.0)};
  return c;
}

std::array<VectorField, 3> bcv_vector_fields(const BcvParams& params) {
  params.validate();
  const auto d = bcv_conformal_factor(params);
  const auto x1 = ScalarField::coord(3, 0), x2 = ScalarField::coord(3, 1);
  const auto zero = ScalarField::constant(3, 0.0);
  return {VectorField({d, zero, -params.tau * x2}), VectorField({zero, d, params.tau * x1}),
          VectorField::coordinate(3, 2)};
}

OrthonormalFrame bcv_frame(const BcvParams& params) {
  auto x = bcv_vector_fields(params);
  return OrthonormalFrame({x[0], x[1], (1.0 / std::sqrt(params.L)) * x[2]});
}

CoordinateMetric bcv_metric(const BcvParams& params) {
  const auto c = bcv_coframe(params);
  std::vector<ScalarField> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      e.push_back(c.omega[0][i] * c.omega[0][j] + c.omega[1][i] * c.omega[1][j] +
                  params.L * c.omega[2][i] * c.omega[2][j]);
  return CoordinateMetric(3, std::move(e));
}

ConnectionTable bcv_connection_closed(const BcvParams& params, std::span<const double> point) {
  params.validate();
  require_bcv_domain(params, point);
  const double hl = params.lambda / 2.0;
  const double ts = params.tau * std::sqrt(params.L);
  const double x1 = point[0], x2 = point[1];
  ConnectionTable t{Tensor3(3)};
  auto set = [&](int i, int j, int k, double v) {
    t.gamma(i, j, k) = v;
    t.gamma(i, k, j) = -v;
  };
  set(0, 0, 1, hl * x2);    // nabla_X1 X1 = l/2 x2 X2
  set(0, 1, 2, ts);         // nabla_X1 X2 = ... + tau X3
  set(1, 1, 0, hl * x1);    // nabla_X2 X2 = l/2 x1 X1
  set(1, 0, 2, -ts);        // nabla_X2 X1 = ... - tau X3
  set(2, 0, 1, -ts);        // nabla_X3 X1 = -tau L X2
  return t;
}

CurvatureTable bcv_curvature_closed(const BcvParams& params, std::span<const double> point) {
  params.validate();
  require_bcv_domain(params, point);
  const double t2l = params.tau * params.tau * params.L;
  const double k[3][3] = {{0, params.lambda - 3 * t2l, t2l}, {params.lambda - 3 * t2l, 0, t2l}, {t2l, t2l, 0}};
  CurvatureTable c{Tensor4(3), Matrix(3), 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      c.riem(i, j, j, i) = k[i][j];
      c.riem(i, j, i, j) = -k[i][j];
    }
  assemble_ricci(c);
  return c;
}

double bcv_scalar(const BcvParams& params, std::span<const double> point) {
  params.validate();
  require_bcv_domain(params, point);
  return 2.0 * params.lambda - 2.0 * params.tau * params.tau * params.L;
}

BcvClass bcv_classify(const BcvParams& params) {
  if (!(params.tau > 0.0)) throw DomainError("classification needs tau > 0");
  if (params.lambda > 0.0) return BcvClass::SphereLike;
  if (params.lambda < 0.0) return BcvClass::Sl2rLike;
  return BcvClass::Heisenberg;
}

}  // namespace subrv
