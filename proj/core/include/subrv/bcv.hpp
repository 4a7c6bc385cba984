#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "subrv/coordgeom.hpp"
#include "subrv/field.hpp"
#include "subrv/frames.hpp"

namespace subrv {

inline constexpr double kBcvDomainGuard = 1e-8;

struct BcvParams {
  double lambda = 0.0;
  double tau = 1.0;
  double L = 1.0;

  void validate() const;
};

enum class BcvClass { SphereLike, Sl2rLike, Heisenberg };
std::string to_string(BcvClass c);

// 1 + lambda/4 (x1^2 + x2^2) on R^3
ScalarField bcv_conformal_factor(const BcvParams& params);
// throws DomainError when the point is outside N (with the guard margin)
void require_bcv_domain(const BcvParams& params, std::span<const double> point);

// covector components: omega[a][i] = omega_a(d_i)
struct BcvCoframe {
  std::array<std::array<ScalarField, 3>, 3> omega;
};
BcvCoframe bcv_coframe(const BcvParams& params);

// X1, X2, X3 in coordinates (X3 not normalized)
std::array<VectorField, 3> bcv_vector_fields(const BcvParams& params);
// X1, X2, L^{-1/2} X3
OrthonormalFrame bcv_frame(const BcvParams& params);
// g_L = w1^2 + w2^2 + L w^2 in coordinates
CoordinateMetric bcv_metric(const BcvParams& params);

// closed forms in the orthonormal frame (X1, X2, X~3)
ConnectionTable bcv_connection_closed(const BcvParams& params, std::span<const double> point);
CurvatureTable bcv_curvature_closed(const BcvParams& params, std::span<const double> point);
double bcv_scalar(const BcvParams& params, std::span<const double> point);
BcvClass bcv_classify(const BcvParams& params);

}  // namespace subrv
