#pragma once

#include <array>
#include <span>
#include <vector>

#include "subrv/bcv.hpp"
#include "subrv/coordgeom.hpp"
#include "subrv/field.hpp"

namespace subrv {

inline constexpr double kCharacteristicTol = 1e-8;

// level set {u = 0} of a function on R^3 inside a BCV space
struct SurfaceDef {
  ScalarField u;
  BcvParams params;
};

// u = x3 - phi(x1, x2)
SurfaceDef graph_surface(const ScalarField& phi, const BcvParams& params);
// (s1, s2) -> (s1, s2, phi(s1, s2))
std::vector<ScalarField> graph_chart(const ScalarField& phi);

struct HorizontalGradient {
  double p = 0, q = 0;
  std::array<double, 3> vector{};  // p X1 + q X2 in coordinates
};
HorizontalGradient horizontal_gradient(const SurfaceDef& surf, std::span<const double> point);
bool is_characteristic(const SurfaceDef& surf, std::span<const double> point, double tol = kCharacteristicTol);

// Frame vectors are given by their components on (X1, X2, X~3).
struct SurfaceFrame {
  double p = 0, q = 0, r = 0;
  double l = 0, lL = 0;
  double pbar = 0, qbar = 0, pbarL = 0, qbarL = 0, rbarL = 0;
  std::array<double, 3> vL{}, e1bar{}, e2bar{};
  std::array<double, 3> coordinates(const std::array<double, 3>& comps, const SurfaceDef& surf,
                                    std::span<const double> point) const;
};
SurfaceFrame surface_frame(const SurfaceDef& surf, std::span<const double> point, double tol = kCharacteristicTol);

struct SecondFundamentalForm {
  double h11 = 0, h12 = 0, h22 = 0;
  double det() const { return h11 * h22 - h12 * h12; }
  double trace() const { return h11 + h22; }
};
// the displayed closed formulas
SecondFundamentalForm second_fundamental_form(const SurfaceDef& surf, std::span<const double> point,
                                              double tol = kCharacteristicTol);
enum class ConnectionSource { Closed, Koszul };
// <nabla_{e_i} v_L, e_j> from a connection table of the BCV frame
SecondFundamentalForm second_fundamental_form_direct(const SurfaceDef& surf, std::span<const double> point,
                                                     ConnectionSource source = ConnectionSource::Closed,
                                                     double tol = kCharacteristicTol);

struct MeanCurvatures {
  double H_L = 0;
  double H_inf = 0;
};
MeanCurvatures mean_curvatures(const SurfaceDef& surf, std::span<const double> point, double tol = kCharacteristicTol);

struct GaussSectional {
  double K_ambient = 0;
  double det_II = 0;
  double K_sigma = 0;
};
// II taken from its definition
GaussSectional gauss_sectional(const SurfaceDef& surf, std::span<const double> point, double tol = kCharacteristicTol);

// three-term displayed formula
double a1_limit(const SurfaceDef& surf, std::span<const double> point, double tol = kCharacteristicTol);
// limit of K_sigma as L grows: the displayed formula without its lambda*tau term
double a1_limit_exact(const SurfaceDef& surf, std::span<const double> point, double tol = kCharacteristicTol);

// v on span(e1bar, e2bar), frame components
std::array<double, 3> jl_rotate(const SurfaceFrame& frame, std::span<const double> v, double tol = 1e-10);

CoordinateMetric induced_surface_metric(const BcvParams& params, const std::vector<ScalarField>& chartmap);
double intrinsic_gauss_curvature(const BcvParams& params, const std::vector<ScalarField>& chartmap,
                                 std::span<const double> point2);

enum class MeasureMode { Riemannian, Limit };
// Riemannian: sqrt det of the induced metric. Limit: pullback of pbar w2^w3 - qbar w1^w3.
double surface_measure_density(const SurfaceDef& surf, const std::vector<ScalarField>& chartmap,
                               std::span<const double> point2, MeasureMode mode, double tol = kCharacteristicTol);

}  // namespace subrv
