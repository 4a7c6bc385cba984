#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subrv/coordgeom.hpp"
#include "subrv/field.hpp"
#include "subrv/frames.hpp"

namespace subrv {

// B x_f F with metric g_B (+) f^2 g_F; base coordinates come first on the product chart.
struct TwistedProductSpec {
  int m = 0;
  int n = 0;
  CoordinateMetric gB;  // chart dim m
  CoordinateMetric gF;  // chart dim n
  ScalarField f;        // chart dim m + n
  int ltilde = 0;

  int dim() const { return m + n; }
  void validate() const;
  CoordinateMetric product() const;
};

// l-tilde validated against the coordinate oracle (the fiber dimension)
int default_ltilde(int m, int n);
TwistedProductSpec make_twisted(CoordinateMetric gB, CoordinateMetric gF, ScalarField f,
                                std::optional<int> ltilde = std::nullopt);

// Five fixed 2+2 specs; all but the fourth have fiber-dependent twisting.
std::vector<TwistedProductSpec> reference_twisted_specs();
// points in [-r, r]^4 from a seeded generator
std::vector<std::vector<double>> sample_points(int count, unsigned seed, double r = 0.5);

enum class TangentKind { Base, Fiber, Mixed };
std::string to_string(TangentKind k);

struct ClassifiedVector {
  VectorField field;
  TangentKind kind = TangentKind::Mixed;
};
struct ClassifiedCovector {
  std::vector<ScalarField> comps;
  TangentKind kind = TangentKind::Mixed;
};

// classify by which block is nonzero at the point
TangentKind classify(const TwistedProductSpec& spec, std::span<const double> values, double tol = 0.0);

// Geometry of the factors at one point of the product chart.
class TwistedPoint {
 public:
  TwistedPoint(const TwistedProductSpec& spec, std::span<const double> point);

  const TwistedProductSpec& spec() const { return *spec_; }
  const std::vector<Jet>& seeds() const { return seeds3_; }
  const std::vector<Jet>& seeds2() const { return seeds2_; }
  const MetricPoint& base() const { return base_; }
  const MetricPoint& fiber() const { return fiber_; }
  const MetricPoint& leaf() const { return leaf_; }
  const Jet& f() const { return f_; }
  const Jet& lnf() const { return lnf_; }

  // base/fiber block values at the point
  std::vector<double> grad_B(const Jet& h) const;  // length m, g_B
  std::vector<double> grad_F(const Jet& h) const;  // length n, g_F
  double grad_B_norm2(const Jet& h) const;
  double laplacian_B(const Jet& h) const;
  double laplacian_F(const Jet& h) const;
  Matrix hessian_B(const Jet& h) const;
  double gF_inner(std::span<const double> u, std::span<const double> v) const;  // fiber blocks
  double gB_inner(std::span<const double> u, std::span<const double> v) const;  // base blocks
  // X(h) for a full-chart vector at the point
  double directional(std::span<const double> v, const Jet& h) const;
  // Y X (h) with both vectors frozen: sum Y^i X^j d_i d_j h
  double frozen_second(std::span<const double> y, std::span<const double> x, const Jet& h) const;

 private:
  const TwistedProductSpec* spec_;
  std::vector<Jet> seeds3_;
  std::vector<Jet> seeds2_;
  MetricPoint base_;
  MetricPoint fiber_;
  MetricPoint leaf_;
  Jet f_;
  Jet lnf_;
};

std::vector<double> tw_connection(const TwistedProductSpec& spec, const ClassifiedVector& a,
                                  const ClassifiedVector& b, std::span<const double> point);
std::vector<double> tw_dual_connection(const TwistedProductSpec& spec, const ClassifiedVector& a,
                                       const ClassifiedCovector& w, std::span<const double> point);
// R(A,B)C from Prop. 2.4 cases; vectors are frozen at the point
std::vector<double> tw_curvature(const TwistedProductSpec& spec, const ClassifiedVector& a,
                                 const ClassifiedVector& b, const ClassifiedVector& c,
                                 std::span<const double> point);
double tw_ricci(const TwistedProductSpec& spec, const ClassifiedVector& a, const ClassifiedVector& b,
                std::span<const double> point);
double tw_ricci_with(const TwistedProductSpec& spec, int ltilde, const ClassifiedVector& a,
                     const ClassifiedVector& b, std::span<const double> point);
double tw_scalar(const TwistedProductSpec& spec, std::span<const double> point);
double tw_scalar_with(const TwistedProductSpec& spec, int ltilde, std::span<const double> point);
double tw_laplacian(const TwistedProductSpec& spec, const ScalarField& h, std::span<const double> point);

// Ric - S/2 g from tw_ricci and tw_scalar
double tw_einstein(const TwistedProductSpec& spec, const ClassifiedVector& a, const ClassifiedVector& b,
                   std::span<const double> point);
enum class EinsteinCase { A, B, C };
std::string to_string(EinsteinCase c);
// the expanded case formulas (base/base, base/fiber, fiber/fiber)
double tw_einstein_case(const TwistedProductSpec& spec, EinsteinCase which, const ClassifiedVector& a,
                        const ClassifiedVector& b, std::span<const double> point);

// l-tilde arbitration against the coordinate oracle
struct LtildeCandidate {
  int ltilde = 0;
  double max_residual = 0.0;
  bool consistent = false;
};
struct LtildeArbitration {
  std::vector<LtildeCandidate> candidates;  // m+n first, then n
  int validated = -1;                       // -1 if none or several
  bool differs_from_sum = false;
};
LtildeArbitration arbitrate_ltilde(const std::vector<TwistedProductSpec>& specs,
                                   const std::vector<std::vector<double>>& points, double tol);

// c1..c4 of the Omega_4 expansion (m = n = 2) with per-term oracle pieces.
struct CTerms {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  double f_pow_n = 0;       // f^n
  double volume = 0;        // sqrt(det g_B) sqrt(det g_F)
  double omega4 = 0;        // (c1+c2+c3+c4) f^n volume
  Omega4Terms oracle;       // coordinate pieces on the product metric
  double oracle_density = 0;
  // amended readings: c1 with the twisted scalar curvature, c3 with the
  // <e_b*, nabla*_k e_b'*> pairing in the fiber Hessian term, c4 with the
  // Laplacian expansion regrouped
  double c1_amended = 0, c3_amended = 0, c4_amended = 0;
  double sum() const { return c1 + c2 + c3 + c4; }
  std::vector<double> residuals() const;  // c_i - oracle piece
};
// base_order / fiber_order: Gram-Schmidt index orders
CTerms tw_c_terms(const TwistedProductSpec& spec, const ScalarField& f1, const ScalarField& f2,
                  std::span<const double> point, std::vector<int> base_order = {},
                  std::vector<int> fiber_order = {});

// Coordinate referees on the product metric.
std::vector<double> oracle_connection(const TwistedProductSpec& spec, const VectorField& a, const VectorField& b,
                                      std::span<const double> point);
std::vector<double> oracle_dual_connection(const TwistedProductSpec& spec, const VectorField& a,
                                           const std::vector<ScalarField>& w, std::span<const double> point);
std::vector<double> oracle_curvature(const TwistedProductSpec& spec, std::span<const double> a,
                                     std::span<const double> b, std::span<const double> c,
                                     std::span<const double> point);
double oracle_ricci(const TwistedProductSpec& spec, std::span<const double> a, std::span<const double> b,
                    std::span<const double> point);
double oracle_scalar(const TwistedProductSpec& spec, std::span<const double> point);
double oracle_laplacian(const TwistedProductSpec& spec, const ScalarField& h, std::span<const double> point);

}  // namespace subrv
