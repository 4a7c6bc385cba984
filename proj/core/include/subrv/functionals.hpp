#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subrv/quadrature.hpp"
#include "subrv/surface.hpp"
#include "subrv/twisted.hpp"

namespace subrv {

// value ~ a + b / sqrt(L) (+ c / L when requested)
struct LimitFit {
  double a = 0, b = 0, c = 0;
  double rms = 0;
  double rate = 0;  // slope of log|value - a| against log L; NaN when the residual vanishes
  bool with_inverse_L = false;
};
using LSample = std::pair<double, double>;
LimitFit fit_sqrt_limit(std::span<const LSample> samples, bool with_inverse_L = false);

enum class WresKind { KKW, DSZ };
std::string to_string(WresKind k);
double wres_constants(int m, WresKind kind);

// B x_f Sigma^L with Sigma = {u = 0} in a BCV space, parametrized by `chart`;
// product chart (b1, b2, t1, t2)
struct TwistedBcvSpec {
  CoordinateMetric gB;             // chart dim 2
  SurfaceDef surf;                 // surf.params.L is ignored; each sweep sets its own
  std::vector<ScalarField> chart;  // R^2 -> R^3 onto the surface
  ScalarField f;                   // chart dim 4
  int ltilde = 2;

  void validate() const;
  const SurfaceDef& surface() const { return surf; }
  std::vector<double> ambient(std::span<const double> t) const;
  // chart components of a tangent vector given in R^3 coordinates
  std::array<double, 2> chart_components(std::span<const double> t, std::span<const double> v) const;
  TwistedProductSpec at_L(double L) const;
};

// (rho, theta) -> (rho cos theta, rho sin theta, 0): the induced metrics stay diagonal
std::vector<ScalarField> polar_plane_chart();

// which reading of a displayed integrand to evaluate
enum class Reading {
  Literal,  // closed forms taken verbatim, symbols under the convention ledger
  Ledger,   // sign of the |grad f|^2 / Hessian terms translated, A1 factor unchanged
  Amended   // ledger plus the A1 factor that the finite-L referee supports
};
std::string to_string(Reading r);

double kkw_limit_integrand(const TwistedBcvSpec& spec, std::span<const double> b, std::span<const double> s,
                           Reading reading = Reading::Literal);

struct FiberSplit {
  double phi1 = 0, phi2 = 0;
};
FiberSplit fiber_decompose(const SurfaceFrame& frame, std::span<const double> a, double L);
// chart components of the g_L tangential projection of sum a_j X_j
std::array<double, 2> fiber_chart_vector(const TwistedBcvSpec& spec, std::span<const double> s,
                                         std::span<const double> a, double L);

// case A: x, y base (2 comps); case B: x base, y fiber chart vector (2 comps);
// case C: x, y coefficients on (X1, X2, X3) (3 comps)
double einstein_case_integrand(const TwistedBcvSpec& spec, EinsteinCase which, std::span<const double> x,
                               std::span<const double> y, std::span<const double> b, std::span<const double> s,
                               Reading reading = Reading::Literal);

// the four displayed limit integrands (against dvol_B dsigma), f0 included
std::array<double, 4> connes_d_integrands(const TwistedBcvSpec& spec, const ScalarField& f0, const ScalarField& f1,
                                          const ScalarField& f2, std::span<const double> b,
                                          std::span<const double> s);

// product of a base box and a fiber chart box
struct PatchGrid {
  Box base;
  Box fiber;
};

struct Candidate {
  std::string label;
  double value = 0;
};
struct RefereeResult {
  std::string name;
  double power = 0.5;            // finite side carries L^{-power}
  std::vector<LSample> finite;   // (L, L^{-power} * finite integral)
  std::vector<Candidate> limits; // first entry is the literal reading
};

RefereeResult kkw_referee(const TwistedBcvSpec& spec, const PatchGrid& grid, std::span<const double> Ls);
RefereeResult einstein_referee(const TwistedBcvSpec& spec, EinsteinCase which, std::span<const double> x,
                               std::span<const double> y, const PatchGrid& grid, std::span<const double> Ls);
std::array<RefereeResult, 4> connes_referee(const TwistedBcvSpec& spec, const ScalarField& f0, const ScalarField& f1,
                                            const ScalarField& f2, const PatchGrid& grid,
                                            std::span<const double> Ls);

enum class Verdict { Pass, Flagged, Fail };
std::string to_string(Verdict v);

struct RefereeTolerances {
  double check_L = 1e6;
  double rel_tol = 2e-2;
  double noise_floor = 1e-7;  // relative errors below this count as converged
};
struct RefereeVerdict {
  Verdict verdict = Verdict::Fail;
  std::string matched;         // label of the candidate the finite side converges to
  double literal = 0;          // literal limit integral
  double extrapolated = 0;     // fitted limit of the finite side
  double rel_err_literal = 0;  // at check_L
  double rel_err_matched = 0;
  bool monotone = false;
  LimitFit fit;
};
// PASS: literal reading within tolerance at check_L and improving along the grid.
// FLAGGED: the finite side settles on another candidate (or its own extrapolation).
RefereeVerdict judge(const RefereeResult& r, const RefereeTolerances& tol = {});

// Heisenberg plane fibre over a curved base used by the acceptance campaign
struct RefereeSetup {
  TwistedBcvSpec warped;   // base-only twist
  TwistedBcvSpec twisted;  // fibre-dependent twist
  PatchGrid grid;
  ScalarField f0, f1, f2;
};
RefereeSetup default_referee_setup(int base_nodes = 3, int fiber_nodes = 3);
std::vector<double> default_L_grid();

}  // namespace subrv
