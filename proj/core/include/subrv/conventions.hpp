#pragma once

#include <string>

namespace subrv::conventions {

// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
inline constexpr int kCurvatureSign = +1;

// K(a,b) = -<R(a,b)a,b>, positive on the round sphere
inline constexpr int kSectionalSign = -1;

// Ric(Y,Z) = sum_k <R(E_k,Y)Z,E_k>, S = tr Ric; round unit 2-sphere has S = +2
inline constexpr int kRicciSign = +1;

// Delta = -tr(nabla d); flat Delta(x^2) = -2
inline constexpr int kLaplacianSign = -1;

// Omega_4 is built from r = kOmega4CurvatureSign * S and the Laplacian above
inline constexpr int kOmega4CurvatureSign = +1;

// l-tilde default for twisted products: the fiber dimension
inline constexpr bool kLtildeIsFiberDim = true;

// Fiber curvature inside twisted formulas is that of the leaf metric f^2 g_F
inline constexpr bool kFiberCurvatureIsLeaf = true;

std::string describe();

}  // namespace subrv::conventions
