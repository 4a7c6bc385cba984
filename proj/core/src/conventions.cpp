#include "subrv/conventions.hpp"

namespace subrv::conventions {

std::string describe() {
  return "curvature: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z\n"
         "sectional: K(a,b) = -<R(a,b)a,b>  (unit sphere: +1)\n"
         "ricci: Ric(Y,Z) = sum_k <R(E_k,Y)Z,E_k>, S = sum_k Ric(E_k,E_k)  (unit 2-sphere: S = +2)\n"
         "laplacian: Delta = -tr(nabla d) = -sum e_j e_j + sum nabla_{e_j} e_j  (flat: Delta(x^2) = -2)\n"
         "omega4: r = +S, Laplacian as above\n"
         "twisted: ltilde = dim F; fiber curvature taken from the leaf metric f^2 g_F\n";
}

}  // namespace subrv::conventions
