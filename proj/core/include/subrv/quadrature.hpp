#pragma once

#include <functional>
#include <span>
#include <vector>

#include "subrv/surface.hpp"

namespace subrv {

// axis-aligned box with a Gauss-Legendre node count per axis
struct Box {
  std::vector<double> lo, hi;
  std::vector<int> nodes;

  int dim() const { return static_cast<int>(lo.size()); }
  void validate() const;
  Box refined(int factor = 2) const;
};

struct Rule1D {
  std::vector<double> x, w;
};
Rule1D gauss_legendre(int nodes, double a, double b);

struct QuadNode {
  std::vector<double> x;
  double w = 0;
};
// tensor-product nodes in lexicographic order (last axis fastest)
std::vector<QuadNode> tensor_nodes(const Box& box);

// fixed-order pairwise reduction
double pairwise_sum(std::span<const double> values);

using Density = std::function<double(std::span<const double>)>;

double integrate_box(const Density& density, const Box& box);

// density is evaluated at chart points of the patch
double integrate_surface_patch(const SurfaceDef& surf, const std::vector<ScalarField>& chartmap, const Box& box2,
                               const Density& density, MeasureMode mode, double tol = kCharacteristicTol);

}  // namespace subrv
