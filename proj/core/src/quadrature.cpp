#include "subrv/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <string>

#include "subrv/errors.hpp"

namespace subrv {

void Box::validate() const {
  if (lo.empty()) throw DimensionError("box has no axes");
  if (hi.size() != lo.size() || nodes.size() != lo.size()) throw DimensionError("box lo/hi/nodes lengths differ");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw DomainError("box axis " + std::to_string(i) + " needs lo < hi");
    if (nodes[i] < 2) throw DomainError("box axis " + std::to_string(i) + " needs at least 2 nodes");
  }
}

Box Box::refined(int factor) const {
  Box b = *this;
  for (auto& n : b.nodes) n *= factor;
  return b;
}

Rule1D gauss_legendre(int nodes, double a, double b) {
  if (nodes < 1) throw DomainError("Gauss-Legendre needs at least one node");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes)), &gsl_integration_glfixed_table_free);
  if (!table) throw DomainError("Gauss-Legendre table allocation failed");
  Rule1D r;
  r.x.resize(nodes);
  r.w.resize(nodes);
  for (int i = 0; i < nodes; ++i)
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &r.x[i], &r.w[i], table.get());
  return r;
}

std::vector<QuadNode> tensor_nodes(const Box& box) {
  box.validate();
  const int d = box.dim();
  std::vector<Rule1D> rules;
  for (int i = 0; i < d; ++i) rules.push_back(gauss_legendre(box.nodes[i], box.lo[i], box.hi[i]));
  std::vector<QuadNode> out;
  std::vector<int> idx(d, 0);
  while (true) {
    QuadNode q{std::vector<double>(d), 1.0};
    for (int i = 0; i < d; ++i) {
      q.x[i] = rules[i].x[idx[i]];
      q.w *= rules[i].w[idx[i]];
    }
    out.push_back(std::move(q));
    int k = d - 1;
    while (k >= 0 && ++idx[k] == box.nodes[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double integrate_box(const Density& density, const Box& box) {
  const auto nodes = tensor_nodes(box);
  std::vector<double> terms;
  terms.reserve(nodes.size());
  for (const auto& q : nodes) {
    const double v = density(q.x);
    if (!std::isfinite(v)) throw DomainError("non-finite density sample");
    terms.push_back(q.w * v);
  }
  return pairwise_sum(terms);
}

double integrate_surface_patch(const SurfaceDef& surf, const std::vector<ScalarField>& chartmap, const Box& box2,
                               const Density& density, MeasureMode mode, double tol) {
  if (box2.dim() != 2) throw DimensionError("surface patches are 2-dimensional");
  if (chartmap.size() != 3) throw DimensionError("chart map must land in R^3");
  return integrate_box(
      [&](std::span<const double> s) {
        std::vector<double> x(3);
        for (int i = 0; i < 3; ++i) x[i] = chartmap[i].value(s);
        if (is_characteristic(surf, x, tol)) throw CharacteristicPointError("characteristic point on the patch");
        return density(s) * surface_measure_density(surf, chartmap, s, mode, tol);
      },
      box2);
}

}  // namespace subrv
