#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "subrv/jet.hpp"

namespace subrv {

namespace detail {
struct Node;
}

// Immutable expression graph over chart coordinates x_0..x_{dim-1}.
class ScalarField {
 public:
  ScalarField();  // constant 0 in dimension 0
  static ScalarField constant(int dim, double c);
  static ScalarField coord(int dim, int index);

  int dim() const { return dim_; }

  Jet eval(std::span<const double> point, int order) const;
  // Evaluate with the coordinates replaced by jets (chain rule through the graph).
  Jet eval(std::span<const Jet> inputs) const;
  double value(std::span<const double> point) const;

  // exact partial derivative as a new field
  ScalarField diff(int index) const;
  // substitute x_i -> subs[i]; result lives in the dimension of subs
  ScalarField compose(const std::vector<ScalarField>& subs) const;
  // re-embed into a larger chart: x_i -> y_{axes[i]}
  ScalarField lift(int new_dim, const std::vector<int>& axes) const;

  bool is_constant() const;
  bool is_zero() const;
  double constant_value() const;

  // true if the field can depend on coordinate `index`
  bool depends_on(int index) const;

  ScalarField operator-() const;
  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator+(const ScalarField& a, double c);
  friend ScalarField operator+(double c, const ScalarField& a);
  friend ScalarField operator-(const ScalarField& a, double c);
  friend ScalarField operator-(double c, const ScalarField& a);
  friend ScalarField operator*(const ScalarField& a, double c);
  friend ScalarField operator*(double c, const ScalarField& a);
  friend ScalarField operator/(const ScalarField& a, double c);
  friend ScalarField operator/(double c, const ScalarField& a);

  friend ScalarField exp(const ScalarField& a);
  friend ScalarField log(const ScalarField& a);
  friend ScalarField sqrt(const ScalarField& a);
  friend ScalarField pow(const ScalarField& a, double p);
  friend ScalarField sin(const ScalarField& a);
  friend ScalarField cos(const ScalarField& a);

  const detail::Node* node() const { return node_.get(); }

 private:
  ScalarField(int dim, std::shared_ptr<const detail::Node> node) : dim_(dim), node_(std::move(node)) {}
  friend struct detail::Node;
  friend class FieldBuilder;

  int dim_ = 0;
  std::shared_ptr<const detail::Node> node_;
};

ScalarField exp(const ScalarField& a);
ScalarField log(const ScalarField& a);
ScalarField sqrt(const ScalarField& a);
ScalarField pow(const ScalarField& a, double p);
ScalarField sin(const ScalarField& a);
ScalarField cos(const ScalarField& a);

// Coordinate-coefficient vector field.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<ScalarField> coeffs);
  static VectorField coordinate(int dim, int index);

  int dim() const { return static_cast<int>(coeffs_.size()); }
  const ScalarField& operator[](int i) const { return coeffs_.at(i); }
  const std::vector<ScalarField>& coeffs() const { return coeffs_; }

  std::vector<Jet> eval(std::span<const double> point, int order) const;
  std::vector<Jet> eval(std::span<const Jet> inputs) const;
  std::vector<double> value(std::span<const double> point) const;

  // X(h) as a field
  ScalarField apply(const ScalarField& h) const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const ScalarField& s, const VectorField& v);
  friend VectorField operator*(double s, const VectorField& v);

 private:
  std::vector<ScalarField> coeffs_;
};

// [X, Y] as a field
VectorField bracket(const VectorField& x, const VectorField& y);

// Exact jet of h at point.
Jet eval_jet(const ScalarField& h, std::span<const double> point, int order);
// sum_i X^i(p) d_i h(p)
double frame_derivative(const VectorField& x, const ScalarField& h, std::span<const double> point);
// X(Y(h)) at p
double frame_second_derivative(const VectorField& x, const VectorField& y, const ScalarField& h,
                               std::span<const double> point);

// Polynomial helper: sum c * prod x_i^{e_i}
struct Monomial {
  double coeff;
  std::vector<int> exponents;
};
ScalarField polynomial(int dim, const std::vector<Monomial>& terms);

}  // namespace subrv
