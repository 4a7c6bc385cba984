#pragma once

#include <array>
#include <span>
#include <vector>

namespace subrv {

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxOrder = 3;

// Truncated Taylor jet: value plus partial derivatives up to `order`
// with respect to `dim` chart coordinates. Derivative tensors are kept
// fully symmetric.
class Jet {
 public:
  Jet() = default;
  Jet(int dim, int order, double value = 0.0);

  static Jet constant(int dim, int order, double value) { return Jet(dim, order, value); }
  static Jet variable(int dim, int order, int index, double value);

  int dim() const { return dim_; }
  int order() const { return order_; }

  double value() const { return v_; }
  double d(int i) const { return g_[i]; }
  double d(int i, int j) const { return h_[i][j]; }
  double d(int i, int j, int k) const { return t_[i][j][k]; }

  std::vector<double> grad() const;
  std::vector<std::vector<double>> hess() const;

  void set_value(double v) { v_ = v; }
  void set_d(int i, double v) { g_[i] = v; }
  void set_d(int i, int j, double v);
  void set_d(int i, int j, int k, double v);

  // d/dx_i of the jet, one order lower
  Jet derivative(int i) const;
  Jet truncated(int order) const;

  // chain rule for phi(this) given phi and its first three derivatives at value()
  Jet compose(double f0, double f1, double f2, double f3) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double c) { v_ += c; return *this; }
  Jet& operator-=(double c) { v_ -= c; return *this; }
  Jet& operator*=(double c);
  Jet& operator/=(double c) { return *this *= 1.0 / c; }

  friend bool operator==(const Jet& a, const Jet& b);

 private:
  int dim_ = 0;
  int order_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxDim> g_{};
  std::array<std::array<double, kMaxDim>, kMaxDim> h_{};
  std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, kMaxDim> t_{};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double c);
Jet operator+(double c, Jet a);
Jet operator-(Jet a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(Jet a, double c);
Jet operator*(double c, Jet a);
Jet operator/(Jet a, double c);
Jet operator/(double c, const Jet& a);

Jet reciprocal(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet square(const Jet& a);

// Identity seeds for evaluating at a point.
std::vector<Jet> seed_point(std::span<const double> point, int order);

// Directional derivative sum_i v_i d_i a, one order lower.
Jet directional(std::span<const Jet> v, const Jet& a);

}  // namespace subrv
