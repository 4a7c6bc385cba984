#include "subrv/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subrv/errors.hpp"

namespace subrv {

namespace {

void check_same(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("jet dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

}  // namespace

Jet::Jet(int dim, int order, double value) : dim_(dim), order_(order), v_(value) {
  if (dim < 0 || dim > kMaxDim) throw DimensionError("jet dimension out of range: " + std::to_string(dim));
  if (order < 0 || order > kMaxOrder) throw DimensionError("jet order out of range: " + std::to_string(order));
}

Jet Jet::variable(int dim, int order, int index, double value) {
  Jet j(dim, order, value);
  if (index < 0 || index >= dim) throw DimensionError("coordinate index out of range");
  if (order >= 1) j.g_[index] = 1.0;
  return j;
}

std::vector<double> Jet::grad() const { return {g_.begin(), g_.begin() + dim_}; }

std::vector<std::vector<double>> Jet::hess() const {
  std::vector<std::vector<double>> out(dim_, std::vector<double>(dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out[i][j] = h_[i][j];
  return out;
}

void Jet::set_d(int i, int j, double v) {
  h_[i][j] = v;
  h_[j][i] = v;
}

void Jet::set_d(int i, int j, int k, double v) {
  t_[i][j][k] = t_[i][k][j] = t_[j][i][k] = v;
  t_[j][k][i] = t_[k][i][j] = t_[k][j][i] = v;
}

Jet Jet::derivative(int i) const {
  if (order_ < 1) throw DimensionError("cannot differentiate an order-0 jet");
  if (i < 0 || i >= dim_) throw DimensionError("derivative index out of range");
  Jet r(dim_, order_ - 1, g_[i]);
  for (int a = 0; a < dim_; ++a) {
    r.g_[a] = h_[i][a];
    for (int b = 0; b < dim_; ++b) r.h_[a][b] = t_[i][a][b];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw DimensionError("cannot raise jet order by truncation");
  Jet r = *this;
  r.order_ = order;
  if (order < 3) r.t_ = {};
  if (order < 2) r.h_ = {};
  if (order < 1) r.g_ = {};
  return r;
}

Jet Jet::compose(double f0, double f1, double f2, double f3) const {
  Jet r(dim_, order_, f0);
  const int n = dim_;
  if (order_ >= 1)
    for (int i = 0; i < n; ++i) r.g_[i] = f1 * g_[i];
  if (order_ >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) r.set_d(i, j, f2 * g_[i] * g_[j] + f1 * h_[i][j]);
  if (order_ >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k)
          r.set_d(i, j, k,
                  f3 * g_[i] * g_[j] * g_[k] +
                      f2 * (h_[i][j] * g_[k] + h_[i][k] * g_[j] + h_[j][k] * g_[i]) + f1 * t_[i][j][k]);
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  r *= -1.0;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  check_same(*this, o);
  order_ = std::min(order_, o.order_);
  v_ += o.v_;
  for (int i = 0; i < dim_; ++i) {
    g_[i] += o.g_[i];
    for (int j = 0; j < dim_; ++j) {
      h_[i][j] += o.h_[i][j];
      for (int k = 0; k < dim_; ++k) t_[i][j][k] += o.t_[i][j][k];
    }
  }
  return *this = truncated(order_);
}

Jet& Jet::operator-=(const Jet& o) { return *this += -o; }

Jet& Jet::operator*=(double c) {
  v_ *= c;
  for (int i = 0; i < dim_; ++i) {
    g_[i] *= c;
    for (int j = 0; j < dim_; ++j) {
      h_[i][j] *= c;
      for (int k = 0; k < dim_; ++k) t_[i][j][k] *= c;
    }
  }
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_same(a, b);
  const int n = a.dim();
  const int ord = std::min(a.order(), b.order());
  Jet r(n, ord, a.value() * b.value());
  if (ord >= 1)
    for (int i = 0; i < n; ++i) r.set_d(i, a.d(i) * b.value() + a.value() * b.d(i));
  if (ord >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        r.set_d(i, j,
                a.d(i, j) * b.value() + a.d(i) * b.d(j) + a.d(j) * b.d(i) + a.value() * b.d(i, j));
  if (ord >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k)
          r.set_d(i, j, k,
                  a.d(i, j, k) * b.value() + a.d(i, j) * b.d(k) + a.d(i, k) * b.d(j) +
                      a.d(j, k) * b.d(i) + a.d(i) * b.d(j, k) + a.d(j) * b.d(i, k) +
                      a.d(k) * b.d(i, j) + a.value() * b.d(i, j, k));
  return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this * reciprocal(o); }

bool operator==(const Jet& a, const Jet& b) {
  if (a.dim_ != b.dim_ || a.order_ != b.order_ || a.v_ != b.v_) return false;
  return a.g_ == b.g_ && a.h_ == b.h_ && a.t_ == b.t_;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double c) { return a += c; }
Jet operator+(double c, Jet a) { return a += c; }
Jet operator-(Jet a, double c) { return a -= c; }
Jet operator-(double c, const Jet& a) { return -a + c; }
Jet operator*(Jet a, double c) { return a *= c; }
Jet operator*(double c, Jet a) { return a *= c; }
Jet operator/(Jet a, double c) { return a /= c; }
Jet operator/(double c, const Jet& a) { return reciprocal(a) * c; }

Jet reciprocal(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw DomainError("division by zero");
  const double r = 1.0 / x;
  return a.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.compose(e, e, e, e);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of non-positive value");
  const double r = 1.0 / x;
  return a.compose(std::log(x), r, -r * r, 2.0 * r * r * r);
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (x < 0.0 || (x == 0.0 && a.order() > 0)) throw DomainError("sqrt at non-positive value");
  const double s = std::sqrt(x);
  if (a.order() == 0) return a.compose(s, 0, 0, 0);
  return a.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

Jet pow(const Jet& a, double p) {
  const double x = a.value();
  const bool integral = p == std::floor(p);
  if (integral) {
    if (x == 0.0 && p < 0) throw DomainError("negative power of zero");
  } else if (!(x > 0.0)) {
    throw DomainError("fractional power of non-positive value");
  }
  std::array<double, 4> f{};
  double falling = 1.0;
  for (int k = 0; k < 4; ++k) {
    f[k] = falling == 0.0 ? 0.0 : falling * std::pow(x, p - k);
    falling *= (p - k);
  }
  return a.compose(f[0], f[1], f[2], f[3]);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(s, c, -s, -c);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose(c, -s, -c, s);
}

Jet square(const Jet& a) { return a * a; }

std::vector<Jet> seed_point(std::span<const double> point, int order) {
  const int n = static_cast<int>(point.size());
  std::vector<Jet> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(n, order, i, point[i]));
  return out;
}

Jet directional(std::span<const Jet> v, const Jet& a) {
  if (static_cast<int>(v.size()) != a.dim()) throw DimensionError("direction length does not match jet");
  Jet r(a.dim(), a.order() - 1, 0.0);
  for (int i = 0; i < a.dim(); ++i) {
    const Jet vi = v[i].order() > r.order() ? v[i].truncated(r.order()) : v[i];
    r += vi * a.derivative(i);
  }
  return r;
}

}  // namespace subrv
