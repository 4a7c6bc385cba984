#include "subrv/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "subrv/errors.hpp"

namespace subrv {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionError("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Matrix JetMatrix::values() const {
  Matrix m(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

JetMatrix JetMatrix::truncated(int order) const {
  JetMatrix r = *this;
  for (auto& x : r.a_) x = x.truncated(order);
  return r;
}

SpdInverse spd_inverse(const JetMatrix& g) {
  const int n = g.size();
  if (n == 0) throw DimensionError("empty metric");
  // value-level Cholesky first so failures are reported before jet arithmetic
  {
    std::vector<double> l(n * n, 0.0);
    for (int j = 0; j < n; ++j) {
      double s = g(j, j).value();
      for (int k = 0; k < j; ++k) s -= l[j * n + k] * l[j * n + k];
      if (!(s > 0.0) || !std::isfinite(s)) throw NotPositiveDefiniteError("metric is not positive definite");
      l[j * n + j] = std::sqrt(s);
      for (int i = j + 1; i < n; ++i) {
        double t = g(i, j).value();
        for (int k = 0; k < j; ++k) t -= l[i * n + k] * l[j * n + k];
        l[i * n + j] = t / l[j * n + j];
      }
    }
  }
  const Jet zero(g(0, 0).dim(), g(0, 0).order(), 0.0);
  JetMatrix l(n, zero);
  for (int j = 0; j < n; ++j) {
    Jet s = g(j, j);
    for (int k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
    l(j, j) = sqrt(s);
    const Jet inv = reciprocal(l(j, j));
    for (int i = j + 1; i < n; ++i) {
      Jet t = g(i, j);
      for (int k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
      l(i, j) = t * inv;
    }
  }
  // inverse of L (lower triangular)
  JetMatrix li(n, zero);
  for (int i = 0; i < n; ++i) {
    li(i, i) = reciprocal(l(i, i));
    for (int j = 0; j < i; ++j) {
      Jet s = zero;
      for (int k = j; k < i; ++k) s += l(i, k) * li(k, j);
      li(i, j) = -s * li(i, i);
    }
  }
  SpdInverse out{JetMatrix(n, zero), Jet(zero.dim(), zero.order(), 1.0)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      Jet s = zero;
      for (int k = i; k < n; ++k) s += li(k, i) * li(k, j);
      out.inverse(i, j) = s;
      out.inverse(j, i) = s;
    }
  for (int i = 0; i < n; ++i) out.sqrt_det *= l(i, i);
  return out;
}

JetMatrix lu_inverse(const JetMatrix& a, double max_condition) {
  const int n = a.size();
  const Jet zero(a(0, 0).dim(), a(0, 0).order(), 0.0);
  JetMatrix lu = a;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  double anorm = 0.0;
  for (int j = 0; j < n; ++j) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += std::abs(a(i, j).value());
    anorm = std::max(anorm, c);
  }
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k).value()) > std::abs(lu(p, k).value())) p = i;
    if (lu(p, k).value() == 0.0) throw SingularFrameError("singular frame matrix");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      std::swap(perm[k], perm[p]);
    }
    const Jet inv = reciprocal(lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      lu(i, k) = lu(i, k) * inv;
      for (int j = k + 1; j < n; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
    }
  }
  JetMatrix inv(n, zero);
  for (int col = 0; col < n; ++col) {
    std::vector<Jet> y(n, zero);
    for (int i = 0; i < n; ++i) {
      Jet s(zero.dim(), zero.order(), perm[i] == col ? 1.0 : 0.0);
      for (int j = 0; j < i; ++j) s -= lu(i, j) * y[j];
      y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      Jet s = y[i];
      for (int j = i + 1; j < n; ++j) s -= lu(i, j) * inv(j, col);
      inv(i, col) = s / lu(i, i);
    }
  }
  double inorm = 0.0;
  for (int j = 0; j < n; ++j) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += std::abs(inv(i, j).value());
    inorm = std::max(inorm, c);
  }
  if (!std::isfinite(anorm * inorm) || anorm * inorm > max_condition)
    throw SingularFrameError("frame matrix condition number exceeds guard");
  return inv;
}

}  // namespace subrv
