#pragma once

#include <vector>

#include "subrv/jet.hpp"

namespace subrv {

// Dense small tensors with equal extents.
template <int Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(int n) : n_(n), v_(ipow(n), 0.0) {}

  int extent() const { return n_; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  template <typename... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return v_[flat(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return v_[flat(idx...)];
  }

 private:
  static int ipow(int n) {
    int r = 1;
    for (int i = 0; i < Rank; ++i) r *= n;
    return r;
  }
  template <typename... I>
  int flat(I... idx) const {
    int f = 0;
    ((f = f * n_ + static_cast<int>(idx)), ...);
    return f;
  }

  int n_ = 0;
  std::vector<double> v_;
};

using Matrix = Tensor<2>;
using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

// gamma(i,j,k) = <nabla_{E_i} E_j, E_k>
struct ConnectionTable {
  Tensor3 gamma;
};

// riem(i,j,k,l) = <R(E_i,E_j)E_k, E_l>
struct CurvatureTable {
  Tensor4 riem;
  Matrix ricci;
  double scalar = 0.0;
};

// Square matrix of jets.
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(int n, const Jet& fill) : n_(n), a_(static_cast<std::size_t>(n) * n, fill) {}

  int size() const { return n_; }
  Jet& operator()(int i, int j) { return a_[i * n_ + j]; }
  const Jet& operator()(int i, int j) const { return a_[i * n_ + j]; }
  Matrix values() const;
  JetMatrix truncated(int order) const;

 private:
  int n_ = 0;
  std::vector<Jet> a_;
};

// Inverse of a symmetric positive definite jet matrix; also returns sqrt(det).
struct SpdInverse {
  JetMatrix inverse;
  Jet sqrt_det;
};
SpdInverse spd_inverse(const JetMatrix& g);

// General inverse by partial-pivot LU; throws SingularFrameError when the
// 1-norm condition estimate exceeds max_condition.
JetMatrix lu_inverse(const JetMatrix& a, double max_condition);

}  // namespace subrv
