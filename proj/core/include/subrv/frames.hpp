#pragma once

#include <span>
#include <vector>

#include "subrv/coordgeom.hpp"
#include "subrv/field.hpp"
#include "subrv/tensor.hpp"

namespace subrv {

inline constexpr double kFrameConditionGuard = 1e12;

// Frame coefficients at a point as jets. coeff(a, i) is the component of E_a
// along chart coordinate axes[i].
class FramePoint {
 public:
  FramePoint(JetMatrix coeff, std::vector<int> axes);

  int rank() const { return coeff_.size(); }
  int order() const { return coeff_(0, 0).order(); }
  const std::vector<int>& axes() const { return axes_; }
  const JetMatrix& coeff() const { return coeff_; }
  // inverse(i, a): coordinate vector d_{axes[i]} = sum_a inverse(i, a) E_a
  const JetMatrix& inverse() const { return inverse_; }

  // E_a(h), one order lower than min(h, frame) order
  Jet apply(int a, const Jet& h) const;
  std::vector<double> vector(int a) const;
  // frame components of a coordinate vector (local indices)
  std::vector<double> to_frame(std::span<const double> coords) const;

 private:
  JetMatrix coeff_;
  JetMatrix inverse_;
  std::vector<int> axes_;
};

// Frame declared orthonormal: either explicit vector fields or Gram-Schmidt
// of the coordinate basis of a metric.
class OrthonormalFrame {
 public:
  explicit OrthonormalFrame(std::vector<VectorField> fields);
  static OrthonormalFrame gram_schmidt(const CoordinateMetric& metric, std::vector<int> order = {});

  int dim() const { return rank_; }
  int chart_dim() const { return chart_dim_; }

  FramePoint at(std::span<const double> point, int order) const;
  FramePoint at(std::span<const Jet> seeds) const;

 private:
  OrthonormalFrame() = default;
  int rank_ = 0;
  int chart_dim_ = 0;
  std::vector<VectorField> fields_;
  std::vector<ScalarField> metric_entries_;
  std::vector<int> metric_axes_;
  std::vector<int> order_;
};

// Structure coefficients, Koszul connection and curvature as jets.
class FrameGeometry {
 public:
  explicit FrameGeometry(FramePoint fp);

  const FramePoint& frame() const { return fp_; }
  int rank() const { return fp_.rank(); }
  // [E_i,E_j] = sum_k c(i,j,k) E_k
  const Jet& c(int i, int j, int k) const { return c_[idx(i, j, k)]; }
  // <nabla_{E_i} E_j, E_k>
  const Jet& gamma(int i, int j, int k) const { return gamma_[idx(i, j, k)]; }

  Tensor3 structure() const;
  ConnectionTable connection() const;
  CurvatureTable curvature() const;

 private:
  int idx(int i, int j, int k) const { return (i * rank() + j) * rank() + k; }
  FramePoint fp_;
  std::vector<Jet> c_;
  std::vector<Jet> gamma_;
};

Tensor3 structure_coefficients(const OrthonormalFrame& frame, std::span<const double> point);
ConnectionTable koszul_connection(const OrthonormalFrame& frame, std::span<const double> point);
CurvatureTable frame_curvature(const OrthonormalFrame& frame, std::span<const double> point);
// -<R(E_i,E_j)E_i,E_j>
double sectional(const CurvatureTable& curvature, int i, int j);
// fill ricci and scalar from riem
void assemble_ricci(CurvatureTable& t);

}  // namespace subrv
