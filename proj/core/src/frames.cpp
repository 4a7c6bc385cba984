#include "subrv/frames.hpp"

#include "subrv/errors.hpp"

namespace subrv {

FramePoint::FramePoint(JetMatrix coeff, std::vector<int> axes)
    : coeff_(std::move(coeff)), axes_(std::move(axes)) {
  if (static_cast<int>(axes_.size()) != coeff_.size()) throw DimensionError("frame axes/rank mismatch");
  inverse_ = lu_inverse(coeff_, kFrameConditionGuard);
}

Jet FramePoint::apply(int a, const Jet& h) const {
  const int n = rank();
  const int ord = std::min(h.order(), order() + 1) - 1;
  Jet s(h.dim(), ord, 0.0);
  for (int i = 0; i < n; ++i) s += coeff_(a, i).truncated(ord) * h.derivative(axes_[i]).truncated(ord);
  return s;
}

std::vector<double> FramePoint::vector(int a) const {
  std::vector<double> v(rank());
  for (int i = 0; i < rank(); ++i) v[i] = coeff_(a, i).value();
  return v;
}

std::vector<double> FramePoint::to_frame(std::span<const double> coords) const {
  const int n = rank();
  if (static_cast<int>(coords.size()) != n) throw DimensionError("to_frame: size mismatch");
  // v = sum_i v^i d_i = sum_i v^i sum_a inv(i,a) E_a
  std::vector<double> out(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) out[a] += coords[i] * inverse_(i, a).value();
  return out;
}

OrthonormalFrame::OrthonormalFrame(std::vector<VectorField> fields) : fields_(std::move(fields)) {
  rank_ = static_cast<int>(fields_.size());
  if (rank_ == 0) throw DimensionError("empty frame");
  chart_dim_ = fields_[0].dim();
  if (chart_dim_ != rank_) throw DimensionError("frame fields must span the chart");
  for (const auto& f : fields_) {
    if (f.dim() != chart_dim_) throw DimensionError("frame fields of mixed dimension");
    for (const auto& c : f.coeffs())
      if (c.dim() != chart_dim_) throw DimensionError("frame coefficient on wrong chart");
  }
}

OrthonormalFrame OrthonormalFrame::gram_schmidt(const CoordinateMetric& metric, std::vector<int> order) {
  OrthonormalFrame fr;
  fr.rank_ = metric.rank();
  fr.chart_dim_ = metric.chart_dim();
  fr.metric_axes_ = metric.axes();
  for (int i = 0; i < fr.rank_; ++i)
    for (int j = 0; j < fr.rank_; ++j) fr.metric_entries_.push_back(metric(i, j));
  if (order.empty())
    for (int i = 0; i < fr.rank_; ++i) order.push_back(i);
  if (static_cast<int>(order.size()) != fr.rank_) throw DimensionError("Gram-Schmidt order has wrong length");
  std::vector<bool> seen(fr.rank_, false);
  for (int o : order) {
    if (o < 0 || o >= fr.rank_ || seen[o]) throw DimensionError("Gram-Schmidt order is not a permutation");
    seen[o] = true;
  }
  fr.order_ = std::move(order);
  return fr;
}

FramePoint OrthonormalFrame::at(std::span<const double> point, int order) const {
  if (static_cast<int>(point.size()) != chart_dim_) throw DimensionError("point dimension mismatch");
  const auto seeds = seed_point(point, order);
  return at(seeds);
}

FramePoint OrthonormalFrame::at(std::span<const Jet> seeds) const {
  if (static_cast<int>(seeds.size()) != chart_dim_) throw DimensionError("seed dimension mismatch");
  const int n = rank_;
  const Jet zero(chart_dim_, seeds[0].order(), 0.0);
  JetMatrix coeff(n, zero);
  if (!fields_.empty()) {
    for (int a = 0; a < n; ++a) {
      const auto v = fields_[a].eval(seeds);
      for (int i = 0; i < n; ++i) coeff(a, i) = v[i];
    }
    std::vector<int> axes(n);
    for (int i = 0; i < n; ++i) axes[i] = i;
    return FramePoint(std::move(coeff), std::move(axes));
  }
  JetMatrix g(n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = metric_entries_[i * n + j].eval(seeds);
      g(j, i) = g(i, j);
    }
  const auto inner = [&](const std::vector<Jet>& u, const std::vector<Jet>& v) {
    Jet s = zero;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += g(i, j) * u[i] * v[j];
    return s;
  };
  std::vector<std::vector<Jet>> e;
  for (int a = 0; a < n; ++a) {
    std::vector<Jet> v(n, zero);
    v[order_[a]] = Jet(chart_dim_, zero.order(), 1.0);
    for (const auto& b : e) {
      const Jet p = inner(v, b);
      for (int i = 0; i < n; ++i) v[i] -= p * b[i];
    }
    const Jet nn = inner(v, v);
    if (!(nn.value() > 0.0)) throw NotPositiveDefiniteError("Gram-Schmidt hit a null vector");
    const Jet inv = reciprocal(sqrt(nn));
    for (auto& x : v) x = x * inv;
    e.push_back(std::move(v));
  }
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) coeff(a, i) = e[a][i];
  return FramePoint(std::move(coeff), metric_axes_);
}

FrameGeometry::FrameGeometry(FramePoint fp) : fp_(std::move(fp)) {
  const int n = rank();
  const int ord = fp_.order();
  if (ord < 1) throw DimensionError("frame jets must have order >= 1");
  const Jet zero(fp_.coeff()(0, 0).dim(), ord - 1, 0.0);
  // bracket components in coordinates, then into the frame
  c_.assign(n * n * n, zero);
  const JetMatrix inv = fp_.inverse().truncated(ord - 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<Jet> w(n, zero);
      for (int m = 0; m < n; ++m) w[m] = fp_.apply(i, fp_.coeff()(j, m)) - fp_.apply(j, fp_.coeff()(i, m));
      for (int k = 0; k < n; ++k) {
        Jet s = zero;
        for (int m = 0; m < n; ++m) s += w[m] * inv(m, k);
        c_[idx(i, j, k)] = s;
        c_[idx(j, i, k)] = -s;
      }
    }
  gamma_.assign(n * n * n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet s = c(i, j, k) - c(j, k, i) + c(k, i, j);
        s *= 0.5;
        gamma_[idx(i, j, k)] = s;
      }
}

Tensor3 FrameGeometry::structure() const {
  Tensor3 t(rank());
  auto& d = t.data();
  for (std::size_t q = 0; q < c_.size(); ++q) d[q] = c_[q].value();
  return t;
}

ConnectionTable FrameGeometry::connection() const {
  ConnectionTable t{Tensor3(rank())};
  auto& d = t.gamma.data();
  for (std::size_t q = 0; q < gamma_.size(); ++q) d[q] = gamma_[q].value();
  return t;
}

CurvatureTable FrameGeometry::curvature() const {
  if (fp_.order() < 2) throw DimensionError("frame curvature needs order-2 coefficient jets");
  const int n = rank();
  CurvatureTable t{Tensor4(n), Matrix(n), 0.0};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = fp_.apply(i, gamma(j, k, l)).value() - fp_.apply(j, gamma(i, k, l)).value();
          for (int m = 0; m < n; ++m) {
            v += gamma(j, k, m).value() * gamma(i, m, l).value() - gamma(i, k, m).value() * gamma(j, m, l).value();
            v -= c(i, j, m).value() * gamma(m, k, l).value();
          }
          t.riem(i, j, k, l) = v;
          t.riem(j, i, k, l) = -v;
        }
  assemble_ricci(t);
  return t;
}

void assemble_ricci(CurvatureTable& t) {
  const int n = t.riem.extent();
  t.ricci = Matrix(n);
  t.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += t.riem(k, j, l, k);
      t.ricci(j, l) = s;
    }
  for (int k = 0; k < n; ++k) t.scalar += t.ricci(k, k);
}

Tensor3 structure_coefficients(const OrthonormalFrame& frame, std::span<const double> point) {
  return FrameGeometry(frame.at(point, 1)).structure();
}

ConnectionTable koszul_connection(const OrthonormalFrame& frame, std::span<const double> point) {
  return FrameGeometry(frame.at(point, 1)).connection();
}

CurvatureTable frame_curvature(const OrthonormalFrame& frame, std::span<const double> point) {
  return FrameGeometry(frame.at(point, 2)).curvature();
}

double sectional(const CurvatureTable& curvature, int i, int j) {
  if (i == j) throw DimensionError("sectional curvature needs two distinct frame indices");
  return -curvature.riem(i, j, i, j);
}

}  // namespace subrv
