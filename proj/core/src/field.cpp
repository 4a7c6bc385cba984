#include "subrv/field.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "subrv/errors.hpp"

namespace subrv {

namespace detail {

enum class Kind { Const, Coord, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sqrt, Sin, Cos, Compose };

struct Node {
  Kind kind;
  int dim;
  double c = 0.0;  // constant value or exponent
  int index = 0;
  std::vector<std::shared_ptr<const Node>> args;  // Compose: args[0] = inner, rest = substitutions
  std::uint64_t mask = 0;                         // coordinates the node may depend on
};

}  // namespace detail

using detail::Kind;
using detail::Node;
using NodePtr = std::shared_ptr<const Node>;

class FieldBuilder {
 public:
  static ScalarField make(Node n) {
    const int dim = n.dim;
    return ScalarField(dim, std::make_shared<const Node>(std::move(n)));
  }
  static ScalarField wrap(const NodePtr& p) { return ScalarField(p->dim, p); }
  static const NodePtr& ptr(const ScalarField& f) { return f.node_; }
};

namespace {

bool is_const(const NodePtr& p) { return p->kind == Kind::Const; }
bool is_const(const NodePtr& p, double v) { return p->kind == Kind::Const && p->c == v; }

void check_dims(const ScalarField& a, const ScalarField& b) {
  if (a.dim() != b.dim())
    throw DimensionError("field dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
}

ScalarField unary(Kind k, const ScalarField& a, double c = 0.0) {
  Node n{k, a.dim(), c, 0, {FieldBuilder::ptr(a)}, FieldBuilder::ptr(a)->mask};
  return FieldBuilder::make(std::move(n));
}

ScalarField binary(Kind k, const ScalarField& a, const ScalarField& b) {
  check_dims(a, b);
  const auto& pa = FieldBuilder::ptr(a);
  const auto& pb = FieldBuilder::ptr(b);
  Node n{k, a.dim(), 0.0, 0, {pa, pb}, pa->mask | pb->mask};
  return FieldBuilder::make(std::move(n));
}

Jet eval_node(const NodePtr& n, std::span<const Jet> in, std::unordered_map<const Node*, Jet>& memo);

Jet eval_uncached(const NodePtr& n, std::span<const Jet> in, std::unordered_map<const Node*, Jet>& memo) {
  const int d = in.empty() ? 0 : in[0].dim();
  const int ord = in.empty() ? 0 : in[0].order();
  auto arg = [&](int i) { return eval_node(n->args[i], in, memo); };
  switch (n->kind) {
    case Kind::Const:
      return Jet(d, ord, n->c);
    case Kind::Coord:
      return in[n->index];
    case Kind::Add:
      return arg(0) + arg(1);
    case Kind::Sub:
      return arg(0) - arg(1);
    case Kind::Mul:
      return arg(0) * arg(1);
    case Kind::Div:
      return arg(0) / arg(1);
    case Kind::Neg:
      return -arg(0);
    case Kind::Pow:
      return pow(arg(0), n->c);
    case Kind::Exp:
      return exp(arg(0));
    case Kind::Log:
      return log(arg(0));
    case Kind::Sqrt:
      return sqrt(arg(0));
    case Kind::Sin:
      return sin(arg(0));
    case Kind::Cos:
      return cos(arg(0));
    case Kind::Compose: {
      std::vector<Jet> sub;
      sub.reserve(n->args.size() - 1);
      for (std::size_t i = 1; i < n->args.size(); ++i) sub.push_back(eval_node(n->args[i], in, memo));
      std::unordered_map<const Node*, Jet> inner_memo;
      return eval_node(n->args[0], sub, inner_memo);
    }
  }
  throw Error("unknown field node");
}

Jet eval_node(const NodePtr& n, std::span<const Jet> in, std::unordered_map<const Node*, Jet>& memo) {
  if (n->kind == Kind::Coord) return in[n->index];
  auto it = memo.find(n.get());
  if (it != memo.end()) return it->second;
  Jet r = eval_uncached(n, in, memo);
  memo.emplace(n.get(), r);
  return r;
}

}  // namespace

ScalarField::ScalarField() : ScalarField(constant(0, 0.0)) {}

ScalarField ScalarField::constant(int dim, double c) {
  return FieldBuilder::make(Node{Kind::Const, dim, c, 0, {}, 0});
}

ScalarField ScalarField::coord(int dim, int index) {
  if (index < 0 || index >= dim) throw DimensionError("coordinate index out of range");
  return FieldBuilder::make(Node{Kind::Coord, dim, 0.0, index, {}, std::uint64_t{1} << index});
}

bool ScalarField::is_constant() const { return is_const(node_); }
bool ScalarField::is_zero() const { return is_const(node_, 0.0); }
double ScalarField::constant_value() const {
  if (!is_constant()) throw Error("field is not constant");
  return node_->c;
}
bool ScalarField::depends_on(int index) const { return (node_->mask >> index) & 1u; }

Jet ScalarField::eval(std::span<const Jet> inputs) const {
  if (static_cast<int>(inputs.size()) != dim_)
    throw DimensionError("field of dimension " + std::to_string(dim_) + " evaluated with " +
                         std::to_string(inputs.size()) + " inputs");
  if (inputs.empty()) return Jet(0, 0, node_->c);
  std::unordered_map<const Node*, Jet> memo;
  return eval_node(node_, inputs, memo);
}

Jet ScalarField::eval(std::span<const double> point, int order) const {
  if (static_cast<int>(point.size()) != dim_) throw DimensionError("point dimension mismatch");
  const auto seeds = seed_point(point, order);
  return eval(seeds);
}

double ScalarField::value(std::span<const double> point) const { return eval(point, 0).value(); }

ScalarField ScalarField::operator-() const {
  if (is_constant()) return constant(dim_, -node_->c);
  if (node_->kind == Kind::Neg) return FieldBuilder::wrap(node_->args[0]);
  return unary(Kind::Neg, *this);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_dims(a, b);
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.dim(), a.node_->c + b.node_->c);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return binary(Kind::Add, a, b);
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_dims(a, b);
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.dim(), a.node_->c - b.node_->c);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return binary(Kind::Sub, a, b);
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_dims(a, b);
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.dim(), a.node_->c * b.node_->c);
  if (a.is_zero() || b.is_zero()) return ScalarField::constant(a.dim(), 0.0);
  if (is_const(a.node_, 1.0)) return b;
  if (is_const(b.node_, 1.0)) return a;
  if (is_const(a.node_, -1.0)) return -b;
  if (is_const(b.node_, -1.0)) return -a;
  return binary(Kind::Mul, a, b);
}

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  check_dims(a, b);
  if (b.is_zero()) throw DomainError("division by the zero field");
  if (a.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.dim(), a.node_->c / b.node_->c);
  if (is_const(b.node_, 1.0)) return a;
  return binary(Kind::Div, a, b);
}

ScalarField operator+(const ScalarField& a, double c) { return a + ScalarField::constant(a.dim(), c); }
ScalarField operator+(double c, const ScalarField& a) { return ScalarField::constant(a.dim(), c) + a; }
ScalarField operator-(const ScalarField& a, double c) { return a - ScalarField::constant(a.dim(), c); }
ScalarField operator-(double c, const ScalarField& a) { return ScalarField::constant(a.dim(), c) - a; }
ScalarField operator*(const ScalarField& a, double c) { return a * ScalarField::constant(a.dim(), c); }
ScalarField operator*(double c, const ScalarField& a) { return ScalarField::constant(a.dim(), c) * a; }
ScalarField operator/(const ScalarField& a, double c) { return a / ScalarField::constant(a.dim(), c); }
ScalarField operator/(double c, const ScalarField& a) { return ScalarField::constant(a.dim(), c) / a; }

ScalarField exp(const ScalarField& a) {
  if (a.is_constant()) return ScalarField::constant(a.dim(), std::exp(a.constant_value()));
  return unary(Kind::Exp, a);
}
ScalarField log(const ScalarField& a) {
  if (a.is_constant()) {
    if (!(a.constant_value() > 0)) throw DomainError("log of non-positive constant");
    return ScalarField::constant(a.dim(), std::log(a.constant_value()));
  }
  return unary(Kind::Log, a);
}
ScalarField sqrt(const ScalarField& a) {
  if (a.is_constant()) {
    if (a.constant_value() < 0) throw DomainError("sqrt of negative constant");
    return ScalarField::constant(a.dim(), std::sqrt(a.constant_value()));
  }
  return unary(Kind::Sqrt, a);
}
ScalarField pow(const ScalarField& a, double p) {
  if (p == 0.0) return ScalarField::constant(a.dim(), 1.0);
  if (p == 1.0) return a;
  if (a.is_constant()) return ScalarField::constant(a.dim(), std::pow(a.constant_value(), p));
  return unary(Kind::Pow, a, p);
}
ScalarField sin(const ScalarField& a) {
  if (a.is_constant()) return ScalarField::constant(a.dim(), std::sin(a.constant_value()));
  return unary(Kind::Sin, a);
}
ScalarField cos(const ScalarField& a) {
  if (a.is_constant()) return ScalarField::constant(a.dim(), std::cos(a.constant_value()));
  return unary(Kind::Cos, a);
}

ScalarField ScalarField::diff(int index) const {
  if (index < 0 || index >= dim_) throw DimensionError("diff index out of range");
  if (!depends_on(index)) return constant(dim_, 0.0);
  const auto arg = [&](int i) { return FieldBuilder::wrap(node_->args[i]); };
  switch (node_->kind) {
    case Kind::Const:
      return constant(dim_, 0.0);
    case Kind::Coord:
      return constant(dim_, node_->index == index ? 1.0 : 0.0);
    case Kind::Add:
      return arg(0).diff(index) + arg(1).diff(index);
    case Kind::Sub:
      return arg(0).diff(index) - arg(1).diff(index);
    case Kind::Mul:
      return arg(0).diff(index) * arg(1) + arg(0) * arg(1).diff(index);
    case Kind::Div:
      return arg(0).diff(index) / arg(1) - (*this) * arg(1).diff(index) / arg(1);
    case Kind::Neg:
      return -arg(0).diff(index);
    case Kind::Pow:
      return node_->c * pow(arg(0), node_->c - 1.0) * arg(0).diff(index);
    case Kind::Exp:
      return (*this) * arg(0).diff(index);
    case Kind::Log:
      return arg(0).diff(index) / arg(0);
    case Kind::Sqrt:
      return 0.5 * arg(0).diff(index) / (*this);
    case Kind::Sin:
      return cos(arg(0)) * arg(0).diff(index);
    case Kind::Cos:
      return -(sin(arg(0)) * arg(0).diff(index));
    case Kind::Compose: {
      const ScalarField inner = arg(0);
      std::vector<ScalarField> subs;
      for (std::size_t i = 1; i < node_->args.size(); ++i) subs.push_back(arg(static_cast<int>(i)));
      ScalarField out = constant(dim_, 0.0);
      for (int k = 0; k < inner.dim(); ++k) {
        if (!inner.depends_on(k)) continue;
        const ScalarField ds = subs[k].diff(index);
        if (ds.is_zero()) continue;
        out = out + inner.diff(k).compose(subs) * ds;
      }
      return out;
    }
  }
  throw Error("unknown field node");
}

ScalarField ScalarField::compose(const std::vector<ScalarField>& subs) const {
  if (static_cast<int>(subs.size()) != dim_) throw DimensionError("compose: substitution count mismatch");
  if (subs.empty()) throw DimensionError("compose: empty substitution");
  const int out_dim = subs[0].dim();
  for (const auto& s : subs) check_dims(s, subs[0]);
  if (is_constant()) return constant(out_dim, node_->c);
  if (node_->kind == Kind::Coord) return subs[node_->index];
  Node n{Kind::Compose, out_dim, 0.0, 0, {node_}, 0};
  for (int i = 0; i < dim_; ++i) {
    n.args.push_back(FieldBuilder::ptr(subs[i]));
    if (depends_on(i)) n.mask |= FieldBuilder::ptr(subs[i])->mask;
  }
  return FieldBuilder::make(std::move(n));
}

ScalarField ScalarField::lift(int new_dim, const std::vector<int>& axes) const {
  if (static_cast<int>(axes.size()) != dim_) throw DimensionError("lift: axes count mismatch");
  std::vector<ScalarField> subs;
  for (int a : axes) subs.push_back(coord(new_dim, a));
  if (subs.empty()) return constant(new_dim, node_->c);
  return compose(subs);
}

VectorField::VectorField(std::vector<ScalarField> coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_)
    if (c.dim() != dim()) throw DimensionError("vector field coefficient dimension mismatch");
}

VectorField VectorField::coordinate(int dim, int index) {
  std::vector<ScalarField> c;
  for (int i = 0; i < dim; ++i) c.push_back(ScalarField::constant(dim, i == index ? 1.0 : 0.0));
  return VectorField(std::move(c));
}

std::vector<Jet> VectorField::eval(std::span<const double> point, int order) const {
  const auto seeds = seed_point(point, order);
  return eval(seeds);
}

std::vector<Jet> VectorField::eval(std::span<const Jet> inputs) const {
  std::vector<Jet> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.eval(inputs));
  return out;
}

std::vector<double> VectorField::value(std::span<const double> point) const {
  std::vector<double> out;
  for (const auto& c : coeffs_) out.push_back(c.value(point));
  return out;
}

ScalarField VectorField::apply(const ScalarField& h) const {
  if (h.dim() != dim()) throw DimensionError("vector field / function dimension mismatch");
  ScalarField out = ScalarField::constant(dim(), 0.0);
  for (int i = 0; i < dim(); ++i) out = out + coeffs_[i] * h.diff(i);
  return out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw DimensionError("vector field dimension mismatch");
  std::vector<ScalarField> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] + b[i]);
  return VectorField(std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw DimensionError("vector field dimension mismatch");
  std::vector<ScalarField> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] - b[i]);
  return VectorField(std::move(c));
}

VectorField operator*(const ScalarField& s, const VectorField& v) {
  std::vector<ScalarField> c;
  for (int i = 0; i < v.dim(); ++i) c.push_back(s * v[i]);
  return VectorField(std::move(c));
}

VectorField operator*(double s, const VectorField& v) {
  std::vector<ScalarField> c;
  for (int i = 0; i < v.dim(); ++i) c.push_back(s * v[i]);
  return VectorField(std::move(c));
}

VectorField bracket(const VectorField& x, const VectorField& y) {
  if (x.dim() != y.dim()) throw DimensionError("bracket dimension mismatch");
  std::vector<ScalarField> c;
  for (int i = 0; i < x.dim(); ++i) c.push_back(x.apply(y[i]) - y.apply(x[i]));
  return VectorField(std::move(c));
}

Jet eval_jet(const ScalarField& h, std::span<const double> point, int order) {
  if (order < 1 || order > kMaxOrder) throw DimensionError("jet order must be 1, 2 or 3");
  if (static_cast<int>(point.size()) != h.dim()) throw DimensionError("point dimension mismatch");
  return h.eval(point, order);
}

double frame_derivative(const VectorField& x, const ScalarField& h, std::span<const double> point) {
  if (x.dim() != h.dim() || static_cast<int>(point.size()) != h.dim())
    throw DimensionError("frame_derivative dimension mismatch");
  const Jet hj = h.eval(point, 1);
  const auto xv = x.value(point);
  double s = 0.0;
  for (int i = 0; i < h.dim(); ++i) s += xv[i] * hj.d(i);
  return s;
}

double frame_second_derivative(const VectorField& x, const VectorField& y, const ScalarField& h,
                               std::span<const double> point) {
  if (x.dim() != h.dim() || y.dim() != h.dim() || static_cast<int>(point.size()) != h.dim())
    throw DimensionError("frame_second_derivative dimension mismatch");
  const auto seeds = seed_point(point, 2);
  const Jet hj = h.eval(seeds);
  const auto yj = y.eval(seeds);
  const Jet yh = directional(yj, hj);
  const auto xv = x.value(point);
  double s = 0.0;
  for (int i = 0; i < h.dim(); ++i) s += xv[i] * yh.d(i);
  return s;
}

ScalarField polynomial(int dim, const std::vector<Monomial>& terms) {
  ScalarField out = ScalarField::constant(dim, 0.0);
  for (const auto& t : terms) {
    if (static_cast<int>(t.exponents.size()) != dim) throw DimensionError("monomial exponent count mismatch");
    ScalarField m = ScalarField::constant(dim, t.coeff);
    for (int i = 0; i < dim; ++i)
      if (t.exponents[i] > 0) m = m * pow(ScalarField::coord(dim, i), t.exponents[i]);
    out = out + m;
  }
  return out;
}

}  // namespace subrv
