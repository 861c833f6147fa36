#include "conewish/cone.hpp"

#include <algorithm>
#include <cmath>

#include "conewish/error.hpp"

namespace conewish {

namespace {

std::vector<Index> natural_order(std::size_t n) {
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) order[i] = i;
  return order;
}

void require_hermitian(const StructuredMatrix& x) {
  if (!x.is_hermitian(1e-10)) throw Error("matrix is not Hermitian");
}

// LDL^T elimination in `order`. `before(c, j)` says c is eliminated ahead of
// j and couples to it (c < j for the cone, j < c for the dual cone). Returns
// the unit factor F (F_ij != 0 only when before(j, i)) and the pivots, or the
// position of the first failing pivot.
struct Elimination {
  Eigen::MatrixXd unit;
  Eigen::VectorXd diag;
  std::optional<Index> failed;
  double failed_pivot = 0.0;
};

template <typename Before>
Elimination eliminate(const Eigen::MatrixXd& x, const std::vector<Index>& order, Before before, double tol) {
  const auto n = static_cast<Eigen::Index>(order.size());
  Elimination e{Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n), std::nullopt, 0.0};
  const double scale = n ? x.diagonal().maxCoeff() : 0.0;
  const double threshold = tol * std::max(scale, 0.0);
  for (Index p = 0; p < order.size(); ++p) {
    const Index i = order[p];
    for (Index q = 0; q < p; ++q) {
      const Index j = order[q];
      if (!before(j, i)) continue;
      double v = x(i, j);
      for (Index r = 0; r < q; ++r) {
        const Index c = order[r];
        if (before(c, j)) v -= e.unit(i, c) * e.unit(j, c) * e.diag(c);
      }
      e.unit(i, j) = v / e.diag(j);
    }
    double d = x(i, i);
    for (Index q = 0; q < p; ++q) {
      const Index c = order[q];
      if (before(c, i)) d -= e.unit(i, c) * e.unit(i, c) * e.diag(c);
    }
    if (!(d > threshold) || scale <= 0.0) {
      e.failed = i;
      e.failed_pivot = d;
      return e;
    }
    e.diag(i) = d;
  }
  return e;
}

void require_lower_positive(const StructuredMatrix& t) {
  if (!t.is_lower_triangular()) throw Error("factor is not lower triangular");
  for (Index i = 0; i < t.size(); ++i)
    if (!(t(i, i) > 0.0)) throw Error("factor diagonal must be positive");
}

}  // namespace

StructuredMatrix TriangularFactor::lower() const {
  return StructuredMatrix(unit_lower.poset(), unit_lower.dense() * diag.cwiseSqrt().asDiagonal());
}

StructuredMatrix TriangularFactor::compose() const {
  return multiply(multiply(unit_lower, StructuredMatrix::Diagonal(unit_lower.poset(), diag)),
                  involution(unit_lower));
}

TriangularFactor decompose(const StructuredMatrix& x, double tol) {
  return decompose(x, natural_order(x.size()), tol);
}

TriangularFactor decompose(const StructuredMatrix& x, const std::vector<Index>& elimination_order, double tol) {
  require_hermitian(x);
  const Poset& p = *x.poset();
  if (elimination_order.size() != p.size()) throw Error("elimination order has wrong length");
  for (Index a = 0; a < elimination_order.size(); ++a)
    for (Index b = a + 1; b < elimination_order.size(); ++b)
      if (p.less(elimination_order[b], elimination_order[a]))
        throw Error("elimination order is not a linear extension");
  Elimination e = eliminate(x.dense(), elimination_order, [&p](Index c, Index j) { return p.less(c, j); }, tol);
  if (e.failed) throw NotInCone(*e.failed, e.failed_pivot, p.label(*e.failed));
  return TriangularFactor{StructuredMatrix(x.poset(), std::move(e.unit)), std::move(e.diag)};
}

ConePoint::ConePoint(StructuredMatrix x, double tol)
    : matrix_(std::move(x)), factor_(decompose(matrix_, tol)), lower_(factor_.lower()) {}

ConePoint::ConePoint(StructuredMatrix x, TriangularFactor f, StructuredMatrix t)
    : matrix_(std::move(x)), factor_(std::move(f)), lower_(std::move(t)) {}

ConePoint ConePoint::FromLowerFactor(const StructuredMatrix& t) {
  require_lower_positive(t);
  const Eigen::VectorXd d = t.dense().diagonal();
  StructuredMatrix unit(t.poset(), t.dense() * d.cwiseInverse().asDiagonal());
  StructuredMatrix x = multiply(t, involution(t));
  return ConePoint(std::move(x), TriangularFactor{std::move(unit), d.cwiseAbs2()}, t);
}

ConePoint ConePoint::Identity(PosetPtr poset) { return FromLowerFactor(StructuredMatrix::Identity(std::move(poset))); }

DualPoint::DualPoint(StructuredMatrix theta, double tol) : matrix_(std::move(theta)), z_(matrix_.poset()) {
  require_hermitian(matrix_);
  const Poset& p = *matrix_.poset();
  std::vector<Index> order = natural_order(p.size());
  std::reverse(order.begin(), order.end());
  Elimination e = eliminate(matrix_.dense(), order, [&p](Index c, Index j) { return p.less(j, c); }, tol);
  if (e.failed) throw NotInDualCone(*e.failed, e.failed_pivot, p.label(*e.failed));
  // theta = U D U^T with U unit upper; Z = sqrt(D) U^T is lower.
  z_ = StructuredMatrix(matrix_.poset(), e.diag.cwiseSqrt().asDiagonal() * e.unit.transpose());
}

DualPoint::DualPoint(StructuredMatrix theta, StructuredMatrix z) : matrix_(std::move(theta)), z_(std::move(z)) {}

DualPoint DualPoint::FromFactor(const StructuredMatrix& z) {
  require_lower_positive(z);
  return DualPoint(multiply(involution(z), z), z);
}

StructuredMatrix inverse_lower(const StructuredMatrix& t) {
  if (!t.is_lower_triangular()) throw Error("inverse_lower: argument is not lower triangular");
  const Poset& p = *t.poset();
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < p.size(); ++j) {
    if (t(j, j) == 0.0) throw Error("inverse_lower: singular diagonal");
    inv(j, j) = 1.0 / t(j, j);
    for (Index i = j + 1; i < p.size(); ++i) {
      if (!p.less(j, i)) continue;
      double s = 0.0;
      for (Index k = j; k < i; ++k)
        if (p.leq(j, k) && p.less(k, i)) s += t(i, k) * inv(k, j);
      inv(i, j) = -s / t(i, i);
    }
  }
  return StructuredMatrix(t.poset(), std::move(inv));
}

TriangularAction::TriangularAction(StructuredMatrix t) : t_(std::move(t)) { require_lower_positive(t_); }

ConePoint TriangularAction::operator()(const ConePoint& x) const {
  if (!same_poset(t_.poset(), x.poset())) throw PosetMismatch();
  return ConePoint::FromLowerFactor(multiply(t_, x.lower_factor()));
}

StructuredMatrix TriangularAction::adjoint(const StructuredMatrix& theta) const {
  if (!same_poset(t_.poset(), theta.poset())) throw PosetMismatch();
  return StructuredMatrix::Project(t_.poset(), t_.dense().transpose() * theta.dense() * t_.dense());
}

TriangularAction TriangularAction::compose(const TriangularAction& other) const {
  return TriangularAction(multiply(t_, other.t_));
}

TriangularAction TriangularAction::inverse() const { return TriangularAction(inverse_lower(t_)); }

TriangularAction division_algorithm(const ConePoint& u) { return TriangularAction(inverse_lower(u.lower_factor())); }

DualPoint chi_inverse(const ConePoint& sigma, const Eigen::VectorXd& lambda) {
  const StructuredMatrix zinv = inverse_lower(sigma.lower_factor());
  const StructuredMatrix r = multiply(StructuredMatrix::Diagonal(sigma.poset(), lambda.cwiseSqrt()), zinv);
  return DualPoint::FromFactor(r);
}

ConePoint theta_chi(const DualPoint& theta, const Eigen::VectorXd& lambda) {
  const StructuredMatrix zinv = inverse_lower(theta.factor());
  return ConePoint::FromLowerFactor(multiply(zinv, StructuredMatrix::Diagonal(theta.poset(), lambda.cwiseSqrt())));
}

UpSetRestriction up_set_restriction(const PosetPtr& poset, Index i) {
  const std::vector<Index> up = poset->up_set(i);
  UpSetRestriction r;
  r.sub = share(poset->induced(up));
  r.to_parent.resize(up.size());
  for (Index k = 0; k < r.sub->size(); ++k) r.to_parent[k] = poset->index_of(r.sub->label(k));
  r.root = r.sub->index_of(poset->label(i));
  return r;
}

StructuredMatrix restrict_block(const StructuredMatrix& m, const UpSetRestriction& r) {
  StructuredMatrix out(r.sub);
  for (Index a = 0; a < r.to_parent.size(); ++a)
    for (Index b = 0; b < r.to_parent.size(); ++b) out.set(a, b, m(r.to_parent[a], r.to_parent[b]));
  return out;
}

StructuredMatrix embed_block(const StructuredMatrix& sub, const UpSetRestriction& r, const PosetPtr& parent) {
  StructuredMatrix out(parent);
  for (Index a = 0; a < r.to_parent.size(); ++a)
    for (Index b = 0; b < r.to_parent.size(); ++b) out.set(r.to_parent[a], r.to_parent[b], sub(a, b));
  return out;
}

StructuredMatrix up_set_factor(const StructuredMatrix& t, Index i) {
  const Poset& p = *t.poset();
  StructuredMatrix out(t.poset());
  for (Index j = 0; j < p.size(); ++j)
    for (Index k = 0; k < p.size(); ++k)
      if (p.leq(i, j) && p.leq(i, k)) out.set(j, k, t(j, k));
  return out;
}

StructuredMatrix up_set_part(const ConePoint& z, Index i) {
  const StructuredMatrix ti = up_set_factor(z.lower_factor(), i);
  return multiply(ti, involution(ti));
}

ConePoint restrict(const ConePoint& z, const UpSetRestriction& r) {
  return ConePoint::FromLowerFactor(restrict_block(z.lower_factor(), r));
}

StructuredMatrix ComponentDecomposition::sum() const {
  if (components.empty()) throw Error("empty component decomposition");
  StructuredMatrix s(components.front().value.poset());
  for (const auto& c : components) s = s + c.value;
  return s;
}

ComponentDecomposition component_decomposition_from_factor(const StructuredMatrix& t) {
  const PosetPtr& poset = t.poset();
  const Poset& p = *poset;
  const Separators seps = separators(p);
  auto part = [&t](Index i) {
    const StructuredMatrix ti = up_set_factor(t, i);
    return multiply(ti, involution(ti));
  };
  ComponentDecomposition out;
  const auto minimal = p.minimal_elements();
  for (Index i = 0; i < p.size(); ++i) {
    const bool is_min = std::find(minimal.begin(), minimal.end(), i) != minimal.end();
    const bool is_sep = std::find(seps.minimal.begin(), seps.minimal.end(), i) != seps.minimal.end();
    if (is_min) {
      StructuredMatrix zi = part(i);
      for (Index s : seps.per_element[i]) zi = zi - part(s);
      out.components.push_back({i, Component::Kind::Minimal, std::move(zi)});
    } else if (is_sep) {
      out.components.push_back({i, Component::Kind::Separator, part(i)});
    }
  }
  return out;
}

ComponentDecomposition component_decomposition(const ConePoint& z) {
  return component_decomposition_from_factor(z.lower_factor());
}

std::vector<std::pair<Index, Index>> component_entry_block(const Poset& p, Index element) {
  const Separators seps = separators(p);
  const auto minimal = p.minimal_elements();
  const bool is_min = std::find(minimal.begin(), minimal.end(), element) != minimal.end();
  const bool is_sep = std::find(seps.minimal.begin(), seps.minimal.end(), element) != seps.minimal.end();
  std::vector<std::pair<Index, Index>> out;
  if (!is_min && !is_sep) return out;
  for (Index j = 0; j < p.size(); ++j)
    for (Index k = 0; k <= j; ++k) {
      if (!p.leq(k, j) || !p.leq(element, k)) continue;
      bool claimed_above = false;
      if (is_min)
        for (Index s : seps.per_element[element])
          if (p.leq(s, k)) claimed_above = true;
      if (!claimed_above) out.emplace_back(j, k);
    }
  return out;
}

}  // namespace conewish
