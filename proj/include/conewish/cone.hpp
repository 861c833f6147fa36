#pragma once

#include <Eigen/Dense>
#include <vector>

#include "conewish/algebra.hpp"

namespace conewish {

/// Relative pivot threshold: a pivot d_i must exceed tol * max_i x_ii.
inline constexpr double kConeTolerance = 1e-12;

/// X = T1 D T1* with T1 unit lower triangular and D positive diagonal.
struct TriangularFactor {
  StructuredMatrix unit_lower;
  Eigen::VectorXd diag;

  /// T = T1 sqrt(D), the T_l^+ factor with X = TT*.
  StructuredMatrix lower() const;
  /// T1 D T1* (Vinberg products).
  StructuredMatrix compose() const;
};

/// Generalized Cholesky factorization X = T1 D T1* along the poset's linear
/// extension. Only entries (i, j) with j <= i are read; X must be Hermitian.
/// Throws NotInCone when a pivot falls below tol * max diagonal.
TriangularFactor decompose(const StructuredMatrix& x, double tol = kConeTolerance);

/// Same factorization, eliminating in an explicitly supplied linear extension.
TriangularFactor decompose(const StructuredMatrix& x, const std::vector<Index>& elimination_order,
                           double tol = kConeTolerance);

/// A point of the homogeneous cone P = { TT* : T in T_l^+ } with its factor.
class ConePoint {
 public:
  /// Factors `x`; throws NotInCone.
  explicit ConePoint(StructuredMatrix x, double tol = kConeTolerance);
  /// TT* for T in T_l^+ (lower triangular, positive diagonal).
  static ConePoint FromLowerFactor(const StructuredMatrix& t);
  static ConePoint Identity(PosetPtr poset);

  const PosetPtr& poset() const { return matrix_.poset(); }
  const StructuredMatrix& matrix() const { return matrix_; }
  const TriangularFactor& factor() const { return factor_; }
  /// T with X = TT*.
  const StructuredMatrix& lower_factor() const { return lower_; }

  /// x_{[i].} = D_ii.
  double generalized_power(Index i) const { return factor_.diag(static_cast<Eigen::Index>(i)); }
  const Eigen::VectorXd& generalized_powers() const { return factor_.diag; }

 private:
  ConePoint(StructuredMatrix x, TriangularFactor f, StructuredMatrix t);

  StructuredMatrix matrix_;
  TriangularFactor factor_;
  StructuredMatrix lower_;
};

/// A point of the dual cone P* = { Z*Z : Z in T_l^+ }.
class DualPoint {
 public:
  /// Factors theta = Z*Z by elimination in the opposite order; throws NotInDualCone.
  explicit DualPoint(StructuredMatrix theta, double tol = kConeTolerance);
  static DualPoint FromFactor(const StructuredMatrix& z);

  const PosetPtr& poset() const { return matrix_.poset(); }
  const StructuredMatrix& matrix() const { return matrix_; }
  /// Z in T_l^+ with theta = Z*Z.
  const StructuredMatrix& factor() const { return z_; }

 private:
  DualPoint(StructuredMatrix theta, StructuredMatrix z);

  StructuredMatrix matrix_;
  StructuredMatrix z_;
};

/// Inverse of T in T_l with nonzero diagonal, by forward substitution along
/// the linear extension. The result stays in T_l.
StructuredMatrix inverse_lower(const StructuredMatrix& t);

/// The group element pi(T): X = WW* -> (TW)(W*T*), for T in T_l^+.
class TriangularAction {
 public:
  explicit TriangularAction(StructuredMatrix t);

  const StructuredMatrix& matrix() const { return t_; }
  ConePoint operator()(const ConePoint& x) const;
  /// Adjoint for the trace pairing: tr(theta * pi(T)X) = tr(adjoint(theta) * X).
  StructuredMatrix adjoint(const StructuredMatrix& theta) const;
  /// (this o other) = pi(T T').
  TriangularAction compose(const TriangularAction& other) const;
  TriangularAction inverse() const;

 private:
  StructuredMatrix t_;
};

inline ConePoint pi_action(const StructuredMatrix& t, const ConePoint& x) { return TriangularAction(t)(x); }

/// g(U) = pi(T^{-1}) for U = TT*, so that g(U)(U) = e.
TriangularAction division_algorithm(const ConePoint& u);

/// sigma^{-chi} = (Z*)^{-1} diag(lambda) Z^{-1} for sigma = ZZ*.
DualPoint chi_inverse(const ConePoint& sigma, const Eigen::VectorXd& lambda);

/// theta^{chi} = Z^{-1} diag(lambda) (Z*)^{-1} for theta = Z*Z.
ConePoint theta_chi(const DualPoint& theta, const Eigen::VectorXd& lambda);

/// The sub-poset on I_{i<=} and how its indices map back into the parent.
struct UpSetRestriction {
  PosetPtr sub;
  std::vector<Index> to_parent;
  /// Index of i inside `sub`.
  Index root = 0;
};

UpSetRestriction up_set_restriction(const PosetPtr& poset, Index i);

/// Copies the block of `m` over the restricted elements into the sub-algebra.
StructuredMatrix restrict_block(const StructuredMatrix& m, const UpSetRestriction& r);
/// Places a sub-algebra element back into the parent algebra (zero elsewhere).
StructuredMatrix embed_block(const StructuredMatrix& sub, const UpSetRestriction& r, const PosetPtr& parent);

/// T_{i<=}: the entries t_jk of T with i <= j, k; zero elsewhere.
StructuredMatrix up_set_factor(const StructuredMatrix& t, Index i);

/// Z_{i<=} = T_{i<=} T_{i<=}* as an element of the full algebra.
StructuredMatrix up_set_part(const ConePoint& z, Index i);

/// Z_{i<=} as a point of the sub-cone P_i over I_{i<=}.
ConePoint restrict(const ConePoint& z, const UpSetRestriction& r);

struct Component {
  enum class Kind { Minimal, Separator };
  Index element;
  Kind kind;
  StructuredMatrix value;
};

/// Z = sum of Z_i over minimal elements and minimal separators.
struct ComponentDecomposition {
  std::vector<Component> components;
  StructuredMatrix sum() const;
};

/// For i minimal: Z_i = Z_{i<=} - sum_{s in S_i} Z_{s<=}; for i in S:
/// Z_i = Z_{i<=}; every other Z_i vanishes and is omitted.
ComponentDecomposition component_decomposition(const ConePoint& z);
/// Same, starting from a T_l^+ factor of Z.
ComponentDecomposition component_decomposition_from_factor(const StructuredMatrix& t);

/// Entries (j, k), k <= j, of T on which the component at `element` depends.
/// Empty for elements that carry no component.
std::vector<std::pair<Index, Index>> component_entry_block(const Poset& p, Index element);

}  // namespace conewish
