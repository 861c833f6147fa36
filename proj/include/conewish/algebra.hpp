#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "conewish/poset.hpp"

namespace conewish {

/// Element of the Vinberg algebra A over a poset with every E_ij = R.
///
/// Stored as a dense |I| x |I| array; entry (i, j) may be nonzero only when
/// i == j or i and j are comparable. Lower-triangular elements (T_l) have
/// a_ij != 0 only for j <= i; upper-triangular (T_u) only for i <= j.
class StructuredMatrix {
 public:
  explicit StructuredMatrix(PosetPtr poset);
  /// Throws StructuralZeroViolation if `dense` is nonzero on an unrelated pair.
  StructuredMatrix(PosetPtr poset, Eigen::MatrixXd dense);

  static StructuredMatrix Identity(PosetPtr poset);
  static StructuredMatrix Diagonal(PosetPtr poset, const Eigen::VectorXd& diag);
  /// Zeroes every entry outside the structural mask.
  static StructuredMatrix Project(PosetPtr poset, Eigen::MatrixXd dense);

  const PosetPtr& poset() const { return poset_; }
  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& dense() const { return entries_; }

  double operator()(Index i, Index j) const { return entries_(i, j); }
  /// Throws StructuralZeroViolation on unrelated (i, j).
  void set(Index i, Index j, double value);

  bool is_lower_triangular() const;
  bool is_upper_triangular() const;
  bool is_diagonal() const;
  bool is_hermitian(double tol = 0.0) const;

  double max_abs() const { return entries_.size() ? entries_.cwiseAbs().maxCoeff() : 0.0; }

  StructuredMatrix operator+(const StructuredMatrix& other) const;
  StructuredMatrix operator-(const StructuredMatrix& other) const;
  StructuredMatrix operator*(double s) const;

 private:
  PosetPtr poset_;
  Eigen::MatrixXd entries_;
};

/// True iff (i, j) carries a nonzero block: i == j or i, j comparable.
bool in_mask(const Poset& p, Index i, Index j);

/// Same poset object or structurally equal posets.
bool same_poset(const PosetPtr& a, const PosetPtr& b);

/// Vinberg product: c_ij = sum_mu a_imu b_muj on comparable (i, j), else 0.
/// Throws PosetMismatch.
StructuredMatrix multiply(const StructuredMatrix& a, const StructuredMatrix& b);

/// A -> A*, the transpose (f_ij = identity).
StructuredMatrix involution(const StructuredMatrix& a);

double trace(const StructuredMatrix& a);

/// Ordinary matrix product of the dense arrays, without mask projection.
Eigen::MatrixXd standard_product(const StructuredMatrix& a, const StructuredMatrix& b);

/// Random element generators used by property checks. Entries are N(0, 1).
StructuredMatrix random_element(PosetPtr poset, std::mt19937_64& rng);
StructuredMatrix random_lower(PosetPtr poset, std::mt19937_64& rng);
/// Lower-triangular with diagonal drawn uniformly from [0.5, 2].
StructuredMatrix random_lower_positive(PosetPtr poset, std::mt19937_64& rng);

struct AxiomCheck {
  /// Largest residual over all trials, relative to operand scale.
  double max_residual = 0.0;
  bool passed = true;
  /// Trial index and entry of the largest residual when the check failed.
  std::optional<std::size_t> failing_trial;
  std::optional<std::pair<Index, Index>> witness_entry;
};

/// Results for axioms i) .. vi), index 0 .. 5.
struct AxiomReport {
  std::array<AxiomCheck, 6> axioms;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  bool all_passed() const;
};

inline constexpr double kAxiomTolerance = 1e-10;

/// Samples random A, B, C in A and S, T, U in T_l and checks the six Vinberg
/// identities. Failures are reported, never thrown.
AxiomReport verify_axioms(const PosetPtr& poset, std::size_t trials, std::uint64_t seed,
                          double tolerance = kAxiomTolerance);

/// Residual table for one fixed (T, U) pair on axiom vi): T(UU*) - (TU)U*.
StructuredMatrix axiom_vi_residual(const StructuredMatrix& t, const StructuredMatrix& u);

/// Whether TT* (Vinberg) equals T.T* (standard) for every T in T_l^+.
///
/// Holds exactly when no element has two or more upper covers; see
/// Poset::branching_elements(). On posets whose only branching elements are
/// minimal this coincides with "no source".
bool is_standard_mult_equivalent(const Poset& p);

/// Randomized cross-check: number of trials among `trials` where the Vinberg
/// and standard products of T, T* differ by more than `tol`.
std::size_t standard_product_mismatches(const PosetPtr& poset, std::size_t trials, std::uint64_t seed,
                                        double tol = 1e-12);

}  // namespace conewish
