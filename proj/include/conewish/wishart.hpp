#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "conewish/cone.hpp"
#include "conewish/random.hpp"

namespace conewish {

/// The multiplier chi, given by one shape parameter lambda_i per element.
///
/// Construction enforces membership in the admissible set:
/// lambda_i > n_{i.} / 2 for every i.
class Multiplier {
 public:
  /// Throws InvalidMultiplier listing every violated constraint.
  Multiplier(PosetPtr poset, Eigen::VectorXd lambdas);
  static Multiplier Constant(PosetPtr poset, double lambda);

  const PosetPtr& poset() const { return poset_; }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  double operator[](Index i) const { return lambdas_(static_cast<Eigen::Index>(i)); }
  /// lambda_i - n_{i.}/2, the Gamma shape of t_ii^2 under the standard law.
  double gamma_shape(Index i) const;

 private:
  PosetPtr poset_;
  Eigen::VectorXd lambdas_;
};

/// "λ₃" for numeric labels, "λ_label" otherwise.
std::string lambda_name(const std::string& label);

/// Human-readable admissibility constraints, one per element: "λ₃ > 1".
std::vector<std::string> multiplier_constraints(const Poset& p);

/// Lower bound n_{i.}/2 rendered as "0", "1/2", "1", "3/2", ...
std::string half_integer(int twice);

/// e^chi = diag(lambda).
ConePoint e_chi(const Multiplier& chi);

/// The Wishart law HW_{chi, sigma} on the cone.
class WishartModel {
 public:
  WishartModel(Multiplier chi, ConePoint sigma);
  /// sigma = e^chi.
  static WishartModel Standard(Multiplier chi);

  const Multiplier& chi() const { return chi_; }
  const ConePoint& sigma() const { return sigma_; }
  const DualPoint& sigma_neg_chi() const { return sigma_neg_chi_; }
  double log_normalizer() const { return log_normalizer_; }

  /// Log density with respect to Lebesgue measure on the entries x_ij, j <= i.
  double log_density(const ConePoint& x) const;
  double density(const ConePoint& x) const;

  /// log E exp(-tr(theta X)) for theta in P* (theta = 0 allowed).
  double log_laplace_transform(const StructuredMatrix& theta) const;
  double laplace_transform(const StructuredMatrix& theta) const;

  /// rho = pi(sqrt(Lambda) Z^{-1}) for sigma = ZZ*; maps this law onto HW_{chi, e^chi}.
  TriangularAction standardizer() const;
  ConePoint standardize(const ConePoint& x) const;

  /// Standard draw pushed through rho^{-1} = pi(Z sqrt(Lambda)^{-1}).
  ConePoint sample(Rng& rng) const;

 private:
  Multiplier chi_;
  ConePoint sigma_;
  DualPoint sigma_neg_chi_;
  StructuredMatrix to_model_;
  double log_normalizer_;
};

/// T in T_l^+ with independent entries: t_ii = sqrt(Gamma(lambda_i - n_{i.}/2, 1)),
/// t_ij ~ Normal(0, 1/2) for j < i.
StructuredMatrix sample_standard_factor(const Multiplier& chi, Rng& rng);

/// A draw from HW_{chi, e^chi}: TT* for T from sample_standard_factor.
ConePoint sample_standard(const Multiplier& chi, Rng& rng);

}  // namespace conewish
