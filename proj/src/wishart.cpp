#include "conewish/wishart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "conewish/error.hpp"

namespace conewish {

std::string half_integer(int twice) {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

std::string lambda_name(const std::string& label) {
  static const char* const kSubscripts[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
  if (label.empty() || !std::all_of(label.begin(), label.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return "λ_" + label;
  std::string out = "λ";
  for (char c : label) out += kSubscripts[c - '0'];
  return out;
}

std::vector<std::string> multiplier_constraints(const Poset& p) {
  const PosetDims d = dims(p);
  std::vector<std::string> out;
  for (Index i = 0; i < p.size(); ++i) out.push_back(lambda_name(p.label(i)) + " > " + half_integer(d.n_i_dot[i]));
  return out;
}

Multiplier::Multiplier(PosetPtr poset, Eigen::VectorXd lambdas) : poset_(std::move(poset)), lambdas_(std::move(lambdas)) {
  if (static_cast<std::size_t>(lambdas_.size()) != poset_->size())
    throw InvalidMultiplier("expected " + std::to_string(poset_->size()) + " lambda values, got " +
                                std::to_string(lambdas_.size()),
                            {});
  require_condition_f(*poset_);
  const PosetDims d = dims(*poset_);
  const auto constraints = multiplier_constraints(*poset_);
  std::vector<std::string> violated;
  for (Index i = 0; i < poset_->size(); ++i)
    if (!(lambdas_(static_cast<Eigen::Index>(i)) > d.n_i_dot[i] / 2.0)) violated.push_back(constraints[i]);
  if (!violated.empty()) {
    std::string what = "invalid multiplier: requires";
    for (std::size_t k = 0; k < violated.size(); ++k) what += (k ? ", " : " ") + violated[k];
    throw InvalidMultiplier(what, violated);
  }
}

Multiplier Multiplier::Constant(PosetPtr poset, double lambda) {
  const auto n = static_cast<Eigen::Index>(poset->size());
  return Multiplier(std::move(poset), Eigen::VectorXd::Constant(n, lambda));
}

double Multiplier::gamma_shape(Index i) const { return (*this)[i] - dims(*poset_).n_i_dot[i] / 2.0; }

ConePoint e_chi(const Multiplier& chi) {
  return ConePoint(StructuredMatrix::Diagonal(chi.poset(), chi.lambdas()));
}

namespace {

StructuredMatrix to_model_factor(const Multiplier& chi, const ConePoint& sigma) {
  return multiply(sigma.lower_factor(), StructuredMatrix::Diagonal(chi.poset(), chi.lambdas().cwiseSqrt().cwiseInverse()));
}

double compute_log_normalizer(const Multiplier& chi, const ConePoint& sigma) {
  const Poset& p = *chi.poset();
  const double pairs = static_cast<double>(p.comparable_pair_count());
  double s = -0.5 * pairs * std::log(std::numbers::pi);
  for (Index i = 0; i < p.size(); ++i) {
    const double l = chi[i];
    s += l * std::log(l) - std::lgamma(chi.gamma_shape(i)) - l * std::log(sigma.generalized_power(i));
  }
  return s;
}

}  // namespace

WishartModel::WishartModel(Multiplier chi, ConePoint sigma)
    : chi_(std::move(chi)),
      sigma_(std::move(sigma)),
      sigma_neg_chi_(chi_inverse(sigma_, chi_.lambdas())),
      to_model_(to_model_factor(chi_, sigma_)),
      log_normalizer_(compute_log_normalizer(chi_, sigma_)) {
  if (!same_poset(chi_.poset(), sigma_.poset())) throw PosetMismatch();
}

WishartModel WishartModel::Standard(Multiplier chi) {
  ConePoint sigma = e_chi(chi);
  return WishartModel(std::move(chi), std::move(sigma));
}

double WishartModel::log_density(const ConePoint& x) const {
  if (!same_poset(x.poset(), chi_.poset())) throw PosetMismatch();
  const PosetDims d = dims(*chi_.poset());
  double s = log_normalizer_ - trace(multiply(sigma_neg_chi_.matrix(), x.matrix()));
  for (Index i = 0; i < x.poset()->size(); ++i) s += (chi_[i] - d.n_i[i]) * std::log(x.generalized_power(i));
  return s;
}

double WishartModel::density(const ConePoint& x) const { return std::exp(log_density(x)); }

double WishartModel::log_laplace_transform(const StructuredMatrix& theta) const {
  if (!same_poset(theta.poset(), chi_.poset())) throw PosetMismatch();
  const DualPoint shifted(theta + sigma_neg_chi_.matrix());
  const StructuredMatrix& z = shifted.factor();
  double s = 0.0;
  for (Index i = 0; i < z.size(); ++i) {
    const double l = chi_[i];
    s += l * (std::log(l) - 2.0 * std::log(z(i, i))) - l * std::log(sigma_.generalized_power(i));
  }
  return s;
}

double WishartModel::laplace_transform(const StructuredMatrix& theta) const {
  return std::exp(log_laplace_transform(theta));
}

TriangularAction WishartModel::standardizer() const { return TriangularAction(inverse_lower(to_model_)); }

ConePoint WishartModel::standardize(const ConePoint& x) const { return standardizer()(x); }

ConePoint WishartModel::sample(Rng& rng) const {
  return ConePoint::FromLowerFactor(multiply(to_model_, sample_standard_factor(chi_, rng)));
}

StructuredMatrix sample_standard_factor(const Multiplier& chi, Rng& rng) {
  const Poset& p = *chi.poset();
  const PosetDims d = dims(p);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  StructuredMatrix t(chi.poset());
  for (Index i = 0; i < p.size(); ++i) {
    std::gamma_distribution<double> gamma(chi[i] - d.n_i_dot[i] / 2.0, 1.0);
    t.set(i, i, std::sqrt(gamma(rng)));
    for (Index j = 0; j < i; ++j)
      if (p.less(j, i)) t.set(i, j, normal(rng));
  }
  return t;
}

ConePoint sample_standard(const Multiplier& chi, Rng& rng) {
  return ConePoint::FromLowerFactor(sample_standard_factor(chi, rng));
}

}  // namespace conewish
