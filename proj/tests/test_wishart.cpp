#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "conewish/error.hpp"
#include "conewish/stats.hpp"
#include "conewish/wishart.hpp"
#include "oracles.hpp"

using namespace conewish;

namespace {

PosetPtr example2() { return share(Poset::FromIntegerEdges(4, {{1, 3}, {2, 3}, {2, 4}})); }

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

// Admissible lambdas: lambda_i = n_{i.}/2 + shape with shape in (0.3, 3).
Eigen::VectorXd random_admissible(const Poset& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.3, 3.0);
  const PosetDims d = dims(p);
  Eigen::VectorXd l(static_cast<Eigen::Index>(p.size()));
  for (Index i = 0; i < p.size(); ++i) l(i) = 0.5 * d.n_i_dot[i] + u(rng);
  return l;
}

ConePoint random_point(const PosetPtr& p, std::mt19937_64& rng, double scale = 1.0) {
  return ConePoint::FromLowerFactor(random_lower_positive(p, rng) * scale);
}

struct McMean {
  double mean;
  double se;
};

McMean mc_laplace(const WishartModel& m, const StructuredMatrix& theta, std::size_t n, std::uint64_t seed) {
  std::vector<double> v(n);
  for (std::size_t d = 0; d < n; ++d) {
    Rng rng(seed, d);
    v[d] = std::exp(-trace(multiply(theta, m.sample(rng).matrix())));
  }
  return {stats::mean(v), stats::standard_error(v)};
}

}  // namespace

TEST(Multiplier, AdmissibleSet) {
  const PosetPtr p = example2();
  EXPECT_NO_THROW(Multiplier(p, vec({0.1, 0.1, 1.01, 0.51})));
  try {
    Multiplier(p, vec({1.0, 1.0, 1.0, 0.5}));
    FAIL() << "expected InvalidMultiplier";
  } catch (const InvalidMultiplier& e) {
    EXPECT_EQ(e.violations(), (std::vector<std::string>{"λ₃ > 1", "λ₄ > 1/2"}));
  }
  EXPECT_THROW(Multiplier(p, vec({1.0, 1.0, 2.0})), Error);
  const PosetPtr diamond = share(Poset::FromIntegerEdges(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}}));
  EXPECT_THROW(Multiplier::Constant(diamond, 5.0), ConditionFViolation);
  EXPECT_EQ(multiplier_constraints(*p), (std::vector<std::string>{"λ₁ > 0", "λ₂ > 0", "λ₃ > 1", "λ₄ > 1/2"}));
  const Multiplier chi(p, vec({1.0, 2.0, 3.0, 4.0}));
  EXPECT_DOUBLE_EQ(chi.gamma_shape(p->index_of("3")), 2.0);
  EXPECT_DOUBLE_EQ(chi.gamma_shape(p->index_of("4")), 3.5);
  EXPECT_EQ(lambda_name("12"), "λ₁₂");
  EXPECT_EQ(lambda_name("a"), "λ_a");
  EXPECT_EQ(half_integer(3), "3/2");
  EXPECT_EQ(half_integer(4), "2");
}

TEST(Multiplier, StarAdmissibleSet) {
  const std::vector<std::string> c = multiplier_constraints(Poset::Star(4));
  EXPECT_EQ(c, (std::vector<std::string>{"λ₁ > 0", "λ₂ > 1/2", "λ₃ > 1/2", "λ₄ > 1/2"}));
}

TEST(EChi, IsDiagonalLambda) {
  const PosetPtr p = example2();
  const Multiplier chi(p, vec({1.0, 2.0, 3.0, 1.5}));
  const ConePoint e = e_chi(chi);
  EXPECT_EQ((e.matrix() - StructuredMatrix::Diagonal(p, chi.lambdas())).max_abs(), 0.0);
  EXPECT_LT((chi_inverse(e, chi.lambdas()).matrix() - StructuredMatrix::Identity(p)).max_abs(), 1e-12);
  const Multiplier flat = Multiplier::Constant(share(Poset::Chain(3)), 2.0);
  EXPECT_LT((e_chi(flat).matrix().dense() - 2.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Density, OneElementIsGamma) {
  const PosetPtr p = share(Poset::Chain(1));
  for (double lambda : {0.7, 2.0, 5.5}) {
    for (double s : {0.5, 1.0, 3.0}) {
      const WishartModel m(Multiplier::Constant(p, lambda), ConePoint(StructuredMatrix::Diagonal(p, vec({s}))));
      for (double x : {0.1, 1.0, 4.0}) {
        const double rate = lambda / s;
        const double expected = lambda * std::log(rate) + (lambda - 1.0) * std::log(x) - rate * x - std::lgamma(lambda);
        EXPECT_NEAR(m.log_density(ConePoint(StructuredMatrix::Diagonal(p, vec({x})))), expected, 1e-12);
      }
    }
  }
}

TEST(Density, FourElementExponentsAndNormalizer) {
  const PosetPtr p = example2();
  std::mt19937_64 rng(1);
  const Eigen::VectorXd l = vec({0.8, 1.7, 2.4, 1.1});
  const WishartModel m(Multiplier(p, l), random_point(p, rng));
  const auto at = [&](const char* s) { return static_cast<Eigen::Index>(p->index_of(s)); };
  const double e1 = l(at("1")) - 1.5, e2 = l(at("2")) - 2.0, e3 = l(at("3")) - 2.0, e4 = l(at("4")) - 1.5;
  double expected = -1.5 * std::log(std::numbers::pi) - std::lgamma(l(at("1"))) - std::lgamma(l(at("2"))) -
                    std::lgamma(l(at("3")) - 1.0) - std::lgamma(l(at("4")) - 0.5);
  for (Eigen::Index i = 0; i < 4; ++i)
    expected += l(i) * std::log(l(i)) - l(i) * std::log(m.sigma().generalized_power(static_cast<Index>(i)));
  EXPECT_NEAR(m.log_normalizer(), expected, 1e-12);
  for (int trial = 0; trial < 5; ++trial) {
    const ConePoint x = random_point(p, rng);
    const double powers = e1 * std::log(x.generalized_power(at("1"))) + e2 * std::log(x.generalized_power(at("2"))) +
                          e3 * std::log(x.generalized_power(at("3"))) + e4 * std::log(x.generalized_power(at("4")));
    const double tr = trace(multiply(m.sigma_neg_chi().matrix(), x.matrix()));
    EXPECT_NEAR(m.log_density(x), expected + powers - tr, 1e-10);
  }
}

TEST(Density, StandardLawMatchesFactorSpaceDensity) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const PosetPtr p = share(oracle::random_f_poset(1 + trial % 6, rng));
    const Multiplier chi(p, random_admissible(*p, rng));
    const WishartModel m = WishartModel::Standard(chi);
    std::vector<double> shape(p->size());
    for (Index i = 0; i < p->size(); ++i) shape[i] = chi.gamma_shape(i);
    for (int k = 0; k < 3; ++k) {
      const ConePoint x = random_point(p, rng);
      const double oracle_value = oracle::t_space_log_density(*p, x.lower_factor().dense(), shape);
      EXPECT_NEAR(m.log_density(x), oracle_value, 1e-9 * (1.0 + std::abs(oracle_value))) << "trial " << trial;
    }
  }
}

TEST(Density, GeneralScaleMatchesPushForward) {
  // X = pi(A) Y with Y standard and A = Z Lambda^{-1/2}, sigma = ZZ*; pi(A) has
  // Jacobian prod_i a_ii^{2 n_i}.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const PosetPtr p = share(oracle::random_f_poset(1 + trial % 6, rng));
    const Multiplier chi(p, random_admissible(*p, rng));
    const ConePoint sigma = random_point(p, rng);
    const WishartModel m(chi, sigma);
    Eigen::VectorXd inv_sqrt = chi.lambdas().cwiseSqrt().cwiseInverse();
    const StructuredMatrix a = multiply(sigma.lower_factor(), StructuredMatrix::Diagonal(p, inv_sqrt));
    const PosetDims d = dims(*p);
    std::vector<double> shape(p->size());
    double log_jacobian = 0.0;
    for (Index i = 0; i < p->size(); ++i) {
      shape[i] = chi.gamma_shape(i);
      log_jacobian += 2.0 * d.n_i[i] * std::log(a(i, i));
    }
    for (int k = 0; k < 3; ++k) {
      const ConePoint x = random_point(p, rng);
      const ConePoint y = pi_action(inverse_lower(a), x);
      const double expected = oracle::t_space_log_density(*p, y.lower_factor().dense(), shape) - log_jacobian;
      EXPECT_NEAR(m.log_density(x), expected, 1e-9 * (1.0 + std::abs(expected))) << "trial " << trial;
    }
  }
}

TEST(Density, TotalOrderIsClassicalWishart) {
  std::mt19937_64 rng(4);
  for (std::size_t n : {1u, 2u, 3u, 5u}) {
    const PosetPtr p = share(Poset::Chain(n));
    for (double lambda : {0.5 * n + 0.2, 0.5 * n + 3.0}) {
      const ConePoint sigma = random_point(p, rng);
      const WishartModel m(Multiplier::Constant(p, lambda), sigma);
      EXPECT_LT((m.sigma_neg_chi().matrix().dense() - lambda * sigma.matrix().dense().inverse()).cwiseAbs().maxCoeff(),
                1e-8 * lambda * sigma.matrix().dense().inverse().norm());
      for (int k = 0; k < 3; ++k) {
        const ConePoint x = random_point(p, rng);
        const double expected = oracle::classical_wishart_log_density(x.matrix().dense(), 2.0 * lambda,
                                                                      sigma.matrix().dense() / (2.0 * lambda));
        EXPECT_NEAR(m.log_density(x), expected, 1e-9 * (1.0 + std::abs(expected)));
      }
    }
  }
}

TEST(Density, RejectsForeignPoints) {
  const WishartModel m = WishartModel::Standard(Multiplier::Constant(example2(), 3.0));
  EXPECT_THROW(m.log_density(ConePoint::Identity(share(Poset::Chain(4)))), PosetMismatch);
  EXPECT_EQ(m.density(ConePoint::Identity(example2())), std::exp(m.log_density(ConePoint::Identity(example2()))));
}

TEST(Laplace, AtZeroAndOneElement) {
  std::mt19937_64 rng(5);
  const PosetPtr p = example2();
  const WishartModel m(Multiplier(p, vec({0.8, 1.7, 2.4, 1.1})), random_point(p, rng));
  EXPECT_NEAR(m.laplace_transform(StructuredMatrix(p)), 1.0, 1e-12);
  const PosetPtr one = share(Poset::Chain(1));
  for (double s : {0.5, 2.0})
    for (double t : {0.1, 1.0, 7.0}) {
      const double lambda = 1.7;
      const WishartModel g(Multiplier::Constant(one, lambda), ConePoint(StructuredMatrix::Diagonal(one, vec({s}))));
      EXPECT_NEAR(g.log_laplace_transform(StructuredMatrix::Diagonal(one, vec({t}))),
                  -lambda * std::log1p(s * t / lambda), 1e-12);
    }
  EXPECT_THROW(m.log_laplace_transform(StructuredMatrix::Identity(p) * -5.0), NotInDualCone);
}

TEST(Laplace, TotalOrderClosedForm) {
  // For the classical law, E exp(-tr(theta X)) = det(I + 2 Sigma theta)^{-nu/2}.
  std::mt19937_64 rng(6);
  const PosetPtr p = share(Poset::Chain(3));
  const double lambda = 2.3;
  const ConePoint sigma = random_point(p, rng);
  const WishartModel m(Multiplier::Constant(p, lambda), sigma);
  for (int k = 0; k < 5; ++k) {
    const DualPoint theta = DualPoint::FromFactor(random_lower_positive(p, rng));
    const Eigen::MatrixXd big_sigma = sigma.matrix().dense() / (2.0 * lambda);
    const double expected =
        -lambda * std::log((Eigen::MatrixXd::Identity(3, 3) + 2.0 * big_sigma * theta.matrix().dense()).determinant());
    EXPECT_NEAR(m.log_laplace_transform(theta.matrix()), expected, 1e-9 * (1.0 + std::abs(expected)));
  }
}

TEST(Laplace, MatchesMonteCarloOnFourElement) {
  const PosetPtr p = example2();
  std::mt19937_64 rng(7);
  const WishartModel m(Multiplier(p, vec({0.8, 1.7, 2.4, 1.1})), random_point(p, rng));
  for (int k = 0; k < 5; ++k) {
    const StructuredMatrix theta = DualPoint::FromFactor(random_lower_positive(p, rng) * 0.6).matrix();
    const McMean mc = mc_laplace(m, theta, 100000, 100 + k);
    EXPECT_LT(std::abs(mc.mean - m.laplace_transform(theta)), 3.0 * mc.se) << "theta " << k;
  }
}

TEST(Laplace, StandardLawOnStarMatchesMonteCarlo) {
  const PosetPtr p = share(Poset::Star(4));
  std::mt19937_64 rng(8);
  const Multiplier chi(p, vec({1.2, 0.9, 2.0, 3.1}));
  const WishartModel m = WishartModel::Standard(chi);
  for (int k = 0; k < 3; ++k) {
    const StructuredMatrix theta = DualPoint::FromFactor(random_lower_positive(p, rng) * 0.5).matrix();
    std::vector<double> v(100000);
    for (std::size_t d = 0; d < v.size(); ++d) {
      Rng r(200 + k, d);
      v[d] = std::exp(-trace(multiply(theta, sample_standard(chi, r).matrix())));
    }
    EXPECT_LT(std::abs(stats::mean(v) - m.laplace_transform(theta)), 3.0 * stats::standard_error(v));
  }
}

TEST(Laplace, SumOfIndependentDrawsMultiplies) {
  const PosetPtr p = example2();
  std::mt19937_64 rng(9);
  const WishartModel a(Multiplier(p, vec({0.8, 1.7, 2.4, 1.1})), random_point(p, rng));
  const WishartModel b(Multiplier(p, vec({2.0, 0.6, 1.5, 0.9})), random_point(p, rng));
  const StructuredMatrix theta = DualPoint::FromFactor(random_lower_positive(p, rng) * 0.6).matrix();
  std::vector<double> v(100000);
  for (std::size_t d = 0; d < v.size(); ++d) {
    Rng ra(300, d), rb(301, d);
    v[d] = std::exp(-trace(multiply(theta, a.sample(ra).matrix() + b.sample(rb).matrix())));
  }
  EXPECT_LT(std::abs(stats::mean(v) - a.laplace_transform(theta) * b.laplace_transform(theta)),
            3.0 * stats::standard_error(v));
}

TEST(Density, ImportanceWeightsIntegrateToOne) {
  std::mt19937_64 rng(10);
  for (const PosetPtr& p : {example2(), share(Poset::Star(3)), share(Poset::Chain(2))}) {
    const Multiplier chi(p, random_admissible(*p, rng) + Eigen::VectorXd::Constant(p->size(), 1.0));
    const ConePoint s1 = random_point(p, rng);
    // A nearby scale keeps the weights' variance finite.
    const ConePoint s2 = pi_action(StructuredMatrix::Identity(p) * 1.05 + random_lower(p, rng) * 0.05, s1);
    const WishartModel target(chi, s1), proposal(chi, s2);
    std::vector<double> w(50000);
    for (std::size_t d = 0; d < w.size(); ++d) {
      Rng r(400, d);
      const ConePoint x = proposal.sample(r);
      w[d] = std::exp(target.log_density(x) - proposal.log_density(x));
    }
    EXPECT_LT(std::abs(stats::mean(w) - 1.0), 3.0 * stats::standard_error(w));
  }
}

TEST(Sampler, OneElementMean) {
  const Multiplier chi = Multiplier::Constant(share(Poset::Chain(1)), 2.0);
  std::vector<double> x(20000);
  for (std::size_t d = 0; d < x.size(); ++d) {
    Rng r(1, d);
    x[d] = sample_standard(chi, r).matrix()(0, 0);
  }
  EXPECT_LT(std::abs(stats::mean(x) - 2.0), 3.0 * stats::standard_error(x));
}

TEST(Sampler, TwoChainGeneralizedPowerMeans) {
  const Multiplier chi = Multiplier::Constant(share(Poset::Chain(2)), 2.0);
  std::vector<double> a(20000), b(20000);
  for (std::size_t d = 0; d < a.size(); ++d) {
    Rng r(2, d);
    const ConePoint x = sample_standard(chi, r);
    a[d] = x.generalized_power(0);
    b[d] = x.generalized_power(1);
  }
  EXPECT_LT(std::abs(stats::mean(a) - 2.0), 3.0 * stats::standard_error(a));
  EXPECT_LT(std::abs(stats::mean(b) - 1.5), 3.0 * stats::standard_error(b));
}

TEST(Sampler, StandardFactorMarginals) {
  const PosetPtr p = example2();
  const Multiplier chi(p, vec({0.8, 1.7, 2.4, 1.1}));
  const std::size_t n = 10000;
  std::vector<std::vector<double>> cols(16);
  for (std::size_t d = 0; d < n; ++d) {
    Rng r(3, d);
    const StructuredMatrix t = sample_standard_factor(chi, r);
    EXPECT_TRUE(t.is_lower_triangular());
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j <= i; ++j)
        if (p->leq(j, i)) cols[i * 4 + j].push_back(i == j ? t(i, i) * t(i, i) : t(i, j));
  }
  std::size_t tests = 0;
  for (const auto& c : cols) tests += c.empty() ? 0 : 1;
  EXPECT_EQ(tests, 7u);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j <= i; ++j) {
      const auto& c = cols[i * 4 + j];
      if (c.empty()) continue;
      const double shape = chi.gamma_shape(i);
      const stats::KsResult ks =
          i == j ? stats::ks_one_sample(c, [&](double x) { return stats::gamma_cdf(shape, x); })
                 : stats::ks_one_sample(c, [](double x) { return stats::normal_cdf(x, 0.5); });
      EXPECT_GT(ks.p_value, 0.01 / static_cast<double>(tests)) << "entry " << i << "," << j;
    }
}

TEST(Sampler, TotalOrderMatchesBartlett) {
  const PosetPtr p = share(Poset::Chain(3));
  std::mt19937_64 rng(11);
  const double lambda = 2.2;
  const ConePoint sigma = random_point(p, rng);
  const WishartModel m(Multiplier::Constant(p, lambda), sigma);
  const Eigen::MatrixXd big_sigma = sigma.matrix().dense() / (2.0 * lambda);
  const std::size_t n = 20000;
  std::vector<std::vector<double>> ours(6), classical(6);
  std::mt19937_64 bart(12);
  for (std::size_t d = 0; d < n; ++d) {
    Rng r(4, d);
    const Eigen::MatrixXd x = m.sample(r).matrix().dense();
    const Eigen::MatrixXd y = oracle::bartlett_sample(2.0 * lambda, big_sigma, bart);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j <= i; ++j, ++k) {
        ours[k].push_back(x(i, j));
        classical[k].push_back(y(i, j));
      }
  }
  for (std::size_t k = 0; k < 6; ++k)
    EXPECT_GT(stats::ks_two_sample(ours[k], classical[k]).p_value, 0.01 / 6.0) << "entry " << k;
}

TEST(Standardize, MapsSigmaToEChiAndInvertsSampling) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const PosetPtr p = share(oracle::random_f_poset(1 + trial % 6, rng));
    const Multiplier chi(p, random_admissible(*p, rng));
    const WishartModel m(chi, random_point(p, rng));
    EXPECT_LT((m.standardize(m.sigma()).matrix() - e_chi(chi).matrix()).max_abs(), 1e-10 * chi.lambdas().maxCoeff());
    Rng a(5, trial), b(5, trial);
    const ConePoint standard = sample_standard(chi, a);
    const ConePoint drawn = m.sample(b);
    EXPECT_LT((m.standardize(drawn).matrix() - standard.matrix()).max_abs(), 1e-9 * standard.matrix().max_abs());
    const WishartModel s = WishartModel::Standard(chi);
    const ConePoint x = random_point(p, rng);
    EXPECT_LT((s.standardize(x).matrix() - x.matrix()).max_abs(), 1e-12 * x.matrix().max_abs());
  }
}

TEST(Standardize, LaplaceTransformsAgreeThroughAdjoint) {
  // L_sigma(theta) = L_standard(rho^{-1*} theta), rho^{-1} = pi(Z Lambda^{-1/2}).
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const PosetPtr p = share(oracle::random_f_poset(1 + trial % 6, rng));
    const Multiplier chi(p, random_admissible(*p, rng));
    const WishartModel m(chi, random_point(p, rng));
    const WishartModel s = WishartModel::Standard(chi);
    const StructuredMatrix theta = DualPoint::FromFactor(random_lower_positive(p, rng)).matrix();
    const StructuredMatrix pulled = m.standardizer().inverse().adjoint(theta);
    EXPECT_NEAR(m.log_laplace_transform(theta), s.log_laplace_transform(pulled), 1e-9);
  }
}
