#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace conewish::stats {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Q_KS(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2), the Kolmogorov tail.
double kolmogorov_tail(double x);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF, with the
/// Stephens finite-sample correction on the asymptotic p-value.
KsResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// CDF of Gamma(shape, rate 1).
double gamma_cdf(double shape, double x);
/// CDF of Normal(0, variance).
double normal_cdf(double x, double variance);

double mean(const std::vector<double>& x);
/// Standard error of the mean.
double standard_error(const std::vector<double>& x);

/// Pearson correlation; 0 if either column is constant.
double pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

/// Correlation matrix of the columns of `x` (rows are observations).
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& x);

/// Two-sided p-value for a sample correlation r over n observations
/// (Student t with n - 2 degrees of freedom, normal approximation for large n).
double correlation_p_value(double r, std::size_t n);

/// Squared sample distance correlation between row-aligned samples.
double distance_correlation(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

struct PermutationResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t permutations = 0;
};

/// Permutation test of independence with the distance correlation statistic.
/// p = (1 + #{perm stat >= observed}) / (1 + permutations).
PermutationResult distance_correlation_test(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                            std::size_t permutations, std::uint64_t seed);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, sign-fixed).
Eigen::MatrixXd haar_orthogonal(Eigen::Index n, std::uint64_t seed, std::uint64_t stream);

}  // namespace conewish::stats
