#include "conewish/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "conewish/random.hpp"

namespace conewish::stats {

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series converges slowly; tail is 1 to double precision
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double corrected_p(double d, double effective_n) {
  const double rn = std::sqrt(effective_n);
  return kolmogorov_tail((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf) {
  if (data.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(data.begin(), data.end());
  const double n = static_cast<double>(data.size());
  double d = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double f = cdf(data[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, corrected_p(d, n)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return {d, corrected_p(d, na * nb / (na + nb))};
}

double gamma_cdf(double shape, double x) { return x <= 0.0 ? 0.0 : boost::math::gamma_p(shape, x); }

double normal_cdf(double x, double variance) { return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance)); }

double mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double standard_error(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

double pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  const double den = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
  return den > 0.0 ? ca.dot(cb) / den : 0.0;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  Eigen::VectorXd norms = c.colwise().norm();
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    if (norms(j) > 0.0) c.col(j) /= norms(j);
  return c.transpose() * c;
}

double correlation_p_value(double r, std::size_t n) {
  if (n < 3) return 1.0;
  const double df = static_cast<double>(n - 2);
  const double r2 = std::min(r * r, 1.0 - 1e-16);
  const double t = std::sqrt(df * r2 / (1.0 - r2));
  // Two-sided Student t tail through the regularized incomplete beta.
  return boost::math::ibeta(df / 2.0, 0.5, df / (df + t * t));
}

namespace {

Eigen::MatrixXd centered_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (x.row(i) - x.row(j)).norm();
  }
  const Eigen::VectorXd row_mean = d.rowwise().mean();
  const double grand = row_mean.mean();
  d.colwise() -= row_mean;
  d.rowwise() -= row_mean.transpose();
  d.array() += grand;
  return d;
}

double dcor_from_centered(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::vector<Eigen::Index>& perm,
                          double va, double vb) {
  double vab = 0.0;
  const auto n = static_cast<Eigen::Index>(perm.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) vab += a(i, j) * b(perm[i], perm[j]);
  const double den = std::sqrt(va * vb);
  return den > 0.0 ? vab / den : 0.0;
}

}  // namespace

double distance_correlation(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows()) throw std::invalid_argument("distance_correlation: row mismatch");
  const Eigen::MatrixXd a = centered_distances(x);
  const Eigen::MatrixXd b = centered_distances(y);
  std::vector<Eigen::Index> id(static_cast<std::size_t>(x.rows()));
  std::iota(id.begin(), id.end(), 0);
  return dcor_from_centered(a, b, id, a.squaredNorm(), b.squaredNorm());
}

PermutationResult distance_correlation_test(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                            std::size_t permutations, std::uint64_t seed) {
  if (x.rows() != y.rows()) throw std::invalid_argument("distance_correlation_test: row mismatch");
  const Eigen::MatrixXd a = centered_distances(x);
  const Eigen::MatrixXd b = centered_distances(y);
  const double va = a.squaredNorm();
  const double vb = b.squaredNorm();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(x.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  PermutationResult r;
  r.statistic = dcor_from_centered(a, b, perm, va, vb);
  r.permutations = permutations;
  Rng rng(seed, 0);
  std::size_t exceed = 0;
  for (std::size_t k = 0; k < permutations; ++k) {
    std::shuffle(perm.begin(), perm.end(), rng);
    if (dcor_from_centered(a, b, perm, va, vb) >= r.statistic) ++exceed;
  }
  r.p_value = (1.0 + static_cast<double>(exceed)) / (1.0 + static_cast<double>(permutations));
  return r;
}

Eigen::MatrixXd haar_orthogonal(Eigen::Index n, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

}  // namespace conewish::stats
