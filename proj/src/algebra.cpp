#include "conewish/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "conewish/error.hpp"

namespace conewish {

bool in_mask(const Poset& p, Index i, Index j) { return i == j || p.comparable(i, j); }

bool same_poset(const PosetPtr& a, const PosetPtr& b) { return a == b || (a && b && *a == *b); }

namespace {

std::string entry_name(const Poset& p, Index i, Index j) { return p.label(i) + "," + p.label(j); }

void check_mask(const Poset& p, const Eigen::MatrixXd& m) {
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = 0; j < p.size(); ++j)
      if (m(i, j) != 0.0 && !in_mask(p, i, j)) throw StructuralZeroViolation(i, j, entry_name(p, i, j));
}

void project_in_place(const Poset& p, Eigen::MatrixXd& m) {
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = 0; j < p.size(); ++j)
      if (!in_mask(p, i, j)) m(i, j) = 0.0;
}

double rel_residual(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, std::pair<Index, Index>* at) {
  const double scale = std::max({1.0, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
  Eigen::Index r = 0, c = 0;
  const double worst = (lhs - rhs).cwiseAbs().maxCoeff(&r, &c);
  if (at) *at = {static_cast<Index>(r), static_cast<Index>(c)};
  return worst / scale;
}

}  // namespace

StructuredMatrix::StructuredMatrix(PosetPtr poset)
    : poset_(std::move(poset)),
      entries_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(poset_->size()),
                                     static_cast<Eigen::Index>(poset_->size()))) {}

StructuredMatrix::StructuredMatrix(PosetPtr poset, Eigen::MatrixXd dense)
    : poset_(std::move(poset)), entries_(std::move(dense)) {
  if (entries_.rows() != static_cast<Eigen::Index>(poset_->size()) || entries_.cols() != entries_.rows())
    throw Error("matrix shape does not match poset size");
  check_mask(*poset_, entries_);
}

StructuredMatrix StructuredMatrix::Identity(PosetPtr poset) {
  StructuredMatrix m(std::move(poset));
  m.entries_.setIdentity();
  return m;
}

StructuredMatrix StructuredMatrix::Diagonal(PosetPtr poset, const Eigen::VectorXd& diag) {
  StructuredMatrix m(std::move(poset));
  if (diag.size() != m.entries_.rows()) throw Error("diagonal length does not match poset size");
  m.entries_.diagonal() = diag;
  return m;
}

StructuredMatrix StructuredMatrix::Project(PosetPtr poset, Eigen::MatrixXd dense) {
  project_in_place(*poset, dense);
  return StructuredMatrix(std::move(poset), std::move(dense));
}

void StructuredMatrix::set(Index i, Index j, double value) {
  if (value != 0.0 && !in_mask(*poset_, i, j)) throw StructuralZeroViolation(i, j, entry_name(*poset_, i, j));
  entries_(i, j) = value;
}

bool StructuredMatrix::is_lower_triangular() const {
  for (Index i = 0; i < size(); ++i)
    for (Index j = 0; j < size(); ++j)
      if (entries_(i, j) != 0.0 && !poset_->leq(j, i)) return false;
  return true;
}

bool StructuredMatrix::is_upper_triangular() const {
  for (Index i = 0; i < size(); ++i)
    for (Index j = 0; j < size(); ++j)
      if (entries_(i, j) != 0.0 && !poset_->leq(i, j)) return false;
  return true;
}

bool StructuredMatrix::is_diagonal() const {
  for (Index i = 0; i < size(); ++i)
    for (Index j = 0; j < size(); ++j)
      if (i != j && entries_(i, j) != 0.0) return false;
  return true;
}

bool StructuredMatrix::is_hermitian(double tol) const {
  const double scale = std::max(1.0, max_abs());
  return (entries_ - entries_.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

StructuredMatrix StructuredMatrix::operator+(const StructuredMatrix& other) const {
  if (!same_poset(poset_, other.poset_)) throw PosetMismatch();
  StructuredMatrix out(poset_);
  out.entries_ = entries_ + other.entries_;
  return out;
}

StructuredMatrix StructuredMatrix::operator-(const StructuredMatrix& other) const {
  if (!same_poset(poset_, other.poset_)) throw PosetMismatch();
  StructuredMatrix out(poset_);
  out.entries_ = entries_ - other.entries_;
  return out;
}

StructuredMatrix StructuredMatrix::operator*(double s) const {
  StructuredMatrix out(poset_);
  out.entries_ = entries_ * s;
  return out;
}

StructuredMatrix multiply(const StructuredMatrix& a, const StructuredMatrix& b) {
  if (!same_poset(a.poset(), b.poset())) throw PosetMismatch();
  Eigen::MatrixXd c = a.dense() * b.dense();
  project_in_place(*a.poset(), c);
  return StructuredMatrix(a.poset(), std::move(c));
}

StructuredMatrix involution(const StructuredMatrix& a) {
  return StructuredMatrix(a.poset(), a.dense().transpose());
}

double trace(const StructuredMatrix& a) { return a.dense().trace(); }

Eigen::MatrixXd standard_product(const StructuredMatrix& a, const StructuredMatrix& b) {
  if (!same_poset(a.poset(), b.poset())) throw PosetMismatch();
  return a.dense() * b.dense();
}

StructuredMatrix random_element(PosetPtr poset, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  StructuredMatrix m(poset);
  for (Index i = 0; i < poset->size(); ++i)
    for (Index j = 0; j < poset->size(); ++j)
      if (in_mask(*poset, i, j)) m.set(i, j, normal(rng));
  return m;
}

StructuredMatrix random_lower(PosetPtr poset, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  StructuredMatrix m(poset);
  for (Index i = 0; i < poset->size(); ++i)
    for (Index j = 0; j <= i; ++j)
      if (poset->leq(j, i)) m.set(i, j, normal(rng));
  return m;
}

StructuredMatrix random_lower_positive(PosetPtr poset, std::mt19937_64& rng) {
  StructuredMatrix m = random_lower(poset, rng);
  std::uniform_real_distribution<double> diag(0.5, 2.0);
  for (Index i = 0; i < poset->size(); ++i) m.set(i, i, diag(rng));
  return m;
}

bool AxiomReport::all_passed() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomCheck& a) { return a.passed; });
}

StructuredMatrix axiom_vi_residual(const StructuredMatrix& t, const StructuredMatrix& u) {
  const StructuredMatrix us = involution(u);
  return multiply(t, multiply(u, us)) - multiply(multiply(t, u), us);
}

AxiomReport verify_axioms(const PosetPtr& poset, std::size_t trials, std::uint64_t seed, double tolerance) {
  AxiomReport report;
  report.trials = trials;
  report.seed = seed;
  report.tolerance = tolerance;
  std::mt19937_64 rng(seed);

  auto record = [&](int axiom, std::size_t trial, double residual, std::pair<Index, Index> at, bool ok) {
    AxiomCheck& c = report.axioms[axiom];
    c.max_residual = std::max(c.max_residual, residual);
    if (!ok && c.passed) {
      c.failing_trial = trial;
      c.witness_entry = at;
    }
    c.passed = c.passed && ok;
  };

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const StructuredMatrix a = random_element(poset, rng);
    const StructuredMatrix b = random_element(poset, rng);
    const StructuredMatrix c = random_element(poset, rng);
    const StructuredMatrix s = random_lower(poset, rng);
    const StructuredMatrix t = random_lower(poset, rng);
    const StructuredMatrix u = random_lower(poset, rng);
    std::pair<Index, Index> at{0, 0};

    // i) tr(AA*) > 0 for A != 0; it also equals the squared Frobenius norm.
    {
      const double tr = trace(multiply(a, involution(a)));
      const double fro = a.dense().squaredNorm();
      const double res = std::abs(tr - fro) / std::max(1.0, fro);
      record(0, trial, res, at, (fro == 0.0 || tr > 0.0) && res <= tolerance);
    }
    // ii) (AB)* = B*A*
    {
      const double res = rel_residual(involution(multiply(a, b)).dense(),
                                      multiply(involution(b), involution(a)).dense(), &at);
      record(1, trial, res, at, res <= tolerance);
    }
    // iii) tr(AB) = tr(BA)
    {
      const double x = trace(multiply(a, b));
      const double y = trace(multiply(b, a));
      const double res = std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
      record(2, trial, res, at, res <= tolerance);
    }
    // iv) tr(A(BC)) = tr((AB)C)
    {
      const double x = trace(multiply(a, multiply(b, c)));
      const double y = trace(multiply(multiply(a, b), c));
      const double res = std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
      record(3, trial, res, at, res <= tolerance);
    }
    // v) (ST)U = S(TU) on T_l
    {
      const double res =
          rel_residual(multiply(multiply(s, t), u).dense(), multiply(s, multiply(t, u)).dense(), &at);
      record(4, trial, res, at, res <= tolerance);
    }
    // vi) T(UU*) = (TU)U* on T_l
    {
      const StructuredMatrix us = involution(u);
      const double res =
          rel_residual(multiply(t, multiply(u, us)).dense(), multiply(multiply(t, u), us).dense(), &at);
      record(5, trial, res, at, res <= tolerance);
    }
  }
  return report;
}

bool is_standard_mult_equivalent(const Poset& p) { return p.branching_elements().empty(); }

std::size_t standard_product_mismatches(const PosetPtr& poset, std::size_t trials, std::uint64_t seed,
                                        double tol) {
  std::mt19937_64 rng(seed);
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    const StructuredMatrix t = random_lower_positive(poset, rng);
    const StructuredMatrix ts = involution(t);
    const Eigen::MatrixXd vinberg = multiply(t, ts).dense();
    const Eigen::MatrixXd standard = standard_product(t, ts);
    if ((vinberg - standard).cwiseAbs().maxCoeff() > tol) ++mismatches;
  }
  return mismatches;
}

}  // namespace conewish
