#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "conewish/wishart.hpp"

namespace conewish {

/// One statistic checked against a bound. `relation` is "<" or ">=".
struct Metric {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  std::string relation = "<";
  bool passed = true;
};

struct TestReport {
  std::string name;
  std::string poset_hash;
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  double level = 0.01;
  /// Negative controls pass when the departure from the null is detected.
  bool negative_control = false;
  bool vacuous = false;
  bool skipped = false;
  std::string detail;
  std::vector<Metric> metrics;
  bool passed = false;
};

nlohmann::json to_json(const TestReport& r);
std::string summary_line(const TestReport& r);

struct CharacterizeConfig {
  std::size_t draws = 10000;
  std::uint64_t seed = 1;
  double level = 0.01;
  /// Draws entering the distance-correlation permutation test.
  std::size_t dcor_subsample = 1000;
  std::size_t permutations = 200;
  /// Orthogonal conjugations per quotient-invariance run.
  std::size_t conjugations = 10;
  /// Draws on which component blocks are resampled.
  std::size_t resample_draws = 200;
};

/// Max pairwise |corr| among the entries t_jk of the factor of standard draws
/// against 4/sqrt(n), plus KS tests of every marginal (t_ii^2 against
/// Gamma(lambda_i - n_{i.}/2, 1), t_jk against Normal(0, 1/2)), Bonferroni
/// corrected over entries.
TestReport test_entry_independence(const Multiplier& chi, const CharacterizeConfig& cfg);

/// Pair (j, k), j != k, maximizing the correlation of (t_jk, t_kk) implied by
/// cov = z_jk z_kk var(s_kk) under HW_{chi, sigma}.
struct PredictedPair {
  Index j = 0;
  Index k = 0;
  double covariance = 0.0;
  double correlation = 0.0;
};
std::optional<PredictedPair> predicted_correlated_pair(const Multiplier& chi, const ConePoint& sigma);

/// Negative control: factors draws from HW_{chi, sigma} and checks that the
/// predicted pair is correlated with the predicted sign at the configured level.
TestReport test_entry_dependence_control(const Multiplier& chi, const ConePoint& sigma, const CharacterizeConfig& cfg);

/// Empty when test_quotient_invariance can run at i; otherwise the reason.
std::optional<std::string> quotient_invariance_unsupported(const Poset& p, Index i);

/// Whether the restricted laws of X and Y on I_{i<=} are orthogonally
/// invariant standard laws (constant effective multiplier on the chain).
bool quotient_invariance_expected(const Multiplier& chi, const Multiplier& chi_prime, Index i);

/// V = (g(X+Y) X)_{i<=} for X ~ HW_{chi, e^chi} and Y ~ HW_{chi', e^chi'} (or
/// HW_{chi', y_sigma} for the negative control). Compares summaries of V from
/// even draws with those of QVQ* from odd draws for Haar-random Q, by
/// two-sample KS with a Bonferroni correction. Throws UnsupportedSubcone when
/// I_{i<=} is not a chain with linear restriction.
TestReport test_quotient_invariance(const Multiplier& chi, const Multiplier& chi_prime, Index i,
                                    const CharacterizeConfig& cfg,
                                    const std::optional<ConePoint>& y_sigma = std::nullopt);

/// U = X + Y against V = g(U)(X) (or V = X for the negative control) through
/// cross-feature correlations and a distance-correlation permutation test.
TestReport test_uv_independence(const Multiplier& chi, const Multiplier& chi_prime, const CharacterizeConfig& cfg,
                                bool control_unquotiented = false);

/// Component X_i must depend only on its entry block tau_i, and features of
/// distinct components must be uncorrelated. The negative control uses the
/// unsubtracted Z_{i<=} for minimal i.
TestReport test_component_consistency(const Multiplier& chi, const CharacterizeConfig& cfg,
                                      bool control_unsubtracted = false);

/// Runs a named suite. "standard": every test above on chi's poset, the
/// classical chain cases for quotient invariance, and all negative controls.
std::vector<TestReport> run_suite(const std::string& suite, const Multiplier& chi, const Multiplier& chi_prime,
                                  const CharacterizeConfig& cfg);

bool all_passed(const std::vector<TestReport>& reports);

}  // namespace conewish
