#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conewish {

using Index = std::size_t;

/// Finite poset in Hasse form.
///
/// Elements carry string labels and are stored at dense indices that follow a
/// fixed linear extension (topological order, ties broken by natural label
/// order, so "2" < "10"). With this layout every lower-triangular element of
/// the algebra is an ordinary lower-triangular matrix.
///
/// Instances are immutable after construction and safe to share.
class Poset {
 public:
  /// Builds a poset from cover (or any generating) edges (a, b) meaning a < b.
  /// Redundant edges are removed by transitive reduction.
  /// Throws DuplicateLabel, UnknownLabel, CycleError.
  static Poset FromCoverEdges(std::vector<std::string> labels,
                              const std::vector<std::pair<std::string, std::string>>& edges);

  /// Convenience: labels "1".."n", edges given as 1-based integers.
  static Poset FromIntegerEdges(std::size_t n, const std::vector<std::pair<int, int>>& edges);

  static Poset Chain(std::size_t n);
  static Poset Antichain(std::size_t n);
  /// 1 < i for i = 2..k.
  static Poset Star(std::size_t k);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(Index i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Index> find(const std::string& label) const;
  /// Like find() but throws UnknownLabel.
  Index index_of(const std::string& label) const;

  /// Strict order i < j.
  bool less(Index i, Index j) const { return less_[i * size() + j] != 0; }
  bool leq(Index i, Index j) const { return i == j || less(i, j); }
  bool comparable(Index i, Index j) const { return leq(i, j) || less(j, i); }
  /// i is covered by j.
  bool covers(Index i, Index j) const;

  /// Upper covers of i, ascending index.
  const std::vector<Index>& children(Index i) const { return children_[i]; }
  /// Lower covers of i, ascending index.
  const std::vector<Index>& parents(Index i) const { return parents_[i]; }
  /// Cover edges (lower, upper) in index order.
  std::vector<std::pair<Index, Index>> cover_edges() const;

  /// I_{<= i}, ascending.
  std::vector<Index> down_set(Index i) const;
  /// I_{< i}, ascending.
  std::vector<Index> strict_down_set(Index i) const;
  /// I_{i <=}, ascending.
  std::vector<Index> up_set(Index i) const;
  std::vector<Index> strict_up_set(Index i) const;

  std::vector<Index> minimal_elements() const;
  std::vector<Index> maximal_elements() const;

  /// Elements with no predecessor and at least two upper covers.
  std::vector<Index> sources() const;
  /// Elements (minimal or not) with at least two upper covers.
  std::vector<Index> branching_elements() const;

  bool is_total_order() const;
  /// Number of pairs (i, j) with i < j.
  std::size_t comparable_pair_count() const;

  /// Reversed order on the same labels.
  Poset opposite() const;
  /// Sub-poset induced on the given elements (indices into this poset).
  Poset induced(const std::vector<Index>& elements) const;

  /// Stable 64-bit FNV-1a hash of the canonical (labels, covers) form, hex.
  std::string content_hash() const;

  bool operator==(const Poset& other) const;
  bool operator!=(const Poset& other) const { return !(*this == other); }

 private:
  Poset() = default;
  static Poset Build(std::vector<std::string> labels, const std::vector<std::pair<Index, Index>>& edges);

  std::vector<std::string> labels_;
  std::vector<char> less_;
  std::vector<std::vector<Index>> children_;
  std::vector<std::vector<Index>> parents_;
};

using PosetPtr = std::shared_ptr<const Poset>;

inline PosetPtr share(Poset p) { return std::make_shared<const Poset>(std::move(p)); }

/// Natural ordering on labels: numeric labels compare by value and sort before
/// non-numeric ones; everything else compares lexicographically.
bool label_less(const std::string& a, const std::string& b);

/// Two distinct saturated chains between a comparable pair.
struct ConditionFWitness {
  Index lower;
  Index upper;
  std::vector<Index> first_path;
  std::vector<Index> second_path;
};

/// Returns nullopt iff every comparable pair is joined by exactly one Hasse
/// path; otherwise the first offending pair in index order with two paths.
std::optional<ConditionFWitness> check_condition_f(const Poset& p);

/// Throws ConditionFViolation naming the witness pair and both paths.
void require_condition_f(const Poset& p);

/// "a < b < c" along the given indices.
std::string format_path(const Poset& p, const std::vector<Index>& path);

/// Separator bookkeeping for the component decomposition.
struct Separators {
  /// Every j lying above two incomparable elements.
  std::vector<Index> separators;
  /// S_i: minimal separators in I_{i<=}, per element.
  std::vector<std::vector<Index>> per_element;
  /// Union of all S_i.
  std::vector<Index> union_of_minimal;
  /// S: minimal elements of the union.
  std::vector<Index> minimal;
};

Separators separators(const Poset& p);

struct PosetDims {
  /// n_{.i}: strict successors of i.
  std::vector<int> n_dot_i;
  /// n_{i.}: strict predecessors of i.
  std::vector<int> n_i_dot;
  /// n_i = 1 + (n_{i.} + n_{.i}) / 2.
  std::vector<double> n_i;
  double n_dotdot = 0.0;
};

PosetDims dims(const Poset& p);

}  // namespace conewish
