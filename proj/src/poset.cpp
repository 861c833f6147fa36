#include "conewish/poset.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>

#include "conewish/error.hpp"

namespace conewish {

namespace {

bool is_numeric(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string strip_leading_zeros(const std::string& s) {
  auto pos = s.find_first_not_of('0');
  return pos == std::string::npos ? "0" : s.substr(pos);
}

}  // namespace

bool label_less(const std::string& a, const std::string& b) {
  const bool na = is_numeric(a);
  const bool nb = is_numeric(b);
  if (na != nb) return na;
  if (na) {
    const std::string sa = strip_leading_zeros(a);
    const std::string sb = strip_leading_zeros(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

Poset Poset::Build(std::vector<std::string> labels, const std::vector<std::pair<Index, Index>>& edges) {
  const std::size_t n = labels.size();
  std::vector<char> reach(n * n, 0);
  for (auto [a, b] : edges) {
    if (a == b) throw CycleError("self-loop at '" + labels[a] + "'");
    reach[a * n + b] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k * n + j]) reach[i * n + j] = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (reach[i * n + i]) throw CycleError("order relation has a cycle through '" + labels[i] + "'");

  // Kahn's algorithm; the ready set is ordered by natural label order.
  auto by_label = [&labels](std::size_t a, std::size_t b) { return label_less(labels[a], labels[b]); };
  std::vector<int> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i * n + j]) ++indegree[j];
  std::set<std::size_t, decltype(by_label)> ready(by_label);
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.insert(i);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (std::size_t j = 0; j < n; ++j)
      if (reach[v * n + j] && --indegree[j] == 0) ready.insert(j);
  }

  Poset p;
  p.labels_.resize(n);
  p.less_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) p.labels_[a] = std::move(labels[order[a]]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) p.less_[a * n + b] = reach[order[a] * n + order[b]];

  p.children_.assign(n, {});
  p.parents_.assign(n, {});
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (p.covers(i, j)) {
        p.children_[i].push_back(j);
        p.parents_[j].push_back(i);
      }
  return p;
}

Poset Poset::FromCoverEdges(std::vector<std::string> labels,
                            const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, Index> lookup;
  for (Index i = 0; i < labels.size(); ++i)
    if (!lookup.emplace(labels[i], i).second) throw DuplicateLabel(labels[i]);
  std::vector<std::pair<Index, Index>> idx;
  idx.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    auto ia = lookup.find(a);
    if (ia == lookup.end()) throw UnknownLabel(a);
    auto ib = lookup.find(b);
    if (ib == lookup.end()) throw UnknownLabel(b);
    idx.emplace_back(ia->second, ib->second);
  }
  return Build(std::move(labels), idx);
}

Poset Poset::FromIntegerEdges(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  std::vector<std::pair<std::string, std::string>> e;
  for (auto [a, b] : edges) e.emplace_back(std::to_string(a), std::to_string(b));
  return FromCoverEdges(std::move(labels), e);
}

Poset Poset::Chain(std::size_t n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < static_cast<int>(n); ++i) e.emplace_back(i, i + 1);
  return FromIntegerEdges(n, e);
}

Poset Poset::Antichain(std::size_t n) { return FromIntegerEdges(n, {}); }

Poset Poset::Star(std::size_t k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 2; i <= static_cast<int>(k); ++i) e.emplace_back(1, i);
  return FromIntegerEdges(k, e);
}

std::optional<Index> Poset::find(const std::string& label) const {
  for (Index i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

Index Poset::index_of(const std::string& label) const {
  auto i = find(label);
  if (!i) throw UnknownLabel(label);
  return *i;
}

bool Poset::covers(Index i, Index j) const {
  if (!less(i, j)) return false;
  for (Index k = 0; k < size(); ++k)
    if (less(i, k) && less(k, j)) return false;
  return true;
}

std::vector<std::pair<Index, Index>> Poset::cover_edges() const {
  std::vector<std::pair<Index, Index>> out;
  for (Index i = 0; i < size(); ++i)
    for (Index j : children_[i]) out.emplace_back(i, j);
  return out;
}

std::vector<Index> Poset::down_set(Index i) const {
  std::vector<Index> out;
  for (Index k = 0; k < size(); ++k)
    if (leq(k, i)) out.push_back(k);
  return out;
}

std::vector<Index> Poset::strict_down_set(Index i) const {
  std::vector<Index> out;
  for (Index k = 0; k < size(); ++k)
    if (less(k, i)) out.push_back(k);
  return out;
}

std::vector<Index> Poset::up_set(Index i) const {
  std::vector<Index> out;
  for (Index k = 0; k < size(); ++k)
    if (leq(i, k)) out.push_back(k);
  return out;
}

std::vector<Index> Poset::strict_up_set(Index i) const {
  std::vector<Index> out;
  for (Index k = 0; k < size(); ++k)
    if (less(i, k)) out.push_back(k);
  return out;
}

std::vector<Index> Poset::minimal_elements() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i)
    if (parents_[i].empty()) out.push_back(i);
  return out;
}

std::vector<Index> Poset::maximal_elements() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i)
    if (children_[i].empty()) out.push_back(i);
  return out;
}

std::vector<Index> Poset::sources() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i)
    if (parents_[i].empty() && children_[i].size() >= 2) out.push_back(i);
  return out;
}

std::vector<Index> Poset::branching_elements() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i)
    if (children_[i].size() >= 2) out.push_back(i);
  return out;
}

bool Poset::is_total_order() const {
  for (Index i = 0; i < size(); ++i)
    for (Index j = i + 1; j < size(); ++j)
      if (!comparable(i, j)) return false;
  return true;
}

std::size_t Poset::comparable_pair_count() const {
  return static_cast<std::size_t>(std::count(less_.begin(), less_.end(), 1));
}

Poset Poset::opposite() const {
  std::vector<std::pair<Index, Index>> edges;
  for (auto [a, b] : cover_edges()) edges.emplace_back(b, a);
  return Build(labels_, edges);
}

Poset Poset::induced(const std::vector<Index>& elements) const {
  std::vector<std::string> labels;
  for (Index e : elements) labels.push_back(labels_[e]);
  std::vector<std::pair<Index, Index>> edges;
  for (Index a = 0; a < elements.size(); ++a)
    for (Index b = 0; b < elements.size(); ++b)
      if (less(elements[a], elements[b])) edges.emplace_back(a, b);
  return Build(std::move(labels), edges);
}

std::string Poset::content_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0x1f;
    h *= 1099511628211ULL;
  };
  for (const auto& l : labels_) mix(l);
  mix("|");
  for (auto [a, b] : cover_edges()) {
    mix(labels_[a]);
    mix(labels_[b]);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool Poset::operator==(const Poset& other) const {
  return labels_ == other.labels_ && less_ == other.less_;
}

std::optional<ConditionFWitness> check_condition_f(const Poset& p) {
  const std::size_t n = p.size();
  // count[i][j]: number of saturated chains from i up to j, capped at 2.
  std::vector<int> count(n * n, 0);
  for (Index ii = n; ii-- > 0;) {
    count[ii * n + ii] = 1;
    for (Index j = ii + 1; j < n; ++j) {
      if (!p.less(ii, j)) continue;
      int c = 0;
      for (Index ch : p.children(ii))
        if (p.leq(ch, j)) c += count[ch * n + j];
      count[ii * n + j] = std::min(c, 2);
    }
  }
  auto one_path = [&](Index from, Index to) {
    std::vector<Index> path{from};
    while (from != to) {
      for (Index ch : p.children(from))
        if (p.leq(ch, to)) {
          from = ch;
          break;
        }
      path.push_back(from);
    }
    return path;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      if (count[i * n + j] < 2) continue;
      // Walk up while the path count stays >= 2 through a single child; the
      // first branching point yields two distinct chains.
      std::vector<Index> prefix{i};
      Index at = i;
      while (true) {
        std::vector<Index> viable;
        for (Index ch : p.children(at))
          if (p.leq(ch, j)) viable.push_back(ch);
        if (viable.size() >= 2) {
          ConditionFWitness w{i, j, prefix, prefix};
          auto a = one_path(viable[0], j);
          auto b = one_path(viable[1], j);
          w.first_path.insert(w.first_path.end(), a.begin(), a.end());
          w.second_path.insert(w.second_path.end(), b.begin(), b.end());
          return w;
        }
        at = viable.front();
        prefix.push_back(at);
      }
    }
  return std::nullopt;
}

std::string format_path(const Poset& p, const std::vector<Index>& path) {
  std::string out;
  for (std::size_t k = 0; k < path.size(); ++k) out += (k ? " < " : "") + p.label(path[k]);
  return out;
}

void require_condition_f(const Poset& p) {
  if (const auto w = check_condition_f(p))
    throw ConditionFViolation("condition (F) fails between " + p.label(w->lower) + " and " + p.label(w->upper) +
                              ": " + format_path(p, w->first_path) + " and " + format_path(p, w->second_path));
}

Separators separators(const Poset& p) {
  const std::size_t n = p.size();
  Separators s;
  std::vector<char> is_sep(n, 0);
  for (Index j = 0; j < n; ++j) {
    auto below = p.strict_down_set(j);
    for (std::size_t a = 0; a < below.size() && !is_sep[j]; ++a)
      for (std::size_t b = a + 1; b < below.size(); ++b)
        if (!p.comparable(below[a], below[b])) {
          is_sep[j] = 1;
          break;
        }
  }
  for (Index j = 0; j < n; ++j)
    if (is_sep[j]) s.separators.push_back(j);

  auto minimal_of = [&p](const std::vector<Index>& set) {
    std::vector<Index> out;
    for (Index a : set) {
      bool minimal = true;
      for (Index b : set)
        if (p.less(b, a)) {
          minimal = false;
          break;
        }
      if (minimal) out.push_back(a);
    }
    return out;
  };

  s.per_element.resize(n);
  std::set<Index> uni;
  for (Index i = 0; i < n; ++i) {
    std::vector<Index> above;
    for (Index j : s.separators)
      if (p.leq(i, j)) above.push_back(j);
    s.per_element[i] = minimal_of(above);
    uni.insert(s.per_element[i].begin(), s.per_element[i].end());
  }
  s.union_of_minimal.assign(uni.begin(), uni.end());
  s.minimal = minimal_of(s.union_of_minimal);
  return s;
}

PosetDims dims(const Poset& p) {
  const std::size_t n = p.size();
  PosetDims d;
  d.n_dot_i.assign(n, 0);
  d.n_i_dot.assign(n, 0);
  d.n_i.assign(n, 0.0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (p.less(i, j)) {
        ++d.n_dot_i[i];
        ++d.n_i_dot[j];
      }
  for (Index i = 0; i < n; ++i) {
    d.n_i[i] = 1.0 + 0.5 * (d.n_i_dot[i] + d.n_dot_i[i]);
    d.n_dotdot += d.n_i[i];
  }
  return d;
}

}  // namespace conewish
