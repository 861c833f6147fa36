#include <gtest/gtest.h>

#include <random>

#include "conewish/error.hpp"
#include "conewish/io.hpp"
#include "conewish/poset.hpp"
#include "oracles.hpp"

using namespace conewish;

namespace {

Poset example2() { return Poset::FromIntegerEdges(4, {{1, 3}, {2, 3}, {2, 4}}); }
Poset separator_poset() { return Poset::FromIntegerEdges(4, {{1, 3}, {1, 4}, {2, 4}}); }
Poset diamond() { return Poset::FromCoverEdges({"i", "k", "s", "j"}, {{"i", "k"}, {"i", "s"}, {"k", "j"}, {"s", "j"}}); }

std::vector<std::string> labels_of(const Poset& p, const std::vector<Index>& xs) {
  std::vector<std::string> out;
  for (Index x : xs) out.push_back(p.label(x));
  return out;
}

using Labels = std::vector<std::string>;

}  // namespace

TEST(Poset, FourElementFromCovers) {
  const Poset p = example2();
  EXPECT_EQ(p.size(), 4u);
  EXPECT_TRUE(p.less(p.index_of("1"), p.index_of("3")));
  EXPECT_TRUE(p.less(p.index_of("2"), p.index_of("4")));
  EXPECT_FALSE(p.comparable(p.index_of("1"), p.index_of("2")));
  EXPECT_FALSE(p.comparable(p.index_of("3"), p.index_of("4")));
  EXPECT_EQ(p.cover_edges().size(), 3u);
}

TEST(Poset, SingletonAndCycle) {
  const Poset one = Poset::FromIntegerEdges(1, {});
  EXPECT_EQ(one.size(), 1u);
  EXPECT_TRUE(one.cover_edges().empty());
  EXPECT_THROW(Poset::FromIntegerEdges(2, {{1, 2}, {2, 1}}), CycleError);
  EXPECT_THROW(Poset::FromIntegerEdges(2, {{1, 1}}), CycleError);
}

TEST(Poset, RejectsUnknownAndDuplicateLabels) {
  EXPECT_THROW(Poset::FromCoverEdges({"a", "b"}, {{"a", "c"}}), UnknownLabel);
  EXPECT_THROW(Poset::FromCoverEdges({"a", "a"}, {}), DuplicateLabel);
}

TEST(Poset, TransitiveReductionDropsImpliedEdges) {
  const Poset p = Poset::FromIntegerEdges(3, {{1, 2}, {2, 3}, {1, 3}});
  EXPECT_EQ(p.cover_edges().size(), 2u);
  EXPECT_TRUE(p.less(0, 2));
  EXPECT_FALSE(p.covers(0, 2));
  EXPECT_EQ(p, Poset::Chain(3));
}

TEST(Poset, LinearExtensionBreaksTiesByNaturalLabelOrder) {
  const Poset p = Poset::FromCoverEdges({"10", "2", "b", "a"}, {});
  EXPECT_EQ(p.labels(), (Labels{"2", "10", "a", "b"}));
  const Poset q = Poset::FromCoverEdges({"1", "2", "3"}, {{"3", "1"}});
  EXPECT_EQ(q.labels(), (Labels{"2", "3", "1"}));
}

TEST(Poset, ConditionF) {
  EXPECT_FALSE(check_condition_f(Poset::Chain(3)).has_value());
  EXPECT_FALSE(check_condition_f(example2()).has_value());
  const auto w = check_condition_f(diamond());
  ASSERT_TRUE(w.has_value());
  const Poset d = diamond();
  EXPECT_EQ(d.label(w->lower), "i");
  EXPECT_EQ(d.label(w->upper), "j");
  EXPECT_NE(w->first_path, w->second_path);
  EXPECT_EQ(w->first_path.front(), w->lower);
  EXPECT_EQ(w->second_path.back(), w->upper);
  EXPECT_THROW(require_condition_f(d), ConditionFViolation);
}

TEST(Poset, ConditionFMatchesPathEnumeration) {
  std::mt19937_64 rng(11);
  int violating = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Poset p = oracle::random_poset(1 + trial % 7, 0.45, rng);
    const bool ok = oracle::condition_f(p);
    violating += ok ? 0 : 1;
    const auto w = check_condition_f(p);
    ASSERT_EQ(ok, !w.has_value()) << "trial " << trial;
    if (w) {
      const auto paths = oracle::hasse_paths(p, w->lower, w->upper);
      EXPECT_NE(std::find(paths.begin(), paths.end(), w->first_path), paths.end());
      EXPECT_NE(std::find(paths.begin(), paths.end(), w->second_path), paths.end());
    }
  }
  EXPECT_GT(violating, 10);
}

TEST(Poset, Sources) {
  EXPECT_TRUE(Poset::Chain(3).sources().empty());
  const Poset p = example2();
  EXPECT_EQ(labels_of(p, p.sources()), Labels{"2"});
  const Poset s = Poset::Star(5);
  EXPECT_EQ(labels_of(s, s.sources()), Labels{"1"});
}

TEST(Poset, ExtremalElementsAndSets) {
  const Poset sp = separator_poset();
  EXPECT_EQ(labels_of(sp, sp.minimal_elements()), (Labels{"1", "2"}));
  EXPECT_EQ(labels_of(sp, sp.up_set(sp.index_of("2"))), (Labels{"2", "4"}));
  const Poset c = Poset::Chain(3);
  EXPECT_EQ(labels_of(c, c.minimal_elements()), Labels{"1"});
  EXPECT_EQ(labels_of(c, c.down_set(2)), (Labels{"1", "2", "3"}));
  const Poset a = Poset::Antichain(3);
  EXPECT_EQ(a.minimal_elements().size(), 3u);
  const Poset e2 = example2();
  EXPECT_EQ(labels_of(e2, e2.maximal_elements()), (Labels{"3", "4"}));
}

TEST(Poset, DownSetOfMaximalElementHasNoSource) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const Poset p = oracle::random_f_poset(2 + trial % 6, rng);
    for (Index m : p.maximal_elements()) {
      const Poset sub = p.induced(p.down_set(m));
      EXPECT_TRUE(sub.sources().empty()) << "trial " << trial;
    }
  }
}

TEST(Poset, SeparatorsOfFourElementPoset) {
  const Poset p = separator_poset();
  const Separators s = separators(p);
  const Labels four{"4"};
  EXPECT_EQ(labels_of(p, s.minimal), four);
  EXPECT_EQ(labels_of(p, s.per_element[p.index_of("1")]), four);
  EXPECT_EQ(labels_of(p, s.per_element[p.index_of("2")]), four);
  EXPECT_TRUE(separators(Poset::Star(5)).separators.empty());
  EXPECT_TRUE(separators(Poset::Chain(4)).separators.empty());
}

TEST(Poset, SeparatorsMatchTripleScan) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Poset p = oracle::random_poset(1 + trial % 7, 0.4, rng);
    const Separators s = separators(p);
    const auto expected = oracle::separators(p);
    EXPECT_EQ(std::set<Index>(s.separators.begin(), s.separators.end()), expected) << "trial " << trial;
    // S_i: separators above i with no separator strictly below them inside I_{i<=}.
    for (Index i = 0; i < p.size(); ++i) {
      std::set<Index> si;
      for (Index j : expected) {
        if (!p.leq(i, j)) continue;
        bool minimal = true;
        for (Index k : expected)
          if (k != j && p.leq(i, k) && p.less(k, j)) minimal = false;
        if (minimal) si.insert(j);
      }
      EXPECT_EQ(std::set<Index>(s.per_element[i].begin(), s.per_element[i].end()), si);
    }
  }
}

TEST(Poset, DimsTotalOrder) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const PosetDims d = dims(Poset::Chain(n));
    for (Index i = 0; i < n; ++i) {
      EXPECT_EQ(d.n_dot_i[i], static_cast<int>(n - 1 - i));
      EXPECT_EQ(d.n_i_dot[i], static_cast<int>(i));
      EXPECT_DOUBLE_EQ(d.n_i[i], (n + 1) / 2.0);
    }
    EXPECT_DOUBLE_EQ(d.n_dotdot, n * (n + 1) / 2.0);
  }
}

TEST(Poset, DimsFourElementAndStar) {
  const Poset p = example2();
  const PosetDims d = dims(p);
  EXPECT_EQ(d.n_i_dot, (std::vector<int>{0, 0, 2, 1}));
  EXPECT_EQ(d.n_i, (std::vector<double>{1.5, 2.0, 2.0, 1.5}));
  EXPECT_DOUBLE_EQ(d.n_dotdot, 7.0);
  for (std::size_t k = 2; k <= 6; ++k) {
    const PosetDims s = dims(Poset::Star(k));
    EXPECT_EQ(s.n_dot_i[0], static_cast<int>(k - 1));
    EXPECT_DOUBLE_EQ(s.n_i[0], (k + 1) / 2.0);
    for (Index i = 1; i < k; ++i) EXPECT_DOUBLE_EQ(s.n_i[i], 1.5);
  }
}

TEST(Poset, DimsCountComparablePairs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Poset p = oracle::random_poset(1 + trial % 7, 0.5, rng);
    EXPECT_DOUBLE_EQ(dims(p).n_dotdot, static_cast<double>(p.size() + p.comparable_pair_count()));
  }
}

TEST(Poset, Opposite) {
  EXPECT_EQ(Poset::Chain(2).opposite().labels(), (Labels{"2", "1"}));
  const Poset p = example2();
  const Poset o = p.opposite();
  EXPECT_TRUE(o.covers(o.index_of("3"), o.index_of("1")));
  EXPECT_TRUE(o.covers(o.index_of("3"), o.index_of("2")));
  EXPECT_TRUE(o.covers(o.index_of("4"), o.index_of("2")));
  EXPECT_EQ(o.cover_edges().size(), 3u);
  EXPECT_EQ(o.opposite(), p);
  EXPECT_EQ(Poset::Antichain(3).opposite(), Poset::Antichain(3));
}

TEST(Poset, ContentHashIsStableAndDiscriminates) {
  EXPECT_EQ(example2().content_hash(), example2().content_hash());
  EXPECT_NE(example2().content_hash(), separator_poset().content_hash());
  EXPECT_EQ(example2().content_hash().size(), 16u);
}

TEST(PosetIo, TextFormat) {
  const Poset p = io::parse_poset_text("# Example\n1 < 3\n2 < 3  # trailing comment\n\n2 < 4\n");
  EXPECT_EQ(p, example2());
  const Poset chain = io::parse_poset_text("a < b < c\n");
  EXPECT_TRUE(chain.is_total_order());
  const Poset lone = io::parse_poset_text("x\n");
  EXPECT_EQ(lone.size(), 1u);
}

TEST(PosetIo, ParseErrorsCarryLineNumbers) {
  try {
    io::parse_poset_text("1 < 2\n\n3 <\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(io::parse_poset_text("# nothing\n"), ParseError);
  EXPECT_THROW(io::parse_poset_text("a < b\nb < a\n"), CycleError);
}

TEST(PosetIo, JsonFormat) {
  const Poset p = io::parse_poset(R"({"labels": [1, 2, 3, 4], "covers": [[1, 3], [2, 3], [2, 4]]})");
  EXPECT_EQ(p, example2());
  EXPECT_EQ(io::parse_poset_json(io::poset_to_json(p)), p);
  EXPECT_THROW(io::parse_poset(R"({"covers": []})"), ParseError);
  EXPECT_THROW(io::parse_poset(R"({"labels": [1, 2], "covers": [[1]]})"), ParseError);
  EXPECT_THROW(io::parse_poset(R"({"labels": [1, 2], "covers": [[1, 5]]})"), UnknownLabel);
}
