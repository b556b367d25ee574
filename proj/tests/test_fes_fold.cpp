/*
 * Copyright 2026 The esfold Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "build.hpp"
#include "oracles.hpp"

using namespace esfold;

namespace {

EventSet ids(const Fes& f, const std::vector<std::string>& v) { return f.events().set_of(v); }

}  // namespace

TEST(FesCombinableTest, F0Verdicts) {
  const Fes f = oracle::fixture<Fes>("f0.json");
  EXPECT_TRUE(is_combinable_fes(f, ids(f, {"c1", "c2"})).combinable());
  const auto p01 = is_combinable_fes(f, ids(f, {"c0", "c1"}));
  EXPECT_FALSE(p01.combinable());
  EXPECT_TRUE(p01.holds(1));
  EXPECT_FALSE(p01.holds(2));
  EXPECT_EQ(p01.failures[1], (std::vector<EventIndex>{f.events().index_of("c0"), f.events().index_of("c1"),
                                                      f.events().index_of("b")}));
  const auto p02 = is_combinable_fes(f, ids(f, {"c0", "c2"}));
  EXPECT_FALSE(p02.combinable());
  EXPECT_FALSE(p02.holds(4));
}

TEST(FesCombinableTest, ConditionFiveFailure) {
  const Fes f = oracle::fixture<Fes>("f2.json");
  const auto plan = is_combinable_fes(f, ids(f, {"ax", "ax'"}));
  for (int c = 1; c <= 4; ++c) EXPECT_TRUE(plan.holds(c)) << c;
  EXPECT_FALSE(plan.holds(5));
  EXPECT_EQ(plan.failures[4],
            (std::vector<EventIndex>{f.events().index_of("ax"), f.events().index_of("c"), f.events().index_of("b")}));
  EXPECT_EQ(*plan.condition5_y, ids(f, {"ax"}));
}

TEST(FesCombinableTest, ConditionThreeAndLabels) {
  // x ≺ e without x' ≺ e or x' # e
  const auto f = build::fes({"x:a", "y:a", "e", "z:b"}, {{"x", "e"}}, {{"x", "y"}});
  const auto plan = is_combinable_fes(f, ids(f, {"x", "y"}));
  EXPECT_FALSE(plan.holds(3));
  EXPECT_FALSE(is_combinable_fes(f, ids(f, {"x", "z"})).holds(1));
}

TEST(FoldFesTest, F0FoldsToF1) {
  const Fes f = oracle::fixture<Fes>("f0.json");
  const auto fold = fold_fes(f, ids(f, {"c1", "c2"}));
  const Fes& f1 = fold.structure;
  const EventIndex c = fold.map.merged;
  EXPECT_EQ(f1.pre(c), f1.events().set_of({"b", "d", "e"}));
  EXPECT_EQ(mcons(f1, f1.pre(c)), (std::vector<EventSet>{f1.events().set_of({"b"}), f1.events().set_of({"d", "e"})}));
  EXPECT_EQ(f1.conflict_set(c), f1.events().set_of({"c0"}));
  EXPECT_TRUE(validate_fes_semantic(f1).ok());
  EXPECT_TRUE(isomorphic(f1, oracle::fixture<Fes>("f1.json")).has_value());
  EXPECT_TRUE(hp_bisimilar(f, f1).equivalent());
}

TEST(FoldFesTest, F4FoldExhibitsBothPredecessorSets) {
  const Fes f = oracle::fixture<Fes>("f4.json");
  const auto fold = fold_fes(f, ids(f, {"a0", "a1"}));
  const Fes& f5 = fold.structure;
  const auto& t = f5.events();
  EXPECT_EQ(mcons(f5, f5.pre(t.index_of("c"))),
            (std::vector<EventSet>{t.set_of({"a0+a1", "b"}), t.set_of({"a0+a1", "f"})}));
  EXPECT_TRUE(validate_fes_semantic(f5).ok());
  EXPECT_TRUE(hp_bisimilar(f, f5).equivalent());
}

TEST(FoldFesTest, ForcedConditionFiveFoldKillsC) {
  const Fes f = oracle::fixture<Fes>("f2.json");
  EXPECT_THROW(fold_fes(f, ids(f, {"ax", "ax'"})), Error);
  const Fes f3 = fold_fes(f, ids(f, {"ax", "ax'"}), true).structure;
  const auto& t = f3.events();
  const auto report = validate_fes_semantic(f3);
  EXPECT_TRUE(report.has(clause::kFesFull));
  EXPECT_EQ(report.violations.back().witness, (std::vector<EventIndex>{t.index_of("c")}));
  EXPECT_TRUE(f3.in_conflict(t.index_of("b"), t.index_of("e")));
  EXPECT_FALSE(f3.in_conflict(t.index_of("b"), t.index_of("ax+ax'")));
  EXPECT_FALSE(hp_bisimilar(f, f3).equivalent());
}

TEST(MconsLemmaTest, F0Witnesses) {
  const Fes f = oracle::fixture<Fes>("f0.json");
  const EventSet x = ids(f, {"c1", "c2"});
  EXPECT_TRUE(check_mcons_lemma(f, x).ok());
  EXPECT_TRUE(ids(f, {"b"}).subset_of(f.pre(f.events().index_of("c1"))));
  EXPECT_TRUE(ids(f, {"d", "e"}).subset_of(f.pre(f.events().index_of("c2"))));
}

TEST(MconsLemmaTest, NonCombinableCounterexample) {
  // pre(x) = {p}, pre(y) = {q}, p and q compatible: {p, q} ⊆ pre(X) is
  // covered by neither member.
  const auto f = build::fes({"x:a", "y:a", "p", "q"}, {{"p", "x"}, {"q", "y"}}, {{"x", "y"}});
  const auto plan = is_combinable_fes(f, ids(f, {"x", "y"}));
  EXPECT_FALSE(plan.holds(4));
  EXPECT_EQ(check_mcons_lemma(f, ids(f, {"x", "y"})).cover, ids(f, {"p", "q"}));
}

TEST(FoldFesTest, LemmasOnFixtures) {
  for (const char* name : {"f0.json", "f4.json"}) {
    const Fes f = oracle::fixture<Fes>(name);
    for (const auto& c : combinable_candidates(f)) {
      const auto fold = fold_fes(f, c.plan);
      EXPECT_TRUE(check_mcons_lemma(f, c.set).ok()) << name;
      EXPECT_TRUE(check_folding_map_fes(f, fold).empty()) << name;
      EXPECT_TRUE(check_configuration_preservation(f, fold.structure, fold.map).empty()) << name;
      EXPECT_TRUE(validate_fes_semantic(fold.structure).ok()) << name;
      EXPECT_TRUE(hp_bisimilar(f, fold.structure).equivalent()) << name;
    }
  }
}

TEST(FoldFesTest, LemmasOnRandomFes) {
  int folds = 0;
  int broken = 0;
  for (std::uint64_t seed = 1; seed <= 600; ++seed) {
    const Fes f = pes_to_fes(generate_random_pes({8, 2, 0.25, 0.3, seed}));
    for (const auto& c : combinable_candidates(f)) {
      const auto fold = fold_fes(f, c.plan);
      ++folds;
      const auto lemma = check_mcons_lemma(f, c.set);
      ASSERT_FALSE(lemma.cover.has_value()) << seed;
      if (lemma.mcons) {
        ++broken;
        continue;
      }
      ASSERT_TRUE(validate_fes_semantic(fold.structure).ok()) << seed;
      ASSERT_TRUE(check_folding_map_fes(f, fold).empty()) << seed;
      ASSERT_TRUE(check_configuration_preservation(f, fold.structure, fold.map).empty()) << seed;
      ASSERT_TRUE(hp_bisimilar(f, fold.structure).equivalent()) << seed;
    }
  }
  EXPECT_GT(folds, 50);
  RecordProperty("folds", folds);
  RecordProperty("not_hp_equivalent", broken);
}

TEST(FoldFesTest, NestedPredecessorsBreakBehaviour) {
  const Fes f = pes_to_fes(generate_random_pes({8, 2, 0.25, 0.3, 27}));
  const EventSet x = ids(f, {"e6", "e7"});
  EXPECT_EQ(f.pre(f.events().index_of("e6")), ids(f, {"e5"}));
  EXPECT_EQ(f.pre(f.events().index_of("e7")), ids(f, {"e0", "e3", "e5"}));
  const auto plan = is_combinable_fes(f, x);
  ASSERT_TRUE(plan.combinable());
  const auto fold = fold_fes(f, plan);
  EXPECT_TRUE(validate_fes_semantic(fold.structure).ok());
  const auto lemma = check_mcons_lemma(f, x);
  EXPECT_FALSE(lemma.cover.has_value());
  EXPECT_EQ(lemma.mcons, ids(f, {"e5"}));
  EXPECT_FALSE(hp_bisimilar(f, fold.structure).equivalent());
  EXPECT_FALSE(check_configuration_preservation(f, fold.structure, fold.map).empty());
  const auto map = check_folding_map_fes(f, fold);
  EXPECT_EQ(map, (std::vector<std::string>{"map flow reflection fails for (e0, e6)",
                                           "map flow reflection fails for (e3, e6)"}));
}

TEST(FoldFesTest, NestedPredecessorsBreakFaithfulness) {
  const Fes f = pes_to_fes(generate_random_pes({8, 2, 0.25, 0.3, 100}));
  const EventSet x = ids(f, {"e3", "e6"});
  EXPECT_TRUE(f.pre(f.events().index_of("e3")).subset_of(f.pre(f.events().index_of("e6"))));
  const auto plan = is_combinable_fes(f, x);
  ASSERT_TRUE(plan.combinable());
  const auto fold = fold_fes(f, plan);
  const auto report = validate_fes_semantic(fold.structure);
  EXPECT_TRUE(report.has(clause::kFesFaithful));
  EXPECT_TRUE(check_mcons_lemma(f, x).mcons.has_value());
}

TEST(FoldFesTest, ReportShape) {
  const Fes f = oracle::fixture<Fes>("f2.json");
  const std::string text = format_plan(f, is_combinable_fes(f, ids(f, {"ax", "ax'"})));
  EXPECT_NE(text.find("condition 5: fails at (ax, c, b) with Y = {ax}"), std::string::npos);
}
