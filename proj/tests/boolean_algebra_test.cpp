#include <gtest/gtest.h>

#include <random>

#include "dmbl/model.hpp"
#include "dmbl/stage_set.hpp"
#include "dmbl/world_table.hpp"

using namespace dmbl;

namespace {

StageSet random_set(std::mt19937_64& rng, std::size_t universe) {
  StageSet s(0, universe);
  for (WorldIndex w = 0; w < universe; ++w)
    if (rng() & 1U) s.insert(w);
  return s;
}

}  // namespace

class SetLaws : public ::testing::TestWithParam<std::size_t> {};

TEST_P(SetLaws, HoldOnRandomSets) {
  const std::size_t n = GetParam();
  std::mt19937_64 rng(n);
  const StageSet top = StageSet::full(0, n);
  const StageSet none(0, n);
  for (int i = 0; i < 200; ++i) {
    const StageSet a = random_set(rng, n);
    const StageSet b = random_set(rng, n);
    const StageSet c = random_set(rng, n);
    EXPECT_EQ(~(a & b), ~a | ~b);
    EXPECT_EQ(~(a | b), ~a & ~b);
    EXPECT_EQ(a & (b | c), (a & b) | (a & c));
    EXPECT_EQ(a | (b & c), (a | b) & (a | c));
    EXPECT_EQ(~~a, a);
    EXPECT_EQ(a | ~a, top);
    EXPECT_EQ(a & ~a, none);
    EXPECT_EQ(a - b, a & ~b);
    EXPECT_EQ(a.subset_of(b), (a & b) == a);
    EXPECT_EQ(a.intersects(b), !(a & b).empty());
    EXPECT_EQ((a | b).count() + (a & b).count(), a.count() + b.count());
    if (a == b) {
      EXPECT_EQ(a.hash(), b.hash());
    }
  }
}

// 64 and 65 straddle a word boundary.
INSTANTIATE_TEST_SUITE_P(Sizes, SetLaws, ::testing::Values(1, 3, 8, 63, 64, 65, 130));

TEST(StageSet, MembersAndText) {
  const StageSet s = StageSet::of(2, 70, {0, 5, 69});
  EXPECT_EQ(s.members(), (std::vector<WorldIndex>{0, 5, 69}));
  EXPECT_EQ(s.to_string(), "{0,5,69}");
  EXPECT_EQ(s.first(), 0U);
  EXPECT_EQ(s.stage(), 2U);
  EXPECT_FALSE(s.is_trivial());
  EXPECT_TRUE(StageSet(0, 4).is_trivial());
  EXPECT_TRUE(StageSet::full(0, 4).is_trivial());
}

TEST(StageSet, MixingStagesIsAnError) {
  EXPECT_THROW((void)(StageSet(0, 4) & StageSet(1, 4)), Error);
  EXPECT_THROW((void)(StageSet(0, 4) | StageSet(0, 5)), Error);
}

TEST(Minterms, FirstWorldIsAllTrue) {
  EXPECT_EQ(minterm_label(2, 0), "11");
  EXPECT_EQ(minterm_label(2, 1), "10");
  EXPECT_EQ(minterm_label(2, 2), "01");
  EXPECT_EQ(minterm_label(2, 3), "00");
  EXPECT_EQ(minterm_index({true, false}), 1U);
  const AtomContext ctx = AtomContext::standard(2);
  EXPECT_EQ(minterm_set(ctx, "p"), StageSet::of(0, 4, {0, 1}));
  EXPECT_EQ(minterm_set(ctx, "q"), StageSet::of(0, 4, {0, 2}));
  for (WorldIndex w = 0; w < 8; ++w)
    for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(minterm_value(3, w, a), minterm_label(3, w)[a] == '1');
}

// The forward map is an injective Boolean homomorphism and the swap an
// involution without fixed points, at every stage of a few constructions.
TEST(ForwardMorphism, IsAnInjectiveHomomorphism) {
  std::mt19937_64 rng(5);
  ModelState m = ModelState::standard(AtomContext::standard(2));
  m.process_base(m.atom_set("p"));
  m.process_base(m.atom_set("q"));
  m.process_base(m.forward_to_current(m.atom_set("p")));
  const WorldTables& t = m.tables();
  for (std::size_t k = 0; k < m.stage(); ++k) {
    const ForwardRecord fr = t.forward_record(k);
    for (int i = 0; i < 100; ++i) {
      StageSet a(k, t.size(k));
      StageSet b(k, t.size(k));
      for (WorldIndex w = 0; w < t.size(k); ++w) {
        if (rng() & 1U) a.insert(w);
        if (rng() & 1U) b.insert(w);
      }
      EXPECT_EQ(forward(fr, a & b), forward(fr, a) & forward(fr, b));
      EXPECT_EQ(forward(fr, a | b), forward(fr, a) | forward(fr, b));
      EXPECT_EQ(forward(fr, ~a), ~forward(fr, a));
      EXPECT_EQ(a == b, forward(fr, a) == forward(fr, b));
      EXPECT_EQ(t.pullback(forward(fr, a), k), a);
      EXPECT_EQ(t.forward_to(a, m.stage()), t.forward_to(forward(fr, a), m.stage()));
    }
  }
  for (std::size_t k = 1; k <= m.stage(); ++k)
    for (WorldIndex w = 0; w < t.size(k); ++w) {
      const WorldIndex s = t.stage(k).swap_partner(w);
      EXPECT_NE(s, w);
      EXPECT_EQ(t.stage(k).swap_partner(s), w);
      EXPECT_EQ(t.stage(k).pair(s).left, t.stage(k).pair(w).right);
    }
}

TEST(Pullback, RejectsSetsThatSplitAParent) {
  ModelState m = ModelState::standard(AtomContext::standard(1));
  m.process_base(m.atom_set("p"));
  // stage 1 = {(1,0), (0,1)}; each stage 0 world has one child, so every set pulls back
  EXPECT_TRUE(m.tables().pullback(StageSet::of(1, 2, {0}), 0).has_value());
  m.process_base(StageSet::of(1, 2, {0}));
  ModelState m2 = ModelState::standard(AtomContext::standard(2));
  m2.process_base(m2.atom_set("p"));
  // world 0 ("11") has two children at stage 1
  StageSet split(1, m2.world_count());
  split.insert(0);
  EXPECT_FALSE(m2.tables().pullback(split, 0).has_value());
}
