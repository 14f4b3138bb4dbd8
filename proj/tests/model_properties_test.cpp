#include <gtest/gtest.h>

#include "dmbl/scenarios.hpp"

using namespace dmbl;

namespace {

void expect_clean(const PropertyLog& log) {
  for (const auto& r : log.records())
    EXPECT_EQ(r.status, CheckStatus::Pass) << r.name << ": " << r.detail;
}

}  // namespace

class RandomConstruction : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomConstruction, InvariantsHoldAfterEveryStep) {
  ConstructionSuiteOptions opt;
  opt.runs = 12;
  opt.seed = GetParam();
  const ScenarioReport r = run_construction_suite(opt);
  for (const auto& c : r.checks) EXPECT_NE(c.status, CheckStatus::Fail) << c.name << ": " << c.detail;
  EXPECT_TRUE(r.passed());
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomConstruction, ::testing::Values(1, 2, 3, 4, 5));

// Repeatedly conditioning on the same two bases drives the reprocessing case.
TEST(Reprocessing, AlternatingBases) {
  Rng rng(17);
  PropertyLog log;
  ModelState m = ModelState::standard(AtomContext::standard(2), {Schedule::Query, 50000});
  m.attach_masses(random_distribution(rng, 2).weights);
  const StageSet p0 = m.atom_set("p");
  const StageSet q0 = m.atom_set("q");
  m.process_base(p0);
  m.process_base(m.forward_to_current(q0));
  m.process_base(m.forward_to_current(p0));
  ASSERT_TRUE(m.history().back().tag.reprocess);
  check_model_properties(m, rng, log, 10);
  expect_clean(log);
  EXPECT_GT(log.records().size(), 10U);
}

TEST(Reprocessing, ComplementBase) {
  Rng rng(19);
  PropertyLog log;
  ModelState m = ModelState::standard(AtomContext::standard(1), {Schedule::Query, 50000});
  m.attach_masses(random_distribution(rng, 1).weights);
  m.process_base(m.atom_set("p"));
  StageSet half = m.empty();
  half.insert(0);
  m.process_base(half);
  m.process_base(~m.atom_set("p"));
  EXPECT_TRUE(m.history().back().tag.reprocess);
  check_model_properties(m, rng, log, 10);
  expect_clean(log);
}

TEST(Faithful, FirstStepsOverOneAtom) {
  Rng rng(23);
  PropertyLog log;
  ModelState m = ModelState::standard(AtomContext::standard(1), {Schedule::Faithful, 50000});
  m.attach_masses(random_distribution(rng, 1).weights);
  for (int i = 0; i < 4; ++i) {
    m.faithful_step();
    check_model_properties(m, rng, log, 8);
  }
  expect_clean(log);
}

TEST(PropertyLog, RecordsFirstFailure) {
  PropertyLog log;
  log.check("x", true);
  log.check("x", false, [] { return std::string("first"); });
  log.check("x", false, [] { return std::string("second"); });
  ASSERT_EQ(log.records().size(), 1U);
  EXPECT_EQ(log.records()[0].status, CheckStatus::Fail);
  EXPECT_EQ(log.records()[0].failures, 2U);
  EXPECT_EQ(log.records()[0].instances, 3U);
  EXPECT_EQ(log.records()[0].detail, "first");
  EXPECT_FALSE(log.ok());
}
