#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "dmbl/formula.hpp"
#include "dmbl/parser.hpp"
#include "dmbl/scenarios.hpp"

using namespace dmbl;

namespace {

const AtomContext kPQ = AtomContext::standard(2);

Formula P() { return Formula::atom("p"); }
Formula Q() { return Formula::atom("q"); }

// Random formula over p, q using every connective.
Formula random_formula(std::mt19937_64& rng, int depth) {
  const int pick = depth == 0 ? static_cast<int>(rng() % 4) : static_cast<int>(rng() % 13);
  auto sub = [&] { return random_formula(rng, depth - 1); };
  switch (pick) {
    case 0: return P();
    case 1: return Q();
    case 2: return Formula::top();
    case 3: return Formula::bot();
    case 4: return Formula::neg(sub());
    case 5: return Formula::box(sub());
    case 6: return Formula::dia(sub());
    case 7: return Formula::implies(sub(), sub());
    case 8: return Formula::land(sub(), sub());
    case 9: return Formula::lor(sub(), sub());
    case 10: return Formula::iff(sub(), sub());
    case 11: return Formula::cond(sub(), sub());
    default: return Formula::indep(sub(), sub());
  }
}

}  // namespace

TEST(Parser, ConditionalIsConsequentThenAntecedent) {
  const Formula f = parse("(q|p)", kPQ);
  ASSERT_EQ(f.op(), Op::Cond);
  EXPECT_EQ(f.left(), Q());
  EXPECT_EQ(f.right(), P());
}

TEST(Parser, Precedence) {
  EXPECT_EQ(parse("~p /\\ q \\/ p -> q", kPQ),
            Formula::implies(Formula::lor(Formula::land(Formula::neg(P()), Q()), P()), Q()));
  EXPECT_EQ(parse("p -> q -> p", kPQ), Formula::implies(P(), Formula::implies(Q(), P())));
  EXPECT_EQ(parse("p <-> q -> p", kPQ), Formula::iff(P(), Formula::implies(Q(), P())));
  EXPECT_EQ(parse("box p -> p", kPQ), Formula::implies(Formula::box(P()), P()));
  EXPECT_EQ(parse("dia ~p", kPQ), Formula::dia(Formula::neg(P())));
}

TEST(Parser, ConstantsAndIndependence) {
  EXPECT_EQ(parse("top", kPQ), Formula::top());
  EXPECT_EQ(parse("bot", kPQ), Formula::bot());
  EXPECT_EQ(parse("indep((q|p), p)", kPQ), Formula::indep(Formula::cond(Q(), P()), P()));
}

TEST(Parser, NestedConditionals) {
  const Formula f = parse("((q|p) | (p|q))", kPQ);
  EXPECT_EQ(conditional_depth(f), 2U);
  EXPECT_EQ(f.left(), Formula::cond(Q(), P()));
}

TEST(Parser, ErrorsCarryPositions) {
  try {
    parse("p /\\ r", kPQ);
    FAIL() << "unknown atom accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5U);
  }
  EXPECT_THROW(parse("(q|p", kPQ), ParseError);
  EXPECT_THROW(parse("q|p", kPQ), ParseError);
  EXPECT_THROW(parse("p q", kPQ), ParseError);
  EXPECT_THROW(parse("", kPQ), ParseError);
  EXPECT_THROW(parse("p # q", kPQ), ParseError);
  EXPECT_THROW(parse("box", kPQ), ParseError);
}

TEST(Parser, ReservedWordsAreNotAtoms) {
  EXPECT_TRUE(AtomContext::is_reserved("box"));
  EXPECT_TRUE(AtomContext::is_reserved("indep"));
  EXPECT_THROW(AtomContext(std::vector<std::string>{"p", "top"}), Error);
  EXPECT_THROW(AtomContext(std::vector<std::string>{"p", "p"}), Error);
}

TEST(Parser, ScanIdentifiersKeepsOrder) {
  EXPECT_EQ(scan_identifiers("(beta | alpha) /\\ box beta -> top"), (std::vector<std::string>{"beta", "alpha"}));
}

TEST(Render, RoundTripsRandomFormulas) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = random_formula(rng, 4);
    const std::string text = render(f);
    EXPECT_EQ(parse(text, kPQ), f) << text;
  }
}

TEST(Desugar, OnlyCoreConnectivesRemain) {
  std::mt19937_64 rng(11);
  std::function<bool(const Formula&)> core = [&](const Formula& g) {
    if (!is_core(g.op())) return false;
    for (std::size_t i = 0; i < g.arity(); ++i)
      if (!core(g.child(i))) return false;
    return true;
  };
  for (int i = 0; i < 500; ++i) {
    const Formula f = random_formula(rng, 4);
    const Formula d = desugar(f, kPQ);
    EXPECT_TRUE(core(d)) << render(f);
    if (render(f).find("indep") == std::string::npos)
      EXPECT_EQ(conditional_depth(d), conditional_depth(f)) << render(f);
    else
      EXPECT_GE(conditional_depth(d), conditional_depth(f)) << render(f);
  }
}

TEST(Desugar, PreservesClassicalTruthTables) {
  std::mt19937_64 rng(13);
  const AtomContext ctx = AtomContext::standard(3);
  for (int i = 0; i < 500; ++i) {
    const Formula f = random_classical_formula(rng, ctx, 4);
    const Formula d = desugar(f, ctx);
    for (WorldIndex w = 0; w < 8; ++w) EXPECT_EQ(truth_value(f, ctx, w), truth_value(d, ctx, w)) << render(f);
  }
}

TEST(Formula, Classification) {
  EXPECT_TRUE(is_classical(parse("p -> (q \\/ ~p)", kPQ)));
  EXPECT_FALSE(is_classical(parse("(q|p)", kPQ)));
  EXPECT_FALSE(is_classical(parse("box p", kPQ)));
  EXPECT_TRUE(has_modality(parse("indep(p, q)", kPQ)));
  EXPECT_FALSE(has_modality(parse("(q|p) /\\ p", kPQ)));
  EXPECT_EQ(conditional_depth(parse("((q|p)|(p|(q|p)))", kPQ)), 3U);
  EXPECT_EQ(atoms_in(parse("(q|p) /\\ q", kPQ)), (std::vector<std::string>{"q", "p"}));
}

TEST(AtomContext, StandardNames) {
  EXPECT_EQ(AtomContext::standard(3).names(), (std::vector<std::string>{"p", "q", "r"}));
  EXPECT_EQ(*AtomContext::standard(3).index_of("r"), 2U);
  EXPECT_FALSE(AtomContext::standard(3).index_of("s").has_value());
}
