#include <gtest/gtest.h>

#include <random>

#include "dmbl/parser.hpp"
#include "dmbl/probability.hpp"
#include "dmbl/scenarios.hpp"
#include "support/oracles.hpp"

using namespace dmbl;

namespace {

const AtomContext kPQ = AtomContext::standard(2);

Formula F(const std::string& text) { return parse(text, kPQ); }

Distribution from_oracle(const oracle::Dist& d) { return parse_distribution(d.text()); }

const char* kSkewed = "atoms: p q\n11 1/10\n10 1/5\n01 3/10\n00 2/5\n";

}  // namespace

TEST(DistributionFile, ParsesBitstringsInAtomOrder) {
  const Distribution d = parse_distribution("# comment\natoms: p q\n10 1/2  # p only\n01 1/2\n");
  EXPECT_FALSE(d.generalized);
  EXPECT_EQ(d.weights[1], Rational(1, 2));  // "10"
  EXPECT_EQ(d.weights[2], Rational(1, 2));  // "01"
  EXPECT_EQ(d.weights[0], 0);
  EXPECT_FALSE(d.strictly_positive());
  EXPECT_EQ(parse_distribution(format_distribution(d)).weights, d.weights);
}

TEST(DistributionFile, GeneralizedWorlds) {
  const Distribution d = parse_distribution("worlds: a b c\na 1/5\nb 3/10\nc 1/2\n");
  EXPECT_TRUE(d.generalized);
  EXPECT_EQ(d.weights[2], Rational(1, 2));
}

TEST(DistributionFile, Errors) {
  auto line_of = [](const std::string& text) -> long {
    try {
      parse_distribution(text);
    } catch (const FormatError& e) {
      return static_cast<long>(e.line());
    }
    return -1;
  };
  EXPECT_EQ(line_of("atoms: p\n1 1/2\n0 1/3\n"), 3);        // sum
  EXPECT_EQ(line_of("atoms: p\n1 -1/2\n0 3/2\n"), 2);       // negative
  EXPECT_EQ(line_of("atoms: p q\n1 1\n"), 2);               // wrong width
  EXPECT_EQ(line_of("atoms: p\n1 1/2\n1 1/2\n"), 3);        // duplicate
  EXPECT_EQ(line_of("atoms: p\n1 x\n"), 2);                 // malformed weight
  EXPECT_EQ(line_of("p q\n"), 1);                           // header
  EXPECT_EQ(line_of("worlds: a b\nc 1\n"), 2);              // unknown world
  EXPECT_EQ(line_of("atoms: p top\n1 1\n"), 1);             // reserved
}

TEST(Prob, ConditionalIsClassicalConditionalProbability) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> classical{"p", "q", "~p", "p /\\ q", "p \\/ q", "p -> q", "p <-> q", "~q"};
  for (int round = 0; round < 10; ++round) {
    const oracle::Dist od = oracle::random_dist(rng, {"p", "q"});
    const Distribution d = from_oracle(od);
    for (const auto& a : classical)
      for (const auto& b : classical) {
        if (od.prob(F(a)) == 0) continue;
        ModelState m = model_for(d);
        EXPECT_EQ(prob(m, Formula::cond(F(b), F(a))), oracle::conditional(od, F(b), F(a))) << b << " | " << a;
      }
  }
}

TEST(Prob, ConditionalJoinedWithClassical) {
  std::mt19937_64 rng(9);
  const std::vector<std::string> classical{"p", "q", "~p", "p /\\ q", "p \\/ q", "p <-> q"};
  for (int round = 0; round < 5; ++round) {
    const oracle::Dist od = oracle::random_dist(rng, {"p", "q"});
    const Distribution d = from_oracle(od);
    for (const auto& a : classical)
      for (const auto& b : classical)
        for (const auto& c : classical) {
          ModelState m = model_for(d);
          EXPECT_EQ(prob(m, Formula::land(Formula::cond(F(b), F(a)), F(c))),
                    oracle::conditional_and(od, F(b), F(a), F(c)))
              << "(" << b << "|" << a << ") /\\ " << c;
        }
  }
}

TEST(Prob, UniformTwoAtoms) {
  ModelState m = model_for(parse_distribution("atoms: p q\n11 1/4\n10 1/4\n01 1/4\n00 1/4\n"));
  EXPECT_EQ(prob(m, F("(q|p)")), Rational(1, 2));
  EXPECT_EQ(prob(m, F("(p /\\ q|p \\/ q)")), Rational(1, 3));
}

TEST(Prob, NestedConditionalOnSkewedDistribution) {
  ModelState m = model_for(parse_distribution(kSkewed));
  // ((p|q)|p): Bayes with P((p|q) /\ p) = P(pq) + P(p~q) P(p|q)
  EXPECT_EQ(prob(m, F("((p|q)|p)")), Rational(1, 2));
  EXPECT_EQ(prob(m, F("(p|p /\\ q)")), Rational(1));
}

TEST(Prob, BayesIdentityOnPoolPairs) {
  std::mt19937_64 rng(10);
  const auto pool = formula_pool(2);
  const Distribution d = from_oracle(oracle::random_dist(rng, {"p", "q"}));
  for (const auto& psi : pool)
    for (const auto& phi : pool) {
      ModelState m = model_for(d);
      const BayesReport r = bayes_check(m, psi, phi);
      EXPECT_TRUE(r.equal) << render(psi) << " | " << render(phi);
    }
}

TEST(Prob, DegenerateDistributionRejected) {
  ModelState m = model_for(parse_distribution("atoms: p q\n11 0\n10 1/3\n01 1/3\n00 1/3\n"));
  EXPECT_THROW(prob(m, F("p")), DegenerateDistribution);
}

TEST(Prob, GeneralizedMode) {
  const Distribution d = parse_distribution("worlds: a b c\na 1/5\nb 3/10\nc 1/2\n");
  ModelState m = model_for(d);
  const AtomContext ctx = d.context();
  EXPECT_EQ(prob(m, parse("c", ctx)), Rational(1, 2));
  EXPECT_EQ(prob(m, parse("(a|a \\/ b)", ctx)), Rational(2, 5));
  EXPECT_EQ(prob(m, parse("(c|a \\/ b)", ctx)), Rational(0));
}

TEST(Epsilon, AgreesWithProbOnPositiveInputs) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 8; ++i) {
    const Distribution d = from_oracle(oracle::random_dist(rng, {"p", "q"}));
    for (const char* text : {"(q|p)", "((q|p)|(p|q))", "(q|p) /\\ ~p", "p \\/ q"}) {
      ModelState m = model_for(d);
      EXPECT_EQ(epsilon_prob(d, F(text)), prob(m, F(text))) << text;
    }
  }
}

TEST(Epsilon, LimitsOnZeroMassAntecedent) {
  const Distribution d = parse_distribution("atoms: p q\n11 0\n10 1/3\n01 1/3\n00 1/3\n");
  // P_e(pq) = e/4, so conditioning on p /\ q makes its own atoms certain
  EXPECT_EQ(epsilon_prob(d, F("(p|p /\\ q)")), Rational(1));
  EXPECT_EQ(epsilon_prob(d, F("(~q|p /\\ q)")), Rational(0));
  EXPECT_EQ(epsilon_prob(d, F("(q|p)")), Rational(0));
  EXPECT_EQ(epsilon_prob(d, F("(p|q)")), Rational(0));
  // a world of zero mass on both sides of the limit: uniform smoothing decides
  const Distribution point = parse_distribution("atoms: p q\n00 1\n");
  EXPECT_EQ(epsilon_prob(point, F("(q|p)")), Rational(1, 2));
}

TEST(Epsilon, FunctionMeasureIsARationalFunction) {
  const Distribution d = parse_distribution("atoms: p\n1 0\n0 1\n");
  ModelState m = epsilon_model_for(d);
  const RationalFn r = prob_fn(m, parse("p", AtomContext::standard(1)));
  EXPECT_EQ(r, RationalFn::variable() * RationalFn(Rational(1, 2)));
}
