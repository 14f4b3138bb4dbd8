#include <gtest/gtest.h>

#include <random>

#include "dmbl/rational.hpp"
#include "dmbl/rational_fn.hpp"

using namespace dmbl;

namespace {

Rational R(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Polynomial poly(std::vector<long> c) {
  std::vector<Rational> q;
  for (long x : c) q.push_back(R(x));
  return Polynomial(q);
}

Polynomial random_poly(std::mt19937_64& rng, int max_degree) {
  std::vector<Rational> c;
  const int deg = static_cast<int>(rng() % (max_degree + 1));
  for (int i = 0; i <= deg; ++i) c.push_back(R(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 4)));
  return Polynomial(c);
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/6"), R(1, 2));
  EXPECT_EQ(parse_rational("-2"), R(-2));
  EXPECT_EQ(parse_rational("-4/8"), R(-1, 2));
  EXPECT_EQ(to_string(R(1, 2)), "1/2");
  EXPECT_EQ(to_string(R(1)), "1/1");
  EXPECT_EQ(to_string(R(0)), "0/1");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("a/2"), Error);
  EXPECT_THROW(parse_rational(""), Error);
  EXPECT_THROW(parse_rational("0.5"), Error);
  EXPECT_THROW(parse_rational("4/-8"), Error);
}

TEST(Polynomial, TrimsAndReportsDegree) {
  EXPECT_EQ(poly({1, 2, 0, 0}).degree(), 1);
  EXPECT_TRUE(poly({0, 0}).is_zero());
  EXPECT_EQ(poly({0, 0}).degree(), -1);
  EXPECT_EQ(poly({0, 0, 3}).order_at_zero(), 2U);
}

TEST(Polynomial, Arithmetic) {
  const Polynomial a = poly({1, 1});   // 1 + e
  const Polynomial b = poly({-1, 1});  // -1 + e
  EXPECT_EQ(a * b, poly({-1, 0, 1}));
  EXPECT_EQ(a + b, poly({0, 2}));
  EXPECT_EQ(a - a, Polynomial());
  EXPECT_EQ(a.evaluate(R(1, 2)), R(3, 2));
  const auto [quo, rem] = poly({-1, 0, 1}).divmod(a);
  EXPECT_EQ(quo, b);
  EXPECT_TRUE(rem.is_zero());
  EXPECT_EQ(gcd(poly({-1, 0, 1}), poly({2, 2})), a);
}

TEST(Polynomial, DivisionIdentityOnRandomInputs) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    const Polynomial a = random_poly(rng, 5);
    Polynomial d = random_poly(rng, 3);
    if (d.is_zero()) continue;
    const auto [quo, rem] = a.divmod(d);
    EXPECT_EQ(quo * d + rem, a);
    EXPECT_LT(rem.degree(), d.degree());
    const Polynomial g = gcd(a, d);
    if (!g.is_zero()) {
      EXPECT_TRUE(a.divmod(g).second.is_zero());
      EXPECT_TRUE(d.divmod(g).second.is_zero());
    }
  }
}

TEST(RationalFn, NormalizesCommonFactors) {
  const RationalFn r(poly({-1, 0, 1}), poly({2, 2}));  // (e^2 - 1) / (2e + 2)
  EXPECT_EQ(r, RationalFn(poly({-1, 1}).scaled(R(1, 2)), poly({1})));
  EXPECT_EQ(r.denominator().leading(), R(1));
  EXPECT_THROW(RationalFn(poly({1}), Polynomial()), Error);
}

TEST(RationalFn, FieldLawsOnRandomInputs) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const Polynomial an = random_poly(rng, 3);
    const Polynomial ad = random_poly(rng, 2);
    const Polynomial bn = random_poly(rng, 3);
    const Polynomial bd = random_poly(rng, 2);
    if (ad.is_zero() || bd.is_zero()) continue;
    const RationalFn a(an, ad);
    const RationalFn b(bn, bd);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) - b, a);
    if (!b.is_zero()) {
      EXPECT_EQ((a * b) / b, a);
    }
    // agrees with pointwise evaluation away from poles
    const Rational x = R(2, 7);
    if (ad.evaluate(x) != 0 && bd.evaluate(x) != 0) {
      EXPECT_EQ((a * b + a).evaluate(x), a.evaluate(x) * b.evaluate(x) + a.evaluate(x));
    }
  }
}

TEST(Limit, AtZero) {
  const RationalFn e = RationalFn::variable();
  EXPECT_EQ(limit_at_zero(e / (e + RationalFn(R(3)))), R(0));
  EXPECT_EQ(limit_at_zero((e * RationalFn(R(1, 4))) / (e * RationalFn(R(1, 2)))), R(1, 2));
  EXPECT_EQ(limit_at_zero(RationalFn(R(2, 3))), R(2, 3));
  EXPECT_EQ(limit_at_zero((e * e + e) / (e * RationalFn(R(3)))), R(1, 3));
  EXPECT_THROW(limit_at_zero(RationalFn(R(1)) / e), Error);
}
