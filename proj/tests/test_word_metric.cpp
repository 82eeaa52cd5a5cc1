#include "gwcert/suites.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace gwcert;

namespace {

GwGroup w2()
{
    MaximalOrder O(rational_field());
    return GwGroup(OwRing(O, O.field().from_rational(2)));
}

}  // namespace

TEST(GwGroup, Law)
{
    auto G = w2();
    const auto& Q = G.ring().field();
    GwElement a{Q.from_rational(3), 2}, b{Q.from_rational(Rational(1, 2)), -1};
    auto ab = G.mul(a, b);
    EXPECT_EQ(ab.x, Q.from_rational(5));
    EXPECT_EQ(ab.z, 1);
    EXPECT_EQ(G.mul(a, G.inv(a)), G.identity());
    EXPECT_EQ(G.mul(G.inv(b), b), G.identity());
    EXPECT_THROW(G.element(Q.from_rational(Rational(1, 3)), 0), Error);
    EXPECT_NO_THROW(G.element(Q.from_rational(Rational(1, 64)), 0));
}

TEST(PowerSet, Examples)
{
    auto G = w2();
    GeneratingSet trivial{G.identity()};
    auto t = G.power_set(trivial, 3);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(GwGroup::m2_of(t), 0);
    auto S = G.standard_generators();
    EXPECT_EQ(S.size(), 5u);
    auto S1 = G.power_set(S, 1);
    EXPECT_EQ(S1.size(), 5u);
    EXPECT_EQ(GwGroup::m2_of(S1), 1);
    EXPECT_EQ(GwGroup::m2_of(G.power_set(S, 2)), 2);
    EXPECT_THROW(G.power_set(S, 6, 50), Error);
    auto g = G.element(G.ring().field().from_rational(7), 3);
    auto gen = G.sn_genuine(g, trivial, 2);
    ASSERT_EQ(gen.size(), 1u);
    EXPECT_EQ(gen[0], g);
}

TEST(WordLength, Examples)
{
    auto G = w2();
    auto S = G.standard_generators();
    const auto& Q = G.ring().field();
    EXPECT_EQ(G.word_length(G.identity(), S), 0);
    EXPECT_EQ(G.word_length({Q.from_rational(3), 1}, S), 3);
    EXPECT_EQ(G.word_length({Q.from_rational(1), 0}, S), 1);
    EXPECT_EQ(G.word_length({Q.from_rational(2), 0}, S), 2);
    EXPECT_EQ(G.word_length({Q.from_rational(2), 1}, S), 2);
    EXPECT_THROW(G.word_length({Q.from_rational(1000), 0}, S, 3), Error);
}

TEST(WordLength, AgreesWithReversedSearch)
{
    auto G = w2();
    auto S = G.standard_generators();
    auto ball = G.ball(S, 4);
    int k = 0;
    for (auto& [g, r] : ball) {
        if (k++ % 3) continue;
        EXPECT_EQ(r, oracle::reversed_word_length(G, S, g, 6));
        EXPECT_EQ(G.word_length(g, S), r);
    }
}

TEST(WordLength, MetricAxioms)
{
    MaximalOrder O(NumberField::from_poly({Rational(-2), Rational(0), Rational(1)}));
    GwGroup G(OwRing(O, O.field().gen()));
    auto r = word_suite(G, G.standard_generators(), 3, 300, 5);
    EXPECT_TRUE(r.passed());
    auto w = w2();
    auto r2 = word_suite(w, w.standard_generators(), 3, 300, 6);
    EXPECT_TRUE(r2.passed());
}
