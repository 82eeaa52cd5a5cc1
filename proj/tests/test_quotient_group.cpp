#include "gwcert/quotient_group.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace gwcert;

namespace {

struct Instance {
    MaximalOrder O;
    OwRing W;
};

Instance rational(const Rational& w)
{
    MaximalOrder O(rational_field());
    return {O, OwRing(O, O.field().from_rational(w))};
}

Instance sqrt2()
{
    MaximalOrder O(NumberField::from_poly({Rational(-2), Rational(0), Rational(1)}));
    return {O, OwRing(O, O.field().gen())};
}

// (x,0) g (x,0)^-1 = (x + a - w^b x, b)
bool conjugates_into_axis(const SemidirectGroup& F, long long x, const Subgroup& H)
{
    const auto& R = F.ring();
    for (auto g : H.elements) {
        long long a = F.a_of(g), b = F.b_of(g);
        if (R.add(R.add(x, a), R.neg(R.mul(R.pow(F.w_code(), b), x))) != 0) return false;
    }
    return true;
}

}  // namespace

TEST(QuotientGroup, Orders)
{
    auto I = rational(2);
    EXPECT_EQ(build_group(I.W, 5, 1).F.order(), 20);
    EXPECT_EQ(build_group(I.W, 5, 2).F.order(), 500);
    EXPECT_THROW(build_group(I.W, 5, 4, 50000), Error);
}

TEST(QuotientGroup, GroupAxioms)
{
    auto I = rational(2);
    auto G = build_group(I.W, 5, 2);
    const auto& F = G.F;
    for (long long g = 0; g < F.order(); g += 7)
        for (long long h = 0; h < F.order(); h += 11) {
            long long k = (g * 13 + h) % F.order();
            EXPECT_EQ(F.mul(F.mul(g, h), k), F.mul(g, F.mul(h, k)));
            EXPECT_EQ(F.mul(g, F.inv(g)), F.identity());
        }
    // (x, z) -> (x mod 25, z mod 20) is a homomorphism
    const auto& Q = I.O.field();
    for (int x1 = -3; x1 <= 3; ++x1)
        for (int z1 = -2; z1 <= 2; ++z1)
            for (int x2 = -2; x2 <= 2; ++x2)
                for (int z2 = -2; z2 <= 2; ++z2) {
                    auto a = Q.from_rational(Rational(x1, 4)), b = Q.from_rational(x2);
                    auto prod = a + Q.from_rational(2).pow(z1) * b;
                    EXPECT_EQ(G.alpha(prod, z1 + z2), F.mul(G.alpha(a, z1), G.alpha(b, z2)));
                }
}

TEST(Subgroups, SymmetricGroupOnThreeLetters)
{
    // Z/3 ⋊ Z/2 with w = -1
    auto I = rational(2);
    auto G = build_group(I.W, 3, 1);
    EXPECT_EQ(G.F.order(), 6);
    auto subs = enumerate_subgroups(G.F);
    EXPECT_EQ(subs.size(), 6u);
    for (auto& H : subs) EXPECT_TRUE(is_hyperelementary(G.F, H));
}

TEST(Subgroups, CountsMatchCensus)
{
    struct Case {
        Instance I;
        long long q;
        int m;
        int gens;
    };
    std::vector<Case> cases{{rational(2), 5, 1, 2}, {rational(2), 3, 2, 2}, {rational(2), 7, 1, 2},
                            {rational(Rational(3, 2)), 5, 1, 2}, {rational(Rational(3, 2)), 7, 1, 2},
                            {sqrt2(), 3, 1, 3}};
    for (auto& c : cases) {
        auto G = build_group(c.I.W, c.q, c.m);
        auto subs = enumerate_subgroups(G.F);
        EXPECT_EQ(subs.size(), oracle::census(G.F, c.gens)) << c.q << "^" << c.m;
        std::set<std::vector<long long>> uniq;
        for (auto& H : subs) {
            uniq.insert(H.elements);
            EXPECT_EQ(oracle::closure(G.F, H.generators), H.elements);
            EXPECT_EQ(G.F.order() % static_cast<long long>(H.order()), 0);
        }
        EXPECT_EQ(uniq.size(), subs.size());
    }
}

TEST(Subgroups, FrozenCounts)
{
    auto I = rational(2);
    auto G20 = build_group(I.W, 5, 1);
    auto G500 = build_group(I.W, 5, 2);
    EXPECT_EQ(enumerate_subgroups(G20.F).size(), 14u);
    EXPECT_EQ(enumerate_subgroups(G500.F).size(), 138u);
}

TEST(HyperElementary, Examples)
{
    auto I = rational(2);
    auto G = build_group(I.W, 5, 1);
    const auto& F = G.F;
    auto whole = closure(F, {F.make(1, 0), F.make(0, 1)});
    ASSERT_EQ(whole.order(), 20u);
    auto w = is_hyperelementary(F, whole);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->C.order(), 5u);
    EXPECT_EQ(w->p, 2);
    EXPECT_TRUE(oracle::hyperelementary_witness_ok(F, whole, *w));
    auto cyc = closure(F, {F.make(3, 1)});
    auto wc = is_hyperelementary(F, cyc);
    ASSERT_TRUE(wc);
    EXPECT_EQ(wc->C.elements, cyc.elements);

    // F_9 ⋊ Z/4 for w = sqrt 2: involutions are (a, 2) and products of two distinct ones have order 3,
    // so every subgroup of order 4 is cyclic
    auto S = sqrt2();
    auto G3 = build_group(S.W, 3, 1);
    int fours = 0;
    for (auto& H : enumerate_subgroups(G3.F)) {
        if (H.order() != 4) continue;
        ++fours;
        bool cyclic = false;
        for (auto h : H.elements) cyclic |= closure(G3.F, {h}).order() == 4;
        EXPECT_TRUE(cyclic);
        auto k = is_hyperelementary(G3.F, H);
        ASSERT_TRUE(k);
        EXPECT_TRUE(oracle::hyperelementary_witness_ok(G3.F, H, *k));
    }
    EXPECT_EQ(fours, 9);
}

TEST(HyperElementary, WitnessesAreValid)
{
    auto S = sqrt2();
    auto G = build_group(S.W, 3, 1);
    long long yes = 0;
    for (auto& H : enumerate_subgroups(G.F))
        if (auto w = is_hyperelementary(G.F, H)) {
            ++yes;
            EXPECT_TRUE(oracle::hyperelementary_witness_ok(G.F, H, *w));
        }
    EXPECT_EQ(yes, 36);
}

TEST(Classify, Examples)
{
    auto I = rational(2);
    auto G = build_group(I.W, 5, 1);
    const auto& F = G.F;
    auto axis = closure(F, {F.make(0, 1)});
    auto v = classify_hyperelementary(G, axis);
    EXPECT_EQ(v.primary, HypCase::ConjugateToCyclic);
    EXPECT_EQ(v.conjugator, 0);
    EXPECT_TRUE(v.verified);
    auto sylow = closure(F, {F.make(1, 0)});
    auto vs = classify_hyperelementary(G, sylow);
    EXPECT_EQ(vs.primary, HypCase::InKernel);
    // (a, b) with b outside t1 Z: x = a (w^b - 1)^-1
    const auto& R = F.ring();
    for (long long a = 1; a < 5; ++a)
        for (long long b : {1LL, 2LL, 3LL}) {
            auto H = closure(F, {F.make(a, b)});
            auto c = classify_hyperelementary(G, H);
            ASSERT_EQ(c.primary, HypCase::ConjugateToCyclic);
            long long expect = R.mul(a, R.inv(R.add(R.pow(F.w_code(), b), R.neg(R.one()))));
            EXPECT_EQ(c.conjugator, expect);
        }
}

TEST(Classify, EveryVerdictChecksOut)
{
    std::vector<std::pair<QuotientGroup, std::string>> groups;
    auto I = rational(2);
    groups.push_back({build_group(I.W, 5, 2), "2 mod 25"});
    auto J = rational(Rational(3, 2));
    groups.push_back({build_group(J.W, 7, 1), "3/2 mod 7"});
    auto S = sqrt2();
    for (auto& P : S.O.primes_above(7)) groups.push_back({build_prime_group(S.W, P, 1), P.label()});
    groups.push_back({build_group(S.W, 3, 1), "sqrt2 mod 3"});
    std::map<std::string, std::array<int, 3>> tally;
    for (auto& [G, name] : groups) {
        const auto& F = G.F;
        long long t = F.t(), t1 = G.components[0].t1;
        for (auto& H : enumerate_subgroups(F)) {
            if (!is_hyperelementary(F, H)) {
                EXPECT_THROW(classify_hyperelementary(G, H), Error);
                continue;
            }
            auto v = classify_hyperelementary(G, H);
            ASSERT_TRUE(v.verified) << name;
            ASSERT_NE(v.primary, HypCase::NotClassifiable) << name;
            if (v.conjugate) EXPECT_TRUE(conjugates_into_axis(F, v.conjugator, H));
            bool kern = true, prime = true;
            for (auto h : H.elements) {
                kern &= F.b_of(h) % t1 == 0;
                prime &= F.b_of(h) % (t / t1) == 0;
            }
            EXPECT_EQ(v.in_kernel, kern);
            EXPECT_EQ(v.in_prime_to_q, prime);
            ++tally[name][static_cast<int>(v.primary)];
        }
    }
    EXPECT_EQ(tally["2 mod 25"], (std::array<int, 3>{106, 8, 12}));
}

TEST(Conjugator, SinglePrime)
{
    auto I = rational(2);
    auto G = build_group(I.W, 5, 2);
    const auto& F = G.F;
    EXPECT_EQ(index_bound(G), 4);
    for (long long a = 1; a < 25; a += 3) {
        auto H = closure(F, {F.make(a, 1)});
        auto c = find_conjugator_into_cyclic(G, H);
        EXPECT_TRUE(c.verified);
        EXPECT_EQ(c.index, 1);
        EXPECT_TRUE(conjugates_into_axis(F, c.x, H));
    }
    auto wide = closure(F, {F.make(1, 0)});
    EXPECT_THROW(find_conjugator_into_cyclic(G, wide), Error);
}

TEST(Conjugator, SplitPrimeUsesCrt)
{
    auto S = sqrt2();
    auto G = build_group(S.W, 7, 2, 200000);
    ASSERT_EQ(G.components.size(), 2u);
    EXPECT_EQ(index_bound(G), 3);
    const auto& F = G.F;
    for (long long a : {5LL, 17LL, 400LL}) {
        auto H = closure(F, {F.make(a, 1)});
        auto c = find_conjugator_into_cyclic(G, H);
        EXPECT_TRUE(c.verified);
        EXPECT_EQ(c.component_x.size(), 2u);
        EXPECT_TRUE(conjugates_into_axis(F, c.x, H));
    }
}
