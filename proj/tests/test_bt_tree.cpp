#include "gwcert/bt_tree.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gwcert;

namespace {

struct RandomVertex {
    LatticeClass L;
    int A;
    Rational c;
};

// vertex (x, p^A) . L_0, i.e. the ball x + p^A Z_p
RandomVertex random_vertex(const BTTree& T, long long p, std::mt19937_64& g)
{
    std::uniform_int_distribution<int> n(-200, 200), d(1, 30), a(-4, 4);
    const auto& K = T.prime().uniformizer.field();
    Rational c(n(g), d(g));
    int A = a(g);
    auto y = K.from_rational(Rational(p)).pow(A);
    return {T.act(K.from_rational(c), y, T.identity()), A, c};
}

}  // namespace

TEST(BTTree, NormalFormExamples)
{
    MaximalOrder O(rational_field());
    const auto& Q = O.field();
    BTTree T(O.primes_above(5)[0]);
    auto five = Q.from_rational(5);
    EXPECT_EQ(T.normalize({Q.one(), Q.zero(), Q.zero(), Q.one()}), T.identity());
    EXPECT_EQ(T.normalize({five, Q.zero(), Q.zero(), five}), T.identity());
    auto L = T.normalize({five, Q.one(), Q.zero(), Q.one()});
    EXPECT_EQ(L.A, 1);
    EXPECT_EQ(L.corner, Q.one());
    EXPECT_EQ(T.normalize({five, Q.from_rational(6), Q.zero(), Q.one()}), L);
    EXPECT_THROW(T.normalize({Q.one(), Q.one(), Q.one(), Q.one()}), Error);
}

TEST(BTTree, DistanceMatchesBallModel)
{
    MaximalOrder O(rational_field());
    std::mt19937_64 g(1);
    for (long long p : {2LL, 3LL, 5LL}) {
        BTTree T(O.primes_above(p)[0]);
        for (int i = 0; i < 300; ++i) {
            auto x = random_vertex(T, p, g), y = random_vertex(T, p, g);
            EXPECT_EQ(T.distance(x.L, y.L), oracle::ball_distance(p, x.A, x.c, y.A, y.c));
            EXPECT_EQ(T.busemann(x.L), -x.A);
        }
    }
}

TEST(BTTree, NeighborsAndPaths)
{
    auto K = NumberField::from_poly({Rational(-2), Rational(0), Rational(1)});
    MaximalOrder O(K);
    std::vector<PrimeIdeal> primes{O.primes_above(2)[0], O.primes_above(3)[0]};
    for (auto& P : O.primes_above(7)) primes.push_back(P);
    std::mt19937_64 g(2);
    std::uniform_int_distribution<int> n(-20, 20), e(-3, 3);
    for (auto& P : primes) {
        BTTree T(P);
        auto nb = T.neighbors(T.identity());
        EXPECT_EQ(static_cast<long long>(nb.size()), P.norm() + 1);
        std::set<LatticeClass> uniq(nb.begin(), nb.end());
        EXPECT_EQ(uniq.size(), nb.size());
        for (auto& v : nb) EXPECT_EQ(T.distance(v, T.identity()), 1);
        for (int i = 0; i < 20; ++i) {
            auto x = K.element({Rational(n(g), 3), Rational(n(g), 2)});
            auto y = P.uniformizer.pow(e(g)) * (K.one() + K.gen() * K.from_rational(7));
            auto L = T.act(x, y, T.identity());
            auto path = T.path(T.identity(), L);
            ASSERT_EQ(static_cast<int>(path.size()), T.distance(T.identity(), L) + 1);
            for (size_t k = 0; k + 1 < path.size(); ++k) EXPECT_EQ(T.distance(path[k], path[k + 1]), 1);
        }
    }
}

TEST(BTTree, ActionIsByIsometries)
{
    MaximalOrder O(rational_field());
    const auto& Q = O.field();
    std::mt19937_64 g(3);
    std::uniform_int_distribution<int> n(-50, 50), d(1, 9);
    for (long long p : {2LL, 3LL}) {
        BTTree T(O.primes_above(p)[0]);
        for (int i = 0; i < 100; ++i) {
            auto a = random_vertex(T, p, g), b = random_vertex(T, p, g);
            auto x = Q.from_rational(Rational(n(g), d(g)));
            auto y = Q.from_rational(Rational(n(g) | 1, d(g)));
            EXPECT_EQ(T.distance(T.act(x, y, a.L), T.act(x, y, b.L)), T.distance(a.L, b.L));
            EXPECT_EQ(T.busemann(T.act(x, y, a.L)), T.busemann(a.L) - O.primes_above(p)[0].valuation(y));
        }
    }
}

TEST(BTTree, StandardLineBusemann)
{
    MaximalOrder O(rational_field());
    BTTree T(O.primes_above(3)[0]);
    for (int n = -8; n <= 8; ++n) EXPECT_EQ(T.busemann(T.standard(n)), n);
    EXPECT_EQ(T.standard(0), T.identity());
}

TEST(BTTree, DotExport)
{
    MaximalOrder O(rational_field());
    BTTree T(O.primes_above(2)[0]);
    auto s = T.dot(T.identity(), 2);
    EXPECT_EQ(s.rfind("graph T {", 0), 0u);
    auto count = [&](const std::string& needle) {
        size_t k = 0;
        for (size_t pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++k;
        return k;
    };
    // 1 + 3 + 6 vertices, 9 edges
    EXPECT_EQ(count("label="), 10u);
    EXPECT_EQ(count(" -- "), 9u);
}
