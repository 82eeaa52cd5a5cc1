#include "gwcert/numberfield.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gwcert;

namespace {

NumberField quad(long long d) { return NumberField::from_poly({Rational(-d), Rational(0), Rational(1)}); }

Rational rnd(std::mt19937_64& g)
{
    std::uniform_int_distribution<int> n(-30, 30), d(1, 7);
    return Rational(n(g), d(g));
}

}  // namespace

TEST(NumberField, RationalField)
{
    auto K = NumberField::from_poly({Rational(-2), Rational(1)});
    EXPECT_EQ(K.degree(), 1);
    EXPECT_EQ(K.real_embeddings(), 1);
    EXPECT_NEAR(K.embeddings()[0].approx().real(), 2.0, 1e-12);
}

TEST(NumberField, RealQuadraticEmbeddings)
{
    auto K = quad(2);
    ASSERT_EQ(K.real_embeddings(), 2);
    std::vector<double> r;
    for (auto& e : K.embeddings()) r.push_back(e.approx().real());
    std::sort(r.begin(), r.end());
    EXPECT_NEAR(r[0], -1.4142135623730951, 1e-10);
    EXPECT_NEAR(r[1], 1.4142135623730951, 1e-10);
    for (auto& e : K.embeddings()) EXPECT_NEAR((e.root * e.root).real().convert_to<double>(), 2.0, 1e-12);
}

TEST(NumberField, GaussianEmbeddingsArePaired)
{
    auto K = quad(-1);
    EXPECT_EQ(K.real_embeddings(), 0);
    EXPECT_EQ(K.complex_pairs(), 1);
    const auto& e = K.embeddings();
    EXPECT_EQ(e[0].conjugate_index, 1);
    EXPECT_EQ(e[1].conjugate_index, 0);
    EXPECT_NEAR(std::abs(e[0].approx().imag()), 1.0, 1e-12);
    EXPECT_NEAR(e[0].approx().imag(), -e[1].approx().imag(), 1e-12);
    EXPECT_EQ(K.embedding_classes().size(), 1u);
}

TEST(NumberField, RejectsBadPolynomials)
{
    EXPECT_THROW(NumberField::from_poly({Rational(-4), Rational(0), Rational(1)}), Error);
    EXPECT_THROW(NumberField::from_poly({Rational(-2), Rational(0), Rational(3)}), Error);
    EXPECT_THROW(NumberField::from_poly({Rational(1)}), Error);
}

TEST(NumberField, SmallIdentities)
{
    auto K = quad(2);
    auto w = K.gen();
    EXPECT_TRUE(((K.one() + w) * (w - K.one())).is_one());
    auto inv = w.inverse();
    EXPECT_EQ(inv.coeffs()[0], 0);
    EXPECT_EQ(inv.coeffs()[1], Rational(1, 2));
    auto a = K.parse("3/4-5*w");
    EXPECT_EQ(a + K.zero(), a);
    EXPECT_THROW(K.zero().inverse(), Error);
}

TEST(NumberField, NormAndTrace)
{
    auto K = quad(2);
    auto two = K.from_rational(2);
    EXPECT_EQ(two.norm(), 4);
    EXPECT_EQ(two.trace(), 4);
    EXPECT_EQ(K.gen().norm(), -2);
    EXPECT_EQ(K.gen().trace(), 0);
    auto u = K.one() + K.gen();
    EXPECT_EQ(u.norm(), -1);
    EXPECT_EQ(u.trace(), 2);
}

// (a + b r)(c + e r) with r^2 = d written out by hand
TEST(NumberField, QuadraticArithmeticMatchesPairs)
{
    std::mt19937_64 g(7);
    for (long long d : {2LL, 3LL, -1LL, -7LL}) {
        auto K = quad(d);
        for (int i = 0; i < 300; ++i) {
            Rational a = rnd(g), b = rnd(g), c = rnd(g), e = rnd(g);
            auto x = K.element({a, b}), y = K.element({c, e});
            auto p = x * y;
            EXPECT_EQ(p.coeffs()[0], a * c + b * e * d);
            EXPECT_EQ(p.coeffs()[1], a * e + b * c);
            EXPECT_EQ(x.norm(), a * a - Rational(d) * b * b);
            if (!x.is_zero()) EXPECT_TRUE((x * x.inverse()).is_one());
            auto s = x - y;
            EXPECT_EQ(s.coeffs()[1], b - e);
        }
    }
}

TEST(NumberField, CubicNormIsProductOfEmbeddings)
{
    auto K = NumberField::from_poly({Rational(-2), Rational(0), Rational(0), Rational(1)});
    std::mt19937_64 g(3);
    for (int i = 0; i < 100; ++i) {
        auto x = K.element({rnd(g), rnd(g), rnd(g)});
        if (x.is_zero()) continue;
        std::complex<double> prod = 1;
        for (int k = 0; k < 3; ++k) prod *= x.embed_d(k);
        double n = x.norm().convert_to<double>();
        EXPECT_NEAR(prod.real(), n, 1e-9 * std::max(1.0, std::abs(n)));
        EXPECT_TRUE((x * x.inverse()).is_one());
        EXPECT_EQ(x.pow(3), x * x * x);
        EXPECT_EQ(x.pow(-2) * x.pow(2), K.one());
    }
}

TEST(NumberField, ParsePrintRoundTrip)
{
    auto K = quad(2);
    std::mt19937_64 g(11);
    for (int i = 0; i < 200; ++i) {
        auto x = K.element({rnd(g), rnd(g)});
        EXPECT_EQ(K.parse(x.str()), x);
    }
    EXPECT_THROW(K.parse("1+*"), Error);
    EXPECT_THROW(K.parse(""), Error);
}
