#include "gwcert/field_spec.hpp"

#include <gtest/gtest.h>

using namespace gwcert;

TEST(FieldSpec, MinPolyIsLeadingFirst)
{
    auto fs = parse_field_spec(R"({"min_poly": ["1", "0", "-2"]})");
    ASSERT_EQ(fs.min_poly.size(), 3u);
    EXPECT_EQ(fs.min_poly[0], -2);
    EXPECT_EQ(fs.min_poly[2], 1);
    auto O = make_order(fs);
    EXPECT_EQ(O.degree(), 2);
    EXPECT_EQ(O.field().gen().norm(), -2);
}

TEST(FieldSpec, IntegerCoefficientsAndPrecision)
{
    auto fs = parse_field_spec(R"({"min_poly": [1, -1], "precision": 20})");
    EXPECT_EQ(fs.precision, 20);
    auto O = make_order(fs);
    EXPECT_EQ(O.degree(), 1);
    EXPECT_EQ(O.field().gen(), O.field().one());
}

TEST(FieldSpec, OptionalOrderData)
{
    auto fs = parse_field_spec(R"({
        "min_poly": ["1", "0", "0", "-2"],
        "integral_basis": ["1", "w", "w^2"],
        "prime_splittings": {"2": [{"e": 3, "f": 1, "alpha": "w", "uniformizer": [0, 1]}]},
        "fundamental_units": ["-1+w"],
        "torsion_order": 2,
        "class_bound": 3
    })");
    EXPECT_EQ(fs.order.integral_basis.size(), 3u);
    ASSERT_EQ(fs.order.prime_splittings.count(2), 1u);
    EXPECT_EQ(fs.order.prime_splittings.at(2)[0].e, 3);
    EXPECT_TRUE(fs.order.units_given);
    EXPECT_EQ(fs.order.torsion_order, 2);
    EXPECT_EQ(fs.order.class_bound, 3);
    auto O = make_order(fs);
    auto P = O.primes_above(2);
    ASSERT_EQ(P.size(), 1u);
    EXPECT_EQ(P[0].valuation(O.field().gen()), 1);
    EXPECT_EQ(P[0].valuation(O.field().from_rational(2)), 3);
}

TEST(FieldSpec, Errors)
{
    EXPECT_THROW(parse_field_spec("{"), Error);
    EXPECT_THROW(parse_field_spec(R"({"degree": 2})"), Error);
    EXPECT_THROW(parse_field_spec(R"({"min_poly": [true]})"), Error);
    EXPECT_THROW(load_field_spec("/nonexistent/field.json"), Error);
    EXPECT_THROW(make_order(parse_field_spec(R"({"min_poly": ["1", "0", "-4"]})")), Error);
}

TEST(FieldSpec, ShippedSpecsLoad)
{
    for (const char* name : {"specs/q.json", "specs/q_sqrt2.json", "specs/q_i.json"}) {
        auto path = std::string(GWCERT_SOURCE_DIR) + "/" + name;
        EXPECT_NO_THROW(make_order(load_field_spec(path))) << name;
    }
}
