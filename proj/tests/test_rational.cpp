#include <gtest/gtest.h>

#include "sedwalk/rational.hpp"

using sedwalk::Rational;
using sedwalk::Weight;

TEST(Rational, NormalizesSignAndCommonFactors) {
  Rational r(-2, -4);
  EXPECT_EQ(r.num(), 1);
  EXPECT_EQ(r.den(), 2);
  Rational s(3, -6);
  EXPECT_EQ(s.num(), -1);
  EXPECT_EQ(s.den(), 2);
  EXPECT_TRUE(Rational(8, 4).is_integer());
}

TEST(Rational, ArithmeticIsExact) {
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) - Rational(1, 2), Rational(-1, 6));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
  EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
  EXPECT_TRUE(Rational(1, 3) < Rational(1, 2));
}

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(*Rational::parse("7"), Rational(7));
  EXPECT_EQ(*Rational::parse("-3"), Rational(-3));
  EXPECT_EQ(*Rational::parse("2/5"), Rational(2, 5));
  EXPECT_EQ(*Rational::parse("0.125"), Rational(1, 8));
  EXPECT_FALSE(Rational::parse("1e3"));
  EXPECT_FALSE(Rational::parse("1/0"));
  EXPECT_FALSE(Rational::parse("abc"));
  EXPECT_FALSE(Rational::parse(""));
}

TEST(Rational, PrintsCanonicalForm) {
  EXPECT_EQ(Rational(6, 4).to_string(), "3/2");
  EXPECT_EQ(Rational(5).to_string(), "5");
}

TEST(Weight, ExactAndRealWeightsCompare) {
  Weight a(Rational(1, 2));
  EXPECT_TRUE(a.is_exact());
  EXPECT_DOUBLE_EQ(a.value(), 0.5);
  Weight b = Weight::real(0.5);
  EXPECT_FALSE(b.is_exact());
  EXPECT_TRUE(a.same_as(b));
  EXPECT_FALSE(a.same_as(Weight(Rational(1, 3))));
  EXPECT_TRUE((a * Weight(4)).is_exact());
  EXPECT_EQ(*(a * Weight(4)).exact(), Rational(2));
  EXPECT_FALSE((a * b).is_exact());
  EXPECT_EQ((a + Weight(1)).to_string(), "3/2");
}
