#include <catch_amalgamated.hpp>

#include <qidx/coeff.hpp>
#include <qidx/laurent.hpp>
#include <qidx/rational.hpp>

#include "properties.hpp"

using namespace qidx;

TEST_CASE("rational canonical form and printing", "[exactalg]")
{
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(-3, 6).str() == "-1/2");
    CHECK(Rational(3, -6).str() == "-1/2");
    CHECK(Rational(6, 3).str() == "2");
    CHECK(Rational(0, 5).str() == "0");
    CHECK(Rational(6, 3).is_integer());
    CHECK_FALSE(Rational(1, 3).is_integer());
    CHECK(Rational(-7, 2).sign() == -1);
    CHECK(Rational::parse("-10/4") == Rational(-5, 2));
    CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
    CHECK_THROWS(Rational(1, 0));
    CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("rational arithmetic", "[exactalg]")
{
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
    CHECK(pow(Rational(-2, 3), 3) == Rational(-8, 27));
    CHECK(pow(Rational(5), 0) == Rational(1));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
}

TEST_CASE("rational arithmetic agrees with a fraction oracle", "[exactalg][property]")
{
    const auto t = props::rational_field(2000, 7);
    INFO(t.first_failure);
    CHECK(t.cases == 2000);
    CHECK(t.ok());
}

TEST_CASE("monomials", "[exactalg]")
{
    const Monomial a = Monomial::unit(VarId::a), b = Monomial::unit(VarId::b, 2);
    CHECK(Monomial{}.is_one());
    CHECK((a * a.inverse()).is_one());
    CHECK((a * b)[VarId::b] == 2);
    CHECK(b.pow(-2)[VarId::b] == -4);
    CHECK((a.inverse() * b).str() == "ta^-1*tb^2");
    CHECK(Monomial{}.str() == "1");
    // lexicographic in (a, b, c, d) exponents, translation invariant
    CHECK(a.inverse() < Monomial{});
    CHECK(Monomial{} < a);
    CHECK(a.inverse() * b < b);
}

TEST_CASE("Laurent polynomial basics", "[exactalg]")
{
    const LaurentPoly ta = LaurentPoly::var(VarId::a), tb = LaurentPoly::var(VarId::b);
    const LaurentPoly one(1);
    CHECK((one - ta).str() == "1 - ta");
    CHECK((ta * ta - ta * LaurentPoly(2) + one).str() == "1 - 2*ta + ta^2");
    CHECK((ta + LaurentPoly::var(VarId::a, -1) - LaurentPoly(2)).str() == "ta^-1 - 2 + ta");
    CHECK((one + ta) * (one - ta) == one - ta * ta);
    CHECK(((ta + tb) * (ta - tb)).str() == "-tb^2 + ta^2");
    CHECK((ta - ta).is_zero());
    CHECK(LaurentPoly(0).str() == "0");
    CHECK(LaurentPoly(Rational(-1, 2)).str() == "-1/2");

    const LaurentPoly p = ta * ta * tb - ta * Rational(3) + LaurentPoly(5);
    CHECK(p.coefficient(Monomial::unit(VarId::a)) == Rational(-3));
    CHECK(p.coefficient(Monomial::unit(VarId::c)) == Rational(0));
    CHECK(lp_euler(p, VarId::a) == ta * ta * tb * Rational(2) - ta * Rational(3));
    CHECK(lp_euler(p, VarId::b) == ta * ta * tb);
    CHECK(lp_subst_unit(p, VarId::a, -1) == tb + LaurentPoly(8));
}

TEST_CASE("Laurent units and ring tags", "[exactalg]")
{
    const LaurentPoly ta = LaurentPoly::var(VarId::a);
    const auto u = lp_is_unit(ta * Rational(-3));
    REQUIRE(u);
    CHECK(u->second == Rational(-3));
    CHECK_FALSE(lp_is_unit(LaurentPoly(1) + ta));
    CHECK_FALSE(lp_is_unit(LaurentPoly(0)));
    const auto inv = ring_traits<LaurentPoly>::inverse(ta * Rational(2));
    REQUIRE(inv);
    CHECK(*inv * ta * Rational(2) == LaurentPoly(1));
    CHECK_FALSE(ring_traits<LaurentPoly>::inverse(LaurentPoly(1) + ta));
    CHECK_FALSE(ring_traits<Rational>::inverse(Rational(0)));
    CHECK(ring_traits<Rational>::unit(-1, Monomial{}) == Rational(-1));
    CHECK_THROWS_AS(ring_traits<Rational>::unit(1, Monomial::unit(VarId::a)), RingMismatch);
}

TEST_CASE("Laurent ring properties", "[exactalg][property]")
{
    const auto t = props::laurent_ring(1500, 3);
    INFO(t.first_failure);
    CHECK(t.cases == 1500);
    CHECK(t.ok());
}
