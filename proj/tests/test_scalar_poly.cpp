#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bn/polynomial.hpp"

using namespace bn;

TEST_CASE("gaussian rational field ops") {
    Scalar a(Rational(3, 2), Rational(-1));
    Scalar b(Rational(0), Rational(2));
    CHECK(a + b == Scalar(Rational(3, 2), Rational(1)));
    CHECK(a * b == Scalar(Rational(2), Rational(3)));
    CHECK(a / a == Scalar(1));
    CHECK((Scalar::i() * Scalar::i()) == Scalar(-1));
    CHECK(a.conj() * a == Scalar(a.norm()));
    CHECK(a - a == Scalar(0));
    CHECK(Scalar(0).is_zero());
    CHECK(!a.is_real());
    CHECK(Scalar(Rational(7, 3)).is_real());
}

TEST_CASE("to_string for scalars") {
    CHECK(to_string(Scalar(Rational(-5, 3))) == "-5/3");
    CHECK(to_string(Scalar(2)) == "2");
}

TEST_CASE("polynomial ring ops") {
    auto x1 = Polynomial::variable(2, 0);
    auto x2 = Polynomial::variable(2, 1);
    auto p = x1 * x1 + x2 * Scalar(3);  // x1^2 + 3 x2
    CHECK(p.derivative(0) == x1 * Scalar(2));
    CHECK(p.derivative(1) == Polynomial::constant(2, Scalar(3)));
    CHECK((p - p).is_zero());
    CHECK(p.total_degree() == 2);
    CHECK(p.eval({Scalar(2), Scalar(Rational(1, 3))}) == Scalar(5));
    // product rule
    auto q = x1 * x2 + Polynomial::constant(2, Scalar(1));
    CHECK((p * q).derivative(0) == p.derivative(0) * q + p * q.derivative(0));
}

TEST_CASE("polynomial parser accepts the grammar") {
    auto p = parse_polynomial("x1^2 - 2*x2 + 1/2", 2);
    CHECK(p.coeff({2, 0}) == Scalar(1));
    CHECK(p.coeff({0, 1}) == Scalar(-2));
    CHECK(p.coeff({0, 0}) == Scalar(Rational(1, 2)));
    CHECK(parse_polynomial("(x1 + x2)^2", 2) ==
          parse_polynomial("x1^2 + 2*x1*x2 + x2^2", 2));
    CHECK(parse_polynomial("-x1", 1) == -Polynomial::variable(1, 0));
    CHECK(parse_polynomial("0", 3).is_zero());
    CHECK(parse_polynomial("3/4*x3", 3).coeff({0, 0, 1}) == Scalar(Rational(3, 4)));
}

TEST_CASE("parser rejects malformed input with positions") {
    CHECK_THROWS_AS(parse_polynomial("x1 +", 2), BnError);
    CHECK_THROWS_AS(parse_polynomial("x3", 2), BnError);  // variable out of range
    CHECK_THROWS_AS(parse_polynomial("x0", 2), BnError);
    CHECK_THROWS_AS(parse_polynomial("1/0", 2), BnError);
    CHECK_THROWS_AS(parse_polynomial("(x1", 2), BnError);
    CHECK_THROWS_AS(parse_polynomial("x1 x2", 2), BnError);
    CHECK_THROWS_AS(parse_polynomial("", 2), BnError);
    try {
        parse_polynomial("x1 + @", 2);
        CHECK(false);
    } catch (const BnError& e) {
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}

TEST_CASE("to_string round-trips through the parser") {
    auto p = parse_polynomial("x1^3*x2 - 7/5*x2^2 + 4 - x1", 2);
    CHECK(parse_polynomial(p.to_string(), 2) == p);
}
