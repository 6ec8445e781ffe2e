#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairdiv/rational.hpp"

#include <random>

using fairdiv::BigInt;
using fairdiv::Rational;

TEST_CASE("construction normalizes to lowest terms, positive denominator") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(0, 7).den() == 1);
    CHECK(Rational(6, 3).str() == "2");
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("arithmetic is exact") {
    CHECK(Rational(19, 72) + Rational(17, 72) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 6) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) / Rational(1, 6) == Rational(3));
    CHECK((-Rational(1, 2)).str() == "-1/2");
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::invalid_argument);
    // denominators compound without precision loss
    Rational x(1, 72);
    Rational y(1, 129);
    Rational z(1, 216);
    CHECK((x + y + z) * Rational(72 * 129 * 216) ==
          Rational(129 * 216 + 72 * 216 + 72 * 129));
}

TEST_CASE("ordering is total and consistent") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(0));
    CHECK(Rational(7, 3) > Rational(2));
    CHECK(Rational(2, 6) <= Rational(1, 3));
    CHECK(Rational(2, 6) >= Rational(1, 3));
    CHECK(fairdiv::max(Rational(1, 3), Rational(1, 2)) == Rational(1, 2));
    CHECK(fairdiv::min(Rational(1, 3), Rational(1, 2)) == Rational(1, 3));
    CHECK(fairdiv::abs(Rational(-3, 4)) == Rational(3, 4));
}

TEST_CASE("parse accepts p and p/q, rejects everything else") {
    CHECK(Rational::parse("19/72") == Rational(19, 72));
    CHECK(Rational::parse("-3") == Rational(-3));
    CHECK(Rational::parse("+4/2") == Rational(2));
    CHECK(Rational::parse("0") == Rational(0));
    for (const char* bad : {"1/0", "1/-2", "a", "1.5", "", "1/", "/2", "1//2", "2/+3", "- 1"})
        CHECK_THROWS_AS(Rational::parse(bad), std::invalid_argument);
}

TEST_CASE("str round-trips through parse") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        Rational x(static_cast<long long>(rng() % 2001) - 1000,
                   static_cast<long long>(rng() % 999) + 1);
        CHECK(Rational::parse(x.str()) == x);
    }
}

TEST_CASE("field laws on randomized triples") {
    std::mt19937_64 rng(11);
    auto draw = [&] {
        return Rational(static_cast<long long>(rng() % 41) - 20,
                        static_cast<long long>(rng() % 20) + 1);
    };
    for (int it = 0; it < 300; ++it) {
        Rational a = draw(), b = draw(), c = draw();
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == Rational(0));
    }
}

TEST_CASE("to_double is close (display only)") {
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
    CHECK(Rational(-7, 2).to_double() == doctest::Approx(-3.5));
}
