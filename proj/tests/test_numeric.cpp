#include "hk/numeric.hpp"

#include <doctest.h>

using hk::BigInt;
using hk::Rational;

TEST_CASE("rational parsing and formatting round-trip") {
    CHECK(hk::parse_rational("3/4") == Rational(3) / 4);
    CHECK(hk::parse_rational("5") == Rational(5));
    CHECK(hk::parse_rational("-7/2") == Rational(-7) / 2);
    CHECK(hk::format_rational(hk::parse_rational("6/8")) == "3/4");
    CHECK(hk::format_rational(hk::parse_rational("1/-2")) == "-1/2");
    CHECK(hk::format_rational(Rational(42)) == "42");
    CHECK(hk::format_rational(Rational(0)) == "0");

    CHECK_THROWS_AS(hk::parse_rational("1/0"), hk::Error);
    CHECK_THROWS_AS(hk::parse_rational("abc"), hk::Error);
    CHECK_THROWS_AS(hk::parse_rational(""), hk::Error);
}

TEST_CASE("double formatting is shortest round-trip text") {
    CHECK(hk::format_double(0.1) == "0.1");
    CHECK(hk::format_double(0.5) == "0.5");
    CHECK(hk::format_double(-3.0) == "-3");
    double x = 1.0 / 3.0;
    CHECK(std::stod(hk::format_double(x)) == x);
}

TEST_CASE("rational from double is exact") {
    CHECK(hk::rational_from_double(0.5) == Rational(1) / 2);
    CHECK(hk::rational_from_double(0.1) != Rational(1) / 10);  // 0.1 is not dyadic
    CHECK(hk::to_double(hk::rational_from_double(0.1)) == 0.1);
}

TEST_CASE("bit length and bit budget") {
    CHECK(hk::bit_length(BigInt(0)) == 0);
    CHECK(hk::bit_length(BigInt(1)) == 1);
    CHECK(hk::bit_length(BigInt(255)) == 8);
    CHECK(hk::bit_length(BigInt(256)) == 9);
    CHECK(hk::bit_length(BigInt(-256)) == 9);

    CHECK_NOTHROW(hk::check_bit_budget(Rational(1) / 3, hk::kDefaultBitBudget));
    Rational huge(pow(BigInt(2), 5000));
    CHECK_THROWS_AS(hk::check_bit_budget(huge, hk::kDefaultBitBudget), hk::Error);
    try {
        hk::check_bit_budget(huge, hk::kDefaultBitBudget);
    } catch (const hk::Error& e) {
        CHECK(e.code() == hk::ErrorCode::Overflow);
    }
    CHECK_NOTHROW(hk::check_bit_budget(1e308, 4));  // no-op for doubles
}

TEST_CASE("integer roots and rational powers") {
    CHECK(hk::integer_root(BigInt(0), 2) == 0);
    CHECK(hk::integer_root(BigInt(15), 2) == 3);
    CHECK(hk::integer_root(BigInt(16), 2) == 4);
    CHECK(hk::integer_root(BigInt(80), 4) == 2);
    CHECK(hk::integer_root(BigInt(81), 4) == 3);
    CHECK(hk::integer_root(BigInt(1000000000000LL), 4) == 1000);
    CHECK(hk::integer_root(BigInt(40000), 3) == 34);

    CHECK(hk::floor_power(BigInt(60), BigInt(1), BigInt(1)) == 60);
    CHECK(hk::floor_power(BigInt(60), BigInt(1), BigInt(2)) == 7);
    CHECK(hk::ceil_power(BigInt(60), BigInt(1), BigInt(2)) == 8);
    CHECK(hk::floor_power(BigInt(81), BigInt(1), BigInt(4)) == 3);
    CHECK(hk::ceil_power(BigInt(81), BigInt(1), BigInt(4)) == 3);  // exact power
    CHECK(hk::ceil_power(BigInt(7), BigInt(0), BigInt(3)) == 1);

    // value > n^(p/q), exactly
    CHECK(hk::exceeds_power(Rational(8), BigInt(60), BigInt(1), BigInt(2)));
    CHECK_FALSE(hk::exceeds_power(Rational(7), BigInt(60), BigInt(1), BigInt(2)));
    CHECK_FALSE(hk::exceeds_power(Rational(3), BigInt(81), BigInt(1), BigInt(4)));  // equal
    CHECK(hk::exceeds_power(Rational(49) / 16, BigInt(9), BigInt(1), BigInt(1)) == false);
    CHECK(hk::exceeds_power(Rational(145) / 16, BigInt(9), BigInt(1), BigInt(1)));
    CHECK_FALSE(hk::exceeds_power(Rational(-5), BigInt(9), BigInt(1), BigInt(1)));
}

TEST_CASE("numeric mode names") {
    CHECK(hk::mode_from_string("rational") == hk::NumericMode::Rational);
    CHECK(hk::mode_from_string("float64") == hk::NumericMode::Float64);
    CHECK(hk::to_string(hk::NumericMode::Float64) == "float64");
    CHECK_THROWS_AS(hk::mode_from_string("float32"), hk::Error);
}

TEST_CASE("separation predicates") {
    using RT = hk::scalar_traits<Rational>;
    CHECK_FALSE(RT::separated(Rational(1)));
    CHECK(RT::separated(Rational(1000000000001LL) / 1000000000000LL));

    using DT = hk::scalar_traits<double>;
    CHECK_FALSE(DT::separated(1.0));
    CHECK_FALSE(DT::separated(1.0 + 5e-13));  // inside the 2^-40 slack
    CHECK(DT::separated(1.0 + 2e-12));
}

TEST_CASE("error text carries the code name") {
    hk::Error e(hk::ErrorCode::WrongM, "boom");
    CHECK(std::string(e.what()) == "WRONG_M: boom");
    CHECK(e.code() == hk::ErrorCode::WrongM);
}
