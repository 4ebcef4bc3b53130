#include <catch2/catch_amalgamated.hpp>

#include "focs/generator.hpp"
#include "focs/rational.hpp"

using focs::ParseError;
using focs::Rat;
using focs::rat_from_string;
using focs::rat_pow;
using focs::rat_to_string;

TEST_CASE("decimal, integer and ratio literals parse exactly") {
  CHECK(rat_from_string("2") == Rat(2));
  CHECK(rat_from_string("-1.25") == Rat(-5, 4));
  CHECK(rat_from_string("4/3") == Rat(4, 3));
  CHECK(rat_from_string("0.5") == Rat(1, 2));
  CHECK(rat_from_string(" 7 ") == Rat(7));
  CHECK(rat_from_string("+0.125") == Rat(1, 8));
  CHECK(rat_from_string("0") == Rat(0));
}

TEST_CASE("malformed literals are rejected") {
  CHECK_THROWS_AS(rat_from_string(""), ParseError);
  CHECK_THROWS_AS(rat_from_string("1e3"), ParseError);
  CHECK_THROWS_AS(rat_from_string("1."), ParseError);
  CHECK_THROWS_AS(rat_from_string(".5"), ParseError);
  CHECK_THROWS_AS(rat_from_string("abc"), ParseError);
  CHECK_THROWS_AS(rat_from_string("1/0"), ParseError);
  CHECK_THROWS_AS(rat_from_string("1/2/3"), ParseError);
  CHECK_THROWS_AS(rat_from_string("--2"), ParseError);
}

TEST_CASE("formatting is exact decimal when terminating, num/den otherwise") {
  CHECK(rat_to_string(Rat(4, 3)) == "4/3");
  CHECK(rat_to_string(Rat(3, 2)) == "1.5");
  CHECK(rat_to_string(Rat(2)) == "2");
  CHECK(rat_to_string(Rat(-7, 20)) == "-0.35");
  CHECK(rat_to_string(Rat(1, 3)) == "1/3");
  CHECK(rat_to_string(Rat(0)) == "0");
  CHECK(rat_to_string(Rat(1, 8)) == "0.125");
  CHECK(rat_to_string(Rat(-10, 4)) == "-2.5");
  CHECK(rat_to_string(Rat(1, 100)) == "0.01");
}

TEST_CASE("parse inverts format for random rationals") {
  focs::SplitMix64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    long long num = static_cast<long long>(rng.below(20001)) - 10000;
    long long den = 1 + static_cast<long long>(rng.below(1000));
    Rat value(num, den);
    CHECK(rat_from_string(rat_to_string(value)) == value);
  }
}

TEST_CASE("integer powers") {
  CHECK(rat_pow(Rat(2, 3), 3) == Rat(8, 27));
  CHECK(rat_pow(Rat(5), 0) == Rat(1));
  CHECK(rat_pow(Rat(1, 2), -2) == Rat(4));
  CHECK(rat_pow(Rat(0), 4) == Rat(0));
  CHECK_THROWS_AS(rat_pow(Rat(0), -1), std::domain_error);
}
