#include <doctest.h>

#include <cmath>
#include <limits>

#include "sievelab/number.hpp"
#include "sievelab/parallel.hpp"
#include "sievelab/summation.hpp"

using namespace sievelab;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("10/9") == Rational(10, 9));
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(parse_rational("42") == Rational(42));
  CHECK(parse_rational("+7") == Rational(7));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("0.001") == Rational(1, 1000));
  CHECK(parse_rational("-.5") == Rational(-1, 2));
}

TEST_CASE("parse_rational rejects malformed text") {
  for (const char* bad : {"", "1/0", "abc", "1.", "1/2/3", "1e5", "3/x", "."})
    CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
}

TEST_CASE("to_string prints canonical p/q") {
  CHECK(to_string(Rational(10, 9)) == "10/9");
  CHECK(to_string(Rational(4) / 2) == "2");
  CHECK(to_string(Rational(-1, 2)) == "-1/2");
  CHECK(to_string(parse_rational(to_string(Rational(-123456789, 1000)))) == "-123456789/1000");
}

TEST_CASE("to_integer and to_rational cover the int128 range") {
  const __int128 big = static_cast<__int128>(1) << 100;
  CHECK(to_integer(big).get_str() == "1267650600228229401496703205376");
  CHECK(to_integer(-big).get_str() == "-1267650600228229401496703205376");
  const __int128 most_negative = -(static_cast<__int128>(1) << 126) * 2;
  CHECK(to_integer(most_negative).get_str() == "-170141183460469231731687303715884105728");
  CHECK(to_rational(6, -4) == Rational(-3, 2));
  CHECK_THROWS_AS(to_rational(1, 0), std::domain_error);
}

TEST_CASE("to_double rounds to nearest") {
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(Rational(2, 3)) == 2.0 / 3.0);
  CHECK(to_double(Rational(-2, 3)) == -2.0 / 3.0);
  CHECK(to_double(Rational(1, 10)) == 0.1);
  CHECK(to_double(Rational(10, 9)) == 10.0 / 9.0);
}

TEST_CASE("Number keeps the exact part while both operands have one") {
  const Number a(Rational(1, 3)), b(Rational(1, 6));
  CHECK((a + b).exact() == Rational(1, 2));
  CHECK((a - b).exact() == Rational(1, 6));
  CHECK((a * b).exact() == Rational(1, 18));
  CHECK((-a).exact() == Rational(-1, 3));
  CHECK(abs(-a).exact() == Rational(1, 3));
  const Number c(0.25);
  CHECK_FALSE((a + c).is_exact());
  CHECK((a + c).approx() == doctest::Approx(1.0 / 3.0 + 0.25));
  CHECK_THROWS_AS(c.exact(), std::logic_error);
  CHECK(a.to_string() == "1/3");
  CHECK(c.to_string() == "0.25");
  CHECK_FALSE(Number(Rational(1, 4)) == c);
  CHECK(Number(0.5) == Number(0.5));
}

TEST_CASE("modes round-trip through text") {
  CHECK(parse_mode("exact") == Mode::exact);
  CHECK(parse_mode("float") == Mode::floating);
  CHECK(to_string(Mode::floating) == "float");
  CHECK_THROWS_AS(parse_mode("double"), std::invalid_argument);
}

TEST_CASE("worker count parsing") {
  CHECK(parse_worker_count("4") == 4);
  CHECK_THROWS_AS(parse_worker_count("0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_worker_count("-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_worker_count("two"), std::invalid_argument);
  CHECK(worker_count() >= 1);
}

TEST_CASE("parallel_for visits every index once and rethrows the lowest failure") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}

TEST_CASE("compensated and pairwise sums") {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
  std::vector<double> v(10000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(1000.0).epsilon(1e-14));
  CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
}
