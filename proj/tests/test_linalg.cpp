#include <doctest.h>

#include "affract/linalg.hpp"
#include "test_support.hpp"

using namespace affract;
using testing::mat;

TEST_CASE("matrix product and powers") {
  Mat m1 = mat({{0, -1, -1}, {1, 2, 1}, {0, 0, 1}});
  Mat id = Mat::identity(3);
  CHECK(m1 * id == m1);
  CHECK(id * m1 == m1);
  CHECK(m1.pow(0) == id);
  CHECK(m1.pow(1) == m1);
  CHECK(m1.pow(3) == m1 * m1 * m1);
}

TEST_CASE("determinants") {
  CHECK(mat({{0, -1, -1}, {1, 2, 1}, {0, 0, 1}}).det() == 1);
  CHECK(mat({{1, 2}, {2, 4}}).det() == 0);
  CHECK(mat({{2, 1}, {1, 1}}).det() == 1);
  CHECK(Mat::identity(5).det() == 1);
}

TEST_CASE("rank") {
  CHECK(rank(mat({{1, 2}, {2, 4}})) == 1);
  CHECK(rank(mat({{1, 0, 3}, {0, 1, 1}})) == 2);
  CHECK(rank(Mat(2, 2)) == 0);
}

TEST_CASE("solve") {
  Mat a = mat({{2, 1}, {1, 1}});
  RatVec x = solve(a, {Rational(3), Rational(2)});
  CHECK(x == RatVec{Rational(1), Rational(1)});
  CHECK_THROWS_AS(solve(mat({{1, 2}, {2, 4}}), {Rational(1), Rational(1)}), std::domain_error);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("22/7") == Rational(22, 7));
  CHECK(parse_rational("-5") == Rational(-5));
  CHECK(parse_rational("4/6") == Rational(2, 3));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("decimal formatting rounds once, exactly") {
  CHECK(format_decimal(Rational(0)) == "0");
  CHECK(format_decimal(Rational(2)) == "2");
  CHECK(format_decimal(Rational(-5, 4)) == "-1.25");
  CHECK(format_decimal(Rational(1, 3)) == "0.333333");
  CHECK(format_decimal(Rational(2, 3)) == "0.666667");
  CHECK(format_decimal(Rational(-1, 3)) == "-0.333333");
  CHECK(format_decimal(Rational(1000001)) == "1000000");
  CHECK(format_decimal(Rational(9999995, 10000000)) == "1");
  CHECK(format_decimal(Rational(1, 10000)) == "0.0001");
  CHECK(format_decimal(Rational(123456789)) == "123457000");
  CHECK(format_decimal(Rational(1, 7), 3) == "0.143");
}
