#include <doctest.h>

#include <random>

#include "support/gen.hpp"
#include "whitneypot/errors.hpp"
#include "whitneypot/laurent.hpp"

using namespace whitneypot;

namespace {

const std::vector<std::string> XY{"x", "y"};
const std::vector<std::string> PQT{"p", "q", "t"};

Laurent L(const char* s) { return parse_laurent(s, XY); }

}  // namespace

TEST_SUITE("laurent") {
  TEST_CASE("addition and scalar identities") {
    CHECK(L("x + y") + L("x - y") == L("2*x"));
    CHECK(L("x + x*y + x^-2*y^-1") + Laurent(2) == L("x + x*y + x^-2*y^-1"));
    CHECK(L("x^-1") + L("x^-1") == L("2*x^-1"));
    CHECK((L("x + y") - L("x + y")).is_zero());
  }

  TEST_CASE("multiplication") {
    CHECK(L("x") * L("x^-1") == L("1"));
    CHECK(L("1 + y") * L("1 - y") == L("1 - y^2"));
    CHECK((L("x + y") * Laurent(2)).is_zero());
    CHECK(pow(L("1 + y"), 3) == L("1 + 3*y + 3*y^2 + y^3"));
  }

  TEST_CASE("unimodular basis change") {
    CHECK(apply_unimodular(L("x"), Matrix2{{{0, -1}, {1, 0}}}) == L("y"));
    CHECK(apply_unimodular(L("x + x*y + x^-2*y^-1"), Matrix2{{{1, 0}, {0, 1}}}) == L("x + x*y + x^-2*y^-1"));
    CHECK_THROWS_AS(apply_unimodular(L("x"), Matrix2{{{1, 0}, {0, -1}}}), InvalidInput);
  }

  TEST_CASE("unit substitution") {
    const Laurent p = parse_laurent("p - q^2*t^-1", PQT);
    std::vector<UnitImage> images{{1, {1, 0}, 1}, {1, {-1, 0}, 0}, {-1, {0, 1}, 0}};
    Localized r = reduce(substitute_units(p, images, 1));
    CHECK(r.den_pow == 0);
    CHECK(r.numerator == L("x + x*y + x^-2*y^-1"));

    Localized s = reduce(substitute_units(L("x + x^-1"), {{1, {1, 0}, 1}, {1, {0, 1}, 0}}, 1));
    CHECK(s.den_pow == 1);
    CHECK(s.numerator == L("x + 2*x*y + x*y^2 + x^-1"));

    Localized c = substitute_units(L("1"), {{1, {1, 0}, 1}, {1, {0, 1}, 0}}, 1);
    CHECK(clear_denominator(c) == L("1"));
  }

  TEST_CASE("clearing denominators") {
    CHECK(clear_denominator({L("x + x*y"), 1, 1}) == L("x"));
    CHECK_THROWS_AS(clear_denominator({L("y"), 1, 1}), NotLaurent);
    CHECK(clear_denominator({L("y + x^3"), 1, 0}) == L("y + x^3"));
  }

  TEST_CASE("division by powers of 1+y") {
    CHECK(divide_by_unit_power(L("y^-1 + 2 + y"), 1, 1) == L("y^-1 + 1"));
    CHECK(divide_by_unit_power(L("1 + 2*y + y^2"), 1, 2) == L("1"));
    CHECK_THROWS_AS(divide_by_unit_power(L("y^-1"), 1, 1), NotDivisible);
    CHECK(unit_multiplicity(L("x + 3*x*y + 3*x*y^2 + x*y^3"), 1, 10) == 3);
  }

  TEST_CASE("coefficient extraction") {
    const Laurent p = L("x + x*y + x^-2*y^-1");
    CHECK(coeff_in(p, 0, 1) == parse_laurent("1 + y", {"y"}));
    CHECK(coeff_in(p, 0, -2) == parse_laurent("y^-1", {"y"}));
    CHECK(coeff_in(p, 0, 0).is_zero());
  }

  TEST_CASE("evaluation") {
    const Laurent t = parse_laurent("78*t^-4 + 225*t^-3 + 210*t^-2 + 68*t^-1 + 4", {"t"});
    CHECK(evaluate(t, {mpq_class(-1)}) == -1);
    CHECK(evaluate(L("1"), {mpq_class(3), mpq_class(5)}) == 1);
    CHECK_THROWS_AS(evaluate(L("x"), {mpq_class(0), mpq_class(1)}), InvalidInput);
  }

  TEST_CASE("Newton polygons") {
    NewtonPolygon a = newton_polytope(L("x + x*y + x^-2*y^-1"));
    CHECK(a.vertices.size() == 3);
    CHECK(a.side_lengths == std::vector<std::int64_t>{1, 1, 1});

    NewtonPolygon pt = newton_polytope(L("1"));
    REQUIRE(pt.vertices.size() == 1);
    CHECK(pt.vertices[0] == Point2{0, 0});

    NewtonPolygon seg = newton_polytope(L("x + x^3"));
    CHECK(seg.vertices.size() == 2);
    CHECK(seg.side_lengths == std::vector<std::int64_t>{2});
  }

  TEST_CASE("text and JSON round trips") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
      Laurent p = gen::laurent(rng, 3, 6, -4, 4, 30);
      CHECK(parse_laurent(to_text(p, PQT), PQT) == p);
      CHECK(laurent_from_json(to_json(p), 3) == p);
    }
    CHECK_THROWS_AS(parse_laurent("x + z", XY), InvalidInput);
  }

  TEST_CASE("ring laws on random polynomials") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
      Laurent a = gen::laurent(rng, 2, 4, -3, 3), b = gen::laurent(rng, 2, 4, -3, 3), c = gen::laurent(rng, 2, 4, -3, 3);
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a - a).is_zero());
    }
  }

  TEST_CASE("basis change is a ring map and invertible") {
    std::mt19937_64 rng(13);
    const Matrix2 m{{{2, 1}, {1, 1}}}, minv{{{1, -1}, {-1, 2}}};
    for (int i = 0; i < 50; ++i) {
      Laurent a = gen::laurent(rng, 2, 4, -3, 3), b = gen::laurent(rng, 2, 4, -3, 3);
      CHECK(apply_unimodular(a * b, m) == apply_unimodular(a, m) * apply_unimodular(b, m));
      CHECK(apply_unimodular(apply_unimodular(a, m), minv) == a);
    }
  }

  TEST_CASE("multiplying then dividing by (1+y)^k is the identity") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
      Laurent a = gen::laurent(rng, 2, 5, -3, 3);
      const auto k = gen::uniform(rng, 0, 4);
      Laurent b = multiply_by_unit_power(a, 1, k);
      CHECK(divide_by_unit_power(b, 1, k) == a);
      CHECK(unit_multiplicity(b, 1, 10) >= k);
    }
  }

  TEST_CASE("unit substitution agrees with pointwise evaluation") {
    std::mt19937_64 rng(15);
    const std::vector<UnitImage> images{{1, {1, 0}, 1}, {-1, {0, 1}, 0}};
    for (int i = 0; i < 50; ++i) {
      Laurent a = gen::laurent(rng, 2, 5, -3, 3);
      Localized f = substitute_units(a, images, 1);
      auto [x, y] = gen::curve_point(rng);
      if (y == -1) continue;
      mpq_class lhs = evaluate(f.numerator, {x, y});
      mpq_class den = 1;
      for (std::int64_t k = 0; k < f.den_pow; ++k) den *= 1 + y;
      mpq_class rhs = evaluate(a, {x * (1 + y), -y});
      CHECK(lhs / den == rhs);
    }
  }
}
