#include <doctest.h>

#include <random>

#include "support/gen.hpp"
#include "support/reference_table.hpp"
#include "whitneypot/errors.hpp"
#include "whitneypot/sphere.hpp"

using namespace whitneypot;

namespace {

const std::vector<std::string> XY{"x", "y"};

Laurent raw(const char* s) { return parse_laurent(s, raw_names()); }

// Coefficients of W(p, q, -t) in the reference representation.
reference::Poly as_table(const SpherePotential& internal) {
  const SpherePotential s = negate_t(internal);
  reference::Poly out;
  for (const auto& [k, poly] : s.p_part)
    for (const auto& [e, c] : poly.terms()) out[{static_cast<int>(k), 0, static_cast<int>(e[0])}] = c.get_si();
  for (const auto& [k, poly] : s.q_part)
    for (const auto& [e, c] : poly.terms()) out[{0, static_cast<int>(k), static_cast<int>(e[0])}] = c.get_si();
  for (const auto& [e, c] : s.constant.terms()) out[{0, 0, static_cast<int>(e[0])}] = c.get_si();
  return out;
}

Triple triple(const std::array<int, 3>& a) { return {a[0], a[1], a[2]}; }

}  // namespace

TEST_SUITE("sphere") {
  TEST_CASE("reference parser sanity") {
    auto p = reference::parse("2 p^{16} t \\left(858+300t+5 t^2\\right)");
    CHECK(p.size() == 3);
    CHECK(p.at({16, 0, 1}) == 1716);
    CHECK(p.at({16, 0, 3}) == 10);
    CHECK(reference::parse("q^{29}{t^{-4}}").at({0, 29, -4}) == 1);
  }

  TEST_CASE("all published sphere potentials are reproduced") {
    for (const auto& row : reference::rows()) {
      CAPTURE(row.label);
      const SpherePotential s = whitney_potential(triple(row.lower), triple(row.upper));
      CHECK(pair_label(triple(row.lower), triple(row.upper)) == row.label);
      CHECK(as_table(s) == reference::parse(row.latex));
    }
  }

  TEST_CASE("normal form examples") {
    CHECK(to_raw(normal_form(raw("p^2*q"))) == raw("p - p*t"));
    CHECK(to_raw(normal_form(raw("p*q*t"))) == raw("t - t^2"));
    CHECK_THROWS_AS(nf_reduce(raw("p*q*t")), CongruenceViolation);
    CHECK(to_raw(nf_reduce(raw("p - q^2*t^-1"))) == raw("p - q^2*t^-1"));
  }

  TEST_CASE("collapse and resolve examples") {
    SpherePotential s = collapse(parse_laurent("x + x*y + x^-2*y^-1", XY), Variant::k12);
    CHECK(to_raw(s) == raw("p - q^2*t^-1"));
    CHECK(emit_table_text(s) == "p + q^2 t^-1");
    CHECK_THROWS_AS(collapse(parse_laurent("x + y + x^-1*y^-1", XY), Variant::k11), NotDivisible);

    const SpherePotential base = nf_reduce(raw("p - q^2*t^-1"));
    CHECK(resolve(base, Variant::k12) == parse_laurent("x + x*y + x^-2*y^-1", XY));
    CHECK(resolve(base, Variant::k11) == parse_laurent("x + x^-2*y^-1 + 2*x^-2 + x^-2*y", XY));
  }

  TEST_CASE("emitters") {
    CHECK(emit_table_text(SpherePotential{}).empty());
    CHECK(emit_table_text(normal_form(raw("-p*t^-1"))) == "p t^-1");
    CHECK(emit_table_latex(nf_reduce(raw("p - q^2*t^-1"))) == "p+q^{2} t^{-1}");
    const SpherePotential s = whitney_potential({1, 2, 5}, {1, 5, 13});
    CHECK(emit_table_text(s) ==
          "p (5 + 4 t) t^-2 + 2 p^4 (5 + t) t^-3 + 10 p^7 t^-4 + 5 p^10 t^-5 + p^13 t^-6 + q^2 t^-1");
  }

  TEST_CASE("JSON round trip in both conventions") {
    const SpherePotential s = whitney_potential({1, 5, 13}, {1, 13, 34});
    CHECK(sphere_from_json(sphere_to_json(s, true)) == s);
    CHECK(sphere_from_json(sphere_to_json(s, false)) == s);
  }

  TEST_CASE("sheet swap and congruence") {
    const SpherePotential s = nf_reduce(raw("p - q^2*t^-1"));
    CHECK(satisfies_congruence(s));
    CHECK_FALSE(satisfies_congruence(swap_sheets(s)));
    CHECK(canonical_sheets(swap_sheets(s)) == s);
    CHECK_THROWS_AS(canonical_sheets(normal_form(raw("p + q"))), CongruenceViolation);
  }

  TEST_CASE("adjacency is required") {
    CHECK_THROWS_AS(whitney_potential({1, 1, 1}, {1, 2, 5}), InvalidInput);
  }

  TEST_CASE("collapse inverts resolve on random potentials") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 200; ++i) {
      const SpherePotential s = gen::sphere(rng);
      for (Variant v : {Variant::k11, Variant::k12})
        for (Spin spin : {Spin::bounding, Spin::non_bounding}) CHECK(collapse(resolve(s, v, spin), v, spin) == s);
    }
  }

  TEST_CASE("normal form is idempotent and agrees with the evaluation oracle") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
      const Laurent a = gen::raw_element(rng, 6, true);
      const Laurent b = gen::raw_element(rng, 4, false);
      const SpherePotential na = nf_reduce(a);
      CHECK(nf_reduce(to_raw(na)) == na);
      CHECK(normal_form(to_raw(normal_form(b))) == normal_form(b));
      for (int k = 0; k < 50; ++k) {
        auto [p, q] = gen::curve_point(rng);
        CHECK(evaluate_on_curve(na, p, q) == evaluate_raw_on_curve(a, p, q));
        CHECK(evaluate_on_curve(normal_form(a * b), p, q) ==
              evaluate_raw_on_curve(a, p, q) * evaluate_raw_on_curve(b, p, q));
        CHECK(evaluate_on_curve(normal_form(a + b), p, q) ==
              evaluate_raw_on_curve(a, p, q) + evaluate_raw_on_curve(b, p, q));
      }
    }
  }

  TEST_CASE("resolution is compatible with evaluation") {
    // On the curve t = 1 - pq, variant 12 sends p -> (1+y)x, q -> x^-1, t -> -y.
    std::mt19937_64 rng(43);
    for (int i = 0; i < 50; ++i) {
      const SpherePotential s = gen::sphere(rng);
      const Laurent w = resolve(s, Variant::k12);
      auto [x, y] = gen::curve_point(rng);
      if (y == -1) continue;
      CHECK(evaluate(w, {x, y}) == evaluate_on_curve(s, (1 + y) * x, 1 / x));
    }
  }
}
