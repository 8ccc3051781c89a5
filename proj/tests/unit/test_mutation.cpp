#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "support/gen.hpp"
#include "whitneypot/errors.hpp"
#include "whitneypot/mutation.hpp"
#include "whitneypot/verify.hpp"

using namespace whitneypot;

namespace {

std::vector<std::int64_t> sorted_sides(const Laurent& w) {
  auto np = newton_polytope(w);
  auto v = np.cone_indices;
  std::sort(v.begin(), v.end());
  return v;
}

// Brute force: is there an integer matrix of determinant +-1 carrying the
// monomials of a onto those of b with the same coefficients?
bool lattice_equivalent(const Laurent& a, const Laurent& b) {
  std::map<std::array<std::int64_t, 2>, mpz_class> ta, tb;
  for (const auto& [e, c] : a.terms()) ta[{e[0], e[1]}] = c;
  for (const auto& [e, c] : b.terms()) tb[{e[0], e[1]}] = c;
  if (ta.size() != tb.size()) return false;
  std::vector<std::array<std::int64_t, 2>> ea;
  for (const auto& [e, c] : ta) ea.push_back(e);
  // two independent exponents of a
  std::size_t j = 1;
  while (j < ea.size() && ea[0][0] * ea[j][1] - ea[0][1] * ea[j][0] == 0) ++j;
  if (j == ea.size()) return ta == tb;
  const auto u = ea[0], v = ea[j];
  const std::int64_t d = u[0] * v[1] - u[1] * v[0];
  for (const auto& [u2, cu] : tb)
    for (const auto& [v2, cv] : tb) {
      if (cu != ta[u] || cv != ta[v]) continue;
      // M [u v] = [u2 v2]  =>  M = [u2 v2] adj([u v]) / d
      const std::int64_t m00 = u2[0] * v[1] - v2[0] * u[1], m01 = -u2[0] * v[0] + v2[0] * u[0];
      const std::int64_t m10 = u2[1] * v[1] - v2[1] * u[1], m11 = -u2[1] * v[0] + v2[1] * u[0];
      if (m00 % d || m01 % d || m10 % d || m11 % d) continue;
      const std::int64_t a00 = m00 / d, a01 = m01 / d, a10 = m10 / d, a11 = m11 / d;
      if (std::abs(a00 * a11 - a01 * a10) != 1) continue;
      std::map<std::array<std::int64_t, 2>, mpz_class> img;
      for (const auto& [e, c] : ta) img[{a00 * e[0] + a01 * e[1], a10 * e[0] + a11 * e[1]}] = c;
      if (img == tb) return true;
    }
  return false;
}

}  // namespace

TEST_SUITE("mutation") {
  TEST_CASE("initial seed") {
    Seed s = initial_seed();
    CHECK(s.triple == Triple{1, 1, 1});
    auto np = newton_polytope(s.potential);
    CHECK(np.vertices.size() == 3);
    CHECK(np.side_lengths == std::vector<std::int64_t>{1, 1, 1});
    // The three disk classes are orthogonal to (1,-2), (1,1), (-2,1).
    const std::array<Vec2, 3> normals{Vec2{1, -2}, Vec2{1, 1}, Vec2{-2, 1}};
    for (int j = 0; j < 3; ++j) CHECK(s.classes[j][0] * normals[j][0] + s.classes[j][1] * normals[j][1] == 0);
  }

  TEST_CASE("calibrated candidate potential has the unit triangle") {
    auto np = newton_polytope(parse_laurent("x + x*y + x^-2*y^-1", {"x", "y"}));
    REQUIRE(np.vertices.size() == 3);
    std::set<Point2> v(np.vertices.begin(), np.vertices.end());
    CHECK(v == std::set<Point2>{{1, 0}, {1, 1}, {-2, -1}});
    CHECK(np.side_lengths == std::vector<std::int64_t>{1, 1, 1});
  }

  TEST_CASE("normalizing matrices") {
    CHECK(normalizing_matrix({0, 1}) == Matrix2{{{1, 0}, {0, 1}}});
    CHECK(normalizing_matrix({0, -1}) == Matrix2{{{-1, 0}, {0, -1}}});
    Matrix2 m = normalizing_matrix({1, 1});
    CHECK(act(m, {1, 1}) == Vec2{0, 1});
    CHECK(m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1);
    CHECK_THROWS_AS(normalizing_matrix({2, 4}), InvalidInput);
  }

  TEST_CASE("normalizing matrices send every primitive class to (0,1)") {
    std::mt19937_64 rng(31);
    int tested = 0;
    while (tested < 300) {
      Vec2 g{gen::uniform(rng, -50, 50), gen::uniform(rng, -50, 50)};
      if (std::gcd(g[0], g[1]) != 1) continue;
      ++tested;
      Matrix2 m = normalizing_matrix(g);
      CHECK(act(m, g) == Vec2{0, 1});
      CHECK(m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1);
      CHECK(act(inverse(m), Vec2{0, 1}) == g);
    }
  }

  TEST_CASE("basis change preserves evaluation at the transformed point") {
    std::mt19937_64 rng(32);
    const Seed s = initial_seed();
    for (int j = 0; j < 3; ++j) {
      auto [n, m] = normalize_basis(s, j);
      for (int k = 0; k < 20; ++k) {
        auto [x, y] = gen::curve_point(rng);
        // Monomial x^a y^b becomes x^(M(a,b)); so W'(x', y') = W(x, y) when
        // x = x'^m00 y'^m10 and y = x'^m01 y'^m11.
        auto mp = [](const mpq_class& b, std::int64_t e) {
          mpq_class r = 1;
          for (std::int64_t i = 0; i < std::abs(e); ++i) r *= b;
          return e < 0 ? mpq_class(1 / r) : r;
        };
        mpq_class X = mp(x, m[0][0]) * mp(y, m[1][0]);
        mpq_class Y = mp(x, m[0][1]) * mp(y, m[1][1]);
        CHECK(evaluate(n.potential, {x, y}) == evaluate(s.potential, {X, Y}));
      }
    }
  }

  TEST_CASE("seeds along paths: triangle invariant and triple bookkeeping") {
    std::vector<std::vector<int>> level{{}};
    for (int d = 0; d < 4; ++d) {
      std::vector<std::vector<int>> next;
      for (const auto& p : level)
        for (int j = 0; j < 3; ++j) {
          if (!p.empty() && p.back() == j) continue;
          auto q = p;
          q.push_back(j);
          next.push_back(q);
          Seed s = seed_along_path(q);
          CHECK(s.triple == triple_along_path(q));
          CHECK(check_newton_triangle(s.potential, s.triple));
          for (const auto& c : s.classes) CHECK(std::gcd(c[0], c[1]) == 1);
        }
      level = next;
    }
  }

  TEST_CASE("Newton side measures for named seeds") {
    CHECK(seed_along_path({}).potential == initial_seed().potential);
    CHECK(sorted_sides(seed_along_path(canonical_path({1, 2, 5})).potential) == std::vector<std::int64_t>{1, 4, 25});
    CHECK(sorted_sides(seed_along_path(canonical_path({2, 5, 29})).potential) ==
          std::vector<std::int64_t>{4, 25, 841});
  }

  TEST_CASE("mutating twice at the same disk returns the seed up to basis change") {
    for (const auto& path : std::vector<std::vector<int>>{{}, {0}, {0, 1}, {0, 1, 2}}) {
      Seed s = seed_along_path(path);
      for (int j = 0; j < 3; ++j) {
        Seed back = mutate_seed(mutate_seed(s, j), j);
        CHECK(back.triple == s.triple);
        CHECK(sorted_sides(back.potential) == sorted_sides(s.potential));
        CHECK(lattice_equivalent(back.potential, s.potential));
      }
    }
  }

  TEST_CASE("seed JSON round trip and on-disk cache") {
    Seed s = seed_along_path({0, 1, 2});
    Seed r = seed_from_json(seed_to_json(s));
    CHECK(r.potential == s.potential);
    CHECK(r.classes == s.classes);
    CHECK(r.triple == s.triple);

    auto dir = std::filesystem::temp_directory_path() / "whitneypot_cache_test";
    std::filesystem::remove_all(dir);
    ::setenv("WHITNEYPOT_CACHE", dir.c_str(), 1);
    Seed a = seed_along_path({1, 0, 1, 2});
    CHECK(std::filesystem::exists(dir / "seed_1-0-1-2.json"));
    Seed b = seed_along_path({1, 0, 1, 2});
    ::unsetenv("WHITNEYPOT_CACHE");
    CHECK(a.potential == b.potential);
    CHECK(b.potential == mutate_seed(seed_along_path({1, 0, 1}), 2).potential);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("bad inputs") {
    CHECK_THROWS_AS(normalize_basis(initial_seed(), 3), InvalidInput);
    CHECK_THROWS_AS(seed_along_path({0, 5}), InvalidInput);
  }
}
