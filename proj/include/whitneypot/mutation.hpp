#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "whitneypot/laurent.hpp"
#include "whitneypot/markov.hpp"

namespace whitneypot {

using Vec2 = std::array<std::int64_t, 2>;

// A torus potential in (x,y), the boundary classes of its three disks and
// the Markov triple labelling it.  classes[j] belongs to triple[j].
struct Seed {
  Laurent potential{2};
  std::array<Vec2, 3> classes{};
  Triple triple{1, 1, 1};
  bool spin = false;  // emit with y -> -y
};

std::int64_t det(const Vec2& u, const Vec2& v);

// Clifford potential x + y + x^-1 y^-1.  The disk classes are orthogonal to
// (1,-2), (1,1), (-2,1) in that order; this labelling makes "lowest index
// first" the path convention everywhere.
Seed initial_seed();

// Deterministic M in SL(2,Z) with M g = (0,1).  The first row is forced to
// (g1, -g0); the second row ranges over (u,v) + k(g1,-g0) and we take the
// one with the smallest |u|+|v|, then smallest |u|, then lexicographically
// smallest.
Matrix2 normalizing_matrix(const Vec2& g);
Matrix2 inverse(const Matrix2& m);
Vec2 act(const Matrix2& m, const Vec2& v);

struct Normalized {
  Seed seed;
  Matrix2 basis;
};
Normalized normalize_basis(const Seed& s, int j);

// Wall-crossing x -> x(1+y) in the basis adapted to disk j, mapped back to
// the original basis.  Throws NotLaurent if a denominator survives.
Seed mutate_seed(const Seed& s, int j);

// Fold of mutate_seed from the initial seed.  Prefixes of length <= 3 are
// memoized in-process; if WHITNEYPOT_CACHE names a directory, seeds are also
// read from and written to JSON files there.
Seed seed_along_path(const std::vector<int>& path);

nlohmann::json seed_to_json(const Seed& s);
Seed seed_from_json(const nlohmann::json& j);

}  // namespace whitneypot
