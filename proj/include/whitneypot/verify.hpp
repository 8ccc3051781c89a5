#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "whitneypot/laurent.hpp"
#include "whitneypot/markov.hpp"
#include "whitneypot/mutation.hpp"
#include "whitneypot/sphere.hpp"

namespace whitneypot {

// Internal P_1 at t = 1, i.e. the table's P_1 at t = -1.  Throws MissingP1.
mpz_class check_p1(const SpherePotential& s);

bool check_congruence(const SpherePotential& s);
// Raw element: every monomial p^a q^b t^c with a - b = 1 mod 3.
bool check_congruence_raw(const Laurent& raw);

// Exactly three vertices; lattice side lengths {a,b,c}; the cones over the
// sides from the origin have indices {a^2,b^2,c^2}.
bool check_newton_triangle(const Laurent& w, const Triple& t);

bool check_top_p_monomial(const SpherePotential& s);

struct LinkingTerm {
  char sheet = 'p';
  std::int64_t exponent = 0;
  std::int64_t intersection = 0;
};

struct Scenario {
  std::string name;
  std::vector<LinkingTerm> terms;
  std::vector<LinkingTerm> violations;  // negative forced intersections
  bool consistent() const { return violations.empty(); }
};

struct LinkingReport {
  Scenario scenario_i;
  Scenario scenario_ii_a;
  Scenario scenario_ii_b;
  bool line_nondisplaceable = false;
  bool conic_nondisplaceable = false;
};

LinkingReport linking_report(const SpherePotential& s);
nlohmann::json to_json(const LinkingReport& r);

// "No higher p-powers" forces one of the two differing entries to be 1.
bool check_higher_p_theorem(const SpherePotential& s, const Triple& a, const Triple& b);

std::int64_t maslov_const(std::int64_t m, std::int64_t n);
std::int64_t maslov_resolution_shift(std::int64_t mu, std::int64_t b, std::int64_t n);

// U V - 1 is a single monomial.
bool co_monomial_check(const Laurent& u, const Laurent& v);
bool clifford_co_check();

struct EdgeCheck {
  std::vector<int> path;  // ordered path to the lower triple
  int disk = 0;
  Triple lower;
  Triple upper;
  std::optional<mpz_class> p1;
  bool collapse_unique = false;  // exactly one collapse variant divides
  bool congruence = false;
  bool top_monomial = false;
  bool higher_p = false;
  bool linking_monotone = false;
  std::string error;
  bool ok() const;
};

struct SeedCheck {
  std::vector<int> path;
  Triple triple;
  bool triangle = false;
  std::string error;
  bool ok() const { return error.empty() && triangle; }
};

struct VerifyOptions {
  int depth = 3;
  // Walk every ordered non-backtracking path instead of the unordered tree.
  bool ordered = false;
  // Test hook: start from a Clifford potential with one sign flipped.
  bool corrupt = false;
};

struct VerifyReport {
  std::vector<EdgeCheck> edges;
  std::vector<SeedCheck> seeds;
  bool ok() const;
};

VerifyReport verify_tree(const VerifyOptions& opt);
nlohmann::json to_json(const VerifyReport& r);

// Potential on the edge leaving `seed` through disk j.
SpherePotential edge_potential(const Seed& seed, int j);

}  // namespace whitneypot
