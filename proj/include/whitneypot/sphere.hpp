#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "whitneypot/laurent.hpp"
#include "whitneypot/markov.hpp"

namespace whitneypot {

// Element of A = Z[p,q,t^-1,t]/(1 - t - pq) in normal form:
//   sum_k p^k P_k(t) + sum_k q^k Q_k(t) + C(t),  k >= 1.
// Coefficient polynomials are one-variable Laurent polynomials in t, stored
// in the internal W(p,q,t) convention.
struct SpherePotential {
  std::map<std::int64_t, Laurent> p_part;
  std::map<std::int64_t, Laurent> q_part;
  Laurent constant{1};

  bool is_zero() const { return p_part.empty() && q_part.empty() && constant.is_zero(); }
  bool operator==(const SpherePotential& o) const {
    return p_part == o.p_part && q_part == o.q_part && constant == o.constant;
  }
};

enum class Variant { k11, k12 };
enum class Spin { bounding, non_bounding };

// Raw elements of Z[p,q,t^-1,t] use three variables (p, q, t).
std::vector<std::string> raw_names();
Laurent to_raw(const SpherePotential& s);

// Eliminates mixed monomials with pq = 1 - t.  No congruence check.
SpherePotential normal_form(const Laurent& raw);
// normal_form plus the CP^2 congruence; throws CongruenceViolation.
SpherePotential nf_reduce(const Laurent& raw);

bool satisfies_congruence(const SpherePotential& s);
// Same element of A with the sheets interchanged (p <-> q).
SpherePotential swap_sheets(const SpherePotential& s);
// Orders the sheets so that p^(1+3k), q^(2+3k) appear; throws
// CongruenceViolation when neither order works.
SpherePotential canonical_sheets(const SpherePotential& s);

// Value at (p, q) with t = 1 - pq.
mpq_class evaluate_on_curve(const SpherePotential& s, const mpq_class& p, const mpq_class& q);
mpq_class evaluate_raw_on_curve(const Laurent& raw, const mpq_class& p, const mpq_class& q);

// Torus potential (x,y) in a basis where the collapsing disk has class
// (0,1) -> sphere potential.  No congruence check.  Throws NotDivisible.
SpherePotential collapse_raw(const Laurent& w, Variant v, Spin spin = Spin::bounding);
// collapse_raw followed by the congruence check.
SpherePotential collapse(const Laurent& w, Variant v, Spin spin = Spin::bounding);
// Every variant whose divisibility succeeds, 11 first.
std::vector<std::pair<Variant, SpherePotential>> collapse_auto(const Laurent& w, Spin spin = Spin::bounding);

Laurent resolve(const SpherePotential& s, Variant v, Spin spin = Spin::bounding);

// The Whitney sphere between two adjacent Markov triples.
SpherePotential whitney_potential(const Triple& a, const Triple& b);

// Torus potential on the lower triple, written in the basis adapted to the
// collapsing disk, together with the ordered pair it came from.
struct EdgeTorus {
  Triple lower;
  Triple upper;
  std::vector<int> path;
  int disk = 0;
  Laurent normalized{2};
};
EdgeTorus edge_torus(const Triple& a, const Triple& b);
SpherePotential potential_from_torus(const EdgeTorus& e);

// t -> -t on every coefficient (table convention and back).
SpherePotential negate_t(const SpherePotential& s);

std::string pair_label(const Triple& lower, const Triple& upper);
// "p + q^2 t^-1"; internal convention in, table convention out.
std::string emit_table_text(const SpherePotential& s);
std::string emit_table_latex(const SpherePotential& s);
// convention "t" stores s as given; "minus_t" stores W(p,q,-t).
nlohmann::json sphere_to_json(const SpherePotential& s, bool minus_t);
SpherePotential sphere_from_json(const nlohmann::json& j);

}  // namespace whitneypot
