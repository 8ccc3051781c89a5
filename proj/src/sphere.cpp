#include "whitneypot/sphere.hpp"

#include <sstream>

#include "whitneypot/errors.hpp"
#include "whitneypot/mutation.hpp"

namespace whitneypot {

namespace {

void add_into(std::map<std::int64_t, Laurent>& part, std::int64_t k, const Laurent& poly) {
  auto [it, inserted] = part.try_emplace(k, Laurent(1));
  it->second += poly;
  if (it->second.is_zero()) part.erase(it);
}

}  // namespace

std::vector<std::string> raw_names() { return {"p", "q", "t"}; }

Laurent to_raw(const SpherePotential& s) {
  Laurent r(3);
  for (const auto& [k, poly] : s.p_part)
    for (const auto& [e, c] : poly.terms()) r.add_term({k, 0, e[0]}, c);
  for (const auto& [k, poly] : s.q_part)
    for (const auto& [e, c] : poly.terms()) r.add_term({0, k, e[0]}, c);
  for (const auto& [e, c] : s.constant.terms()) r.add_term({0, 0, e[0]}, c);
  return r;
}

SpherePotential normal_form(const Laurent& raw) {
  if (raw.nvars() != 3) throw InvalidInput("elements of A need the three variables p, q, t");
  SpherePotential out;
  for (const auto& [e, c] : raw.terms()) {
    const auto a = e[0], b = e[1], tc = e[2];
    if (a < 0 || b < 0) throw InvalidInput("p and q exponents must be non-negative");
    const auto m = std::min(a, b);
    // p^a q^b t^c = p^(a-m) q^(b-m) (1-t)^m t^c
    Laurent poly(1);
    for (std::int64_t i = 0; i <= m; ++i) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(i));
      poly.add_term({tc + i}, (i % 2 ? -binom : binom) * c);
    }
    if (a > m)
      add_into(out.p_part, a - m, poly);
    else if (b > m)
      add_into(out.q_part, b - m, poly);
    else
      out.constant += poly;
  }
  return out;
}

bool satisfies_congruence(const SpherePotential& s) {
  if (!s.constant.is_zero()) return false;
  for (const auto& [k, poly] : s.p_part)
    if (((k - 1) % 3 + 3) % 3 != 0) return false;
  for (const auto& [k, poly] : s.q_part)
    if (((k - 2) % 3 + 3) % 3 != 0) return false;
  return true;
}

SpherePotential nf_reduce(const Laurent& raw) {
  SpherePotential s = normal_form(raw);
  if (!satisfies_congruence(s)) throw CongruenceViolation("a monomial p^a q^b with a - b != 1 mod 3 survives");
  return s;
}

SpherePotential swap_sheets(const SpherePotential& s) {
  SpherePotential r;
  r.p_part = s.q_part;
  r.q_part = s.p_part;
  r.constant = s.constant;
  return r;
}

SpherePotential canonical_sheets(const SpherePotential& s) {
  if (satisfies_congruence(s)) return s;
  SpherePotential r = swap_sheets(s);
  if (satisfies_congruence(r)) return r;
  throw CongruenceViolation("no ordering of the sheets satisfies a - b = 1 mod 3");
}

mpq_class evaluate_on_curve(const SpherePotential& s, const mpq_class& p, const mpq_class& q) {
  return evaluate_raw_on_curve(to_raw(s), p, q);
}

mpq_class evaluate_raw_on_curve(const Laurent& raw, const mpq_class& p, const mpq_class& q) {
  if (raw.nvars() != 3) throw InvalidInput("elements of A need the three variables p, q, t");
  const mpq_class t = 1 - p * q;
  if (t == 0) throw InvalidInput("t = 1 - pq must be nonzero");
  mpq_class sum = 0;
  for (const auto& [e, c] : raw.terms()) {
    if (e[0] < 0 || e[1] < 0) throw InvalidInput("p and q exponents must be non-negative");
    mpq_class v = c;
    for (std::int64_t i = 0; i < e[0]; ++i) v *= p;
    for (std::int64_t i = 0; i < e[1]; ++i) v *= q;
    const mpq_class base = e[2] >= 0 ? t : mpq_class(1 / t);
    for (std::int64_t i = 0; i < (e[2] >= 0 ? e[2] : -e[2]); ++i) v *= base;
    sum += v;
  }
  return sum;
}

SpherePotential collapse_raw(const Laurent& w_in, Variant v, Spin spin) {
  if (w_in.nvars() != 2) throw InvalidInput("torus potentials have two variables");
  const Laurent w = spin == Spin::non_bounding ? flip_sign(w_in, 1) : w_in;

  std::map<std::int64_t, Laurent> columns;
  for (const auto& [e, c] : w.terms()) columns.try_emplace(e[0], Laurent(1)).first->second.add_term({e[1]}, c);

  SpherePotential out;
  for (const auto& [k, col] : columns) {
    if (k == 0) {
      out.constant = flip_sign(col, 0);
    } else if (k > 0) {
      Laurent f = v == Variant::k12 ? divide_by_unit_power(col, 0, k) : col;
      out.p_part.emplace(k, flip_sign(f, 0));
    } else {
      Laurent g = v == Variant::k11 ? divide_by_unit_power(col, 0, -k) : col;
      out.q_part.emplace(-k, flip_sign(g, 0));
    }
  }
  return out;
}

SpherePotential collapse(const Laurent& w, Variant v, Spin spin) {
  SpherePotential s = collapse_raw(w, v, spin);
  if (!satisfies_congruence(s)) throw CongruenceViolation("collapsed potential violates a - b = 1 mod 3");
  return s;
}

std::vector<std::pair<Variant, SpherePotential>> collapse_auto(const Laurent& w, Spin spin) {
  std::vector<std::pair<Variant, SpherePotential>> out;
  for (Variant v : {Variant::k11, Variant::k12}) {
    try {
      out.emplace_back(v, collapse_raw(w, v, spin));
    } catch (const NotDivisible&) {
    }
  }
  if (out.empty()) throw NotDivisible("neither collapse variant divides");
  return out;
}

Laurent resolve(const SpherePotential& s, Variant v, Spin spin) {
  std::vector<UnitImage> images;
  if (v == Variant::k11)
    images = {UnitImage{1, {1, 0}, 0}, UnitImage{1, {-1, 0}, 1}, UnitImage{-1, {0, 1}, 0}};
  else
    images = {UnitImage{1, {1, 0}, 1}, UnitImage{1, {-1, 0}, 0}, UnitImage{-1, {0, 1}, 0}};
  Laurent w = clear_denominator(substitute_units(to_raw(s), images, 1));
  return spin == Spin::non_bounding ? flip_sign(w, 1) : w;
}

EdgeTorus edge_torus(const Triple& a, const Triple& b) {
  if (!is_markov(a) || !is_markov(b)) throw InvalidInput("both triples must be Markov triples");
  if (!adjacent(a, b))
    throw InvalidInput("triples " + triple_to_string(a) + " and " + triple_to_string(b) + " are not adjacent");
  EdgeTorus e;
  const bool a_lower = tree_depth(a) < tree_depth(b);
  e.lower = sorted(a_lower ? a : b);
  e.upper = sorted(a_lower ? b : a);
  e.path = canonical_path(e.lower);
  Seed seed = seed_along_path(e.path);
  e.disk = mutation_index(seed.triple, e.upper);
  e.normalized = apply_unimodular(seed.potential, normalizing_matrix(seed.classes[e.disk]));
  if (seed.spin) e.normalized = flip_sign(e.normalized, 1);
  return e;
}

SpherePotential potential_from_torus(const EdgeTorus& e) {
  return canonical_sheets(collapse_raw(e.normalized, Variant::k11));
}

SpherePotential whitney_potential(const Triple& a, const Triple& b) {
  return potential_from_torus(edge_torus(a, b));
}

SpherePotential negate_t(const SpherePotential& s) {
  SpherePotential r;
  for (const auto& [k, poly] : s.p_part) r.p_part.emplace(k, flip_sign(poly, 0));
  for (const auto& [k, poly] : s.q_part) r.q_part.emplace(k, flip_sign(poly, 0));
  r.constant = flip_sign(s.constant, 0);
  return r;
}

std::string pair_label(const Triple& lower, const Triple& upper) {
  return "L[(" + triple_to_string(sorted(lower)) + ")(" + triple_to_string(sorted(upper)) + ")]";
}

// ---- emitters ----

namespace {

// T = sign * content * t^shift * R with R primitive and R(0) > 0.
struct Factored {
  int sign = 1;
  mpz_class content;
  std::int64_t shift = 0;
  Laurent rest{1};
};

Factored factor(const Laurent& poly) {
  Factored f;
  f.shift = poly.terms().begin()->first[0];
  for (const auto& [e, c] : poly.terms()) f.shift = std::min(f.shift, e[0]);
  mpz_class g = 0;
  for (const auto& [e, c] : poly.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  f.content = g;
  f.sign = poly.coeff({f.shift}) < 0 ? -1 : 1;
  for (const auto& [e, c] : poly.terms()) {
    mpz_class q = c / g;
    f.rest.add_term({e[0] - f.shift}, f.sign < 0 ? mpz_class(-q) : q);
  }
  return f;
}

struct Style {
  bool latex = false;
  std::string power(const std::string& base, std::int64_t e) const {
    if (e == 1) return base;
    if (latex) return base + "^{" + std::to_string(e) + "}";
    return base + "^" + std::to_string(e);
  }
  std::string open() const { return latex ? "\\left(" : "("; }
  std::string close() const { return latex ? "\\right)" : ")"; }
  std::string plus() const { return latex ? "+" : " + "; }
  std::string minus() const { return latex ? "-" : " - "; }
};

std::string inner(const Laurent& r, const Style& st) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : r.terms()) {
    mpz_class a = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? st.minus() : st.plus());
    first = false;
    if (e[0] == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << (st.latex ? "" : " ");
      os << st.power("t", e[0]);
    }
  }
  return os.str();
}

void emit_term(std::ostringstream& os, bool& first, const std::string& base, const Laurent& poly,
               const Style& st) {
  Factored f = factor(poly);
  if (first)
    os << (f.sign < 0 ? "-" : "");
  else
    os << (f.sign < 0 ? st.minus() : st.plus());
  first = false;
  std::vector<std::string> pieces;
  if (f.content != 1 || (base.empty() && f.rest.size() == 1)) pieces.push_back(f.content.get_str());
  if (!base.empty()) pieces.push_back(base);
  if (f.rest.size() > 1) pieces.push_back(st.open() + inner(f.rest, st) + st.close());
  if (f.shift != 0) pieces.push_back(st.power("t", f.shift));
  for (std::size_t i = 0; i < pieces.size(); ++i) os << (i ? " " : "") << pieces[i];
}

std::string emit(const SpherePotential& internal, const Style& st) {
  SpherePotential s = negate_t(internal);
  std::ostringstream os;
  bool first = true;
  if (!s.constant.is_zero()) emit_term(os, first, "", s.constant, st);
  for (const auto& [k, poly] : s.p_part) emit_term(os, first, st.power("p", k), poly, st);
  for (const auto& [k, poly] : s.q_part) emit_term(os, first, st.power("q", k), poly, st);
  return os.str();
}

}  // namespace

std::string emit_table_text(const SpherePotential& s) { return emit(s, Style{false}); }
std::string emit_table_latex(const SpherePotential& s) { return emit(s, Style{true}); }

nlohmann::json sphere_to_json(const SpherePotential& s_in, bool minus_t) {
  const SpherePotential s = minus_t ? negate_t(s_in) : s_in;
  nlohmann::json p = nlohmann::json::object(), q = nlohmann::json::object();
  for (const auto& [k, poly] : s.p_part) p[std::to_string(k)] = to_json(poly);
  for (const auto& [k, poly] : s.q_part) q[std::to_string(k)] = to_json(poly);
  nlohmann::json j = {{"p_part", p}, {"q_part", q}, {"convention", minus_t ? "minus_t" : "t"}};
  if (!s.constant.is_zero()) j["constant"] = to_json(s.constant);
  return j;
}

SpherePotential sphere_from_json(const nlohmann::json& j) {
  SpherePotential s;
  auto read = [](const nlohmann::json& part, std::map<std::int64_t, Laurent>& into) {
    for (const auto& [key, poly] : part.items()) {
      std::size_t used = 0;
      std::int64_t k = std::stoll(key, &used);
      if (used != key.size() || k < 1) throw InvalidInput("sphere part keys must be positive integers");
      Laurent l = laurent_from_json(poly, 1);
      if (!l.is_zero()) into.emplace(k, l);
    }
  };
  if (j.contains("p_part")) read(j.at("p_part"), s.p_part);
  if (j.contains("q_part")) read(j.at("q_part"), s.q_part);
  if (j.contains("constant")) s.constant = laurent_from_json(j.at("constant"), 1);
  const std::string conv = j.value("convention", "t");
  if (conv == "minus_t") return negate_t(s);
  if (conv != "t") throw InvalidInput("convention must be 't' or 'minus_t'");
  return s;
}

}  // namespace whitneypot
