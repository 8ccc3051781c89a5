#include "whitneypot/verify.hpp"

#include <algorithm>
#include <map>

#include "whitneypot/errors.hpp"

namespace whitneypot {

mpz_class check_p1(const SpherePotential& s) {
  auto it = s.p_part.find(1);
  if (it == s.p_part.end()) throw MissingP1("potential has no p^1 term");
  mpz_class sum = 0;
  for (const auto& [e, c] : it->second.terms()) sum += c;
  return sum;
}

bool check_congruence(const SpherePotential& s) { return satisfies_congruence(s); }

bool check_congruence_raw(const Laurent& raw) {
  if (raw.nvars() != 3) throw InvalidInput("elements of A need the three variables p, q, t");
  for (const auto& [e, c] : raw.terms())
    if ((((e[0] - e[1]) % 3) + 3) % 3 != 1) return false;
  return true;
}

bool check_newton_triangle(const Laurent& w, const Triple& t) {
  if (w.is_zero()) return false;
  NewtonPolygon np = newton_polytope(w);
  if (np.vertices.size() != 3) return false;
  std::vector<mpz_class> lengths, cones, want_lengths(t.begin(), t.end()), want_cones;
  for (auto l : np.side_lengths) lengths.emplace_back(std::to_string(l));
  for (auto c : np.cone_indices) cones.emplace_back(std::to_string(c));
  for (const auto& a : t) want_cones.push_back(a * a);
  for (auto* v : {&lengths, &cones, &want_lengths, &want_cones}) std::sort(v->begin(), v->end());
  return lengths == want_lengths && cones == want_cones;
}

bool check_top_p_monomial(const SpherePotential& s) {
  if (s.p_part.empty()) return false;
  return s.p_part.rbegin()->second.size() == 1;
}

LinkingReport linking_report(const SpherePotential& s) {
  LinkingReport r;
  r.scenario_i.name = "i";
  r.scenario_ii_a.name = "ii_a";
  r.scenario_ii_b.name = "ii_b";
  auto record = [](Scenario& sc, char sheet, std::int64_t exponent, std::int64_t value) {
    LinkingTerm term{sheet, exponent, value};
    sc.terms.push_back(term);
    if (value < 0) sc.violations.push_back(term);
  };
  for (const auto& [e, poly] : s.p_part) {
    if ((e - 1) % 3 != 0) continue;
    const std::int64_t k = (e - 1) / 3;
    record(r.scenario_i, 'p', e, -k);
    record(r.scenario_ii_a, 'p', e, -2 * k);
    record(r.scenario_ii_b, 'p', e, 1 + k);
    if (k >= 1) r.line_nondisplaceable = true;
  }
  bool higher_q = false;
  for (const auto& [e, poly] : s.q_part) {
    if ((e - 2) % 3 != 0) continue;
    const std::int64_t k = (e - 2) / 3;
    record(r.scenario_i, 'q', e, k + 1);
    record(r.scenario_ii_a, 'q', e, 2 * (k + 1));
    record(r.scenario_ii_b, 'q', e, -k);
    if (k >= 1) higher_q = true;
  }
  r.conic_nondisplaceable = r.line_nondisplaceable && higher_q;
  return r;
}

nlohmann::json to_json(const LinkingReport& r) {
  auto scenario = [](const Scenario& sc) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& t : sc.violations)
      v.push_back({{"sheet", std::string(1, t.sheet)}, {"exponent", t.exponent}, {"intersection", t.intersection}});
    return nlohmann::json{{"consistent", sc.consistent()}, {"violations", v}};
  };
  return {{"scenario_i", scenario(r.scenario_i)},
          {"scenario_ii_a", scenario(r.scenario_ii_a)},
          {"scenario_ii_b", scenario(r.scenario_ii_b)},
          {"verdicts",
           {{"line_nondisplaceable", r.line_nondisplaceable}, {"conic_nondisplaceable", r.conic_nondisplaceable}}}};
}

bool check_higher_p_theorem(const SpherePotential& s, const Triple& a, const Triple& b) {
  std::vector<mpz_class> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  // Remove the two shared entries; what is left on each side is c and 3ab - c.
  std::vector<mpz_class> only_x, only_y;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(only_x));
  std::set_difference(y.begin(), y.end(), x.begin(), x.end(), std::back_inserter(only_y));
  if (only_x.size() != 1 || only_y.size() != 1) throw InvalidInput("triples do not differ by one mutation");
  const bool higher = !s.p_part.empty() && s.p_part.rbegin()->first > 1;
  return higher || only_x[0] == 1 || only_y[0] == 1;
}

std::int64_t maslov_const(std::int64_t m, std::int64_t n) {
  if (m < 1) throw InvalidInput("multiplicity must be at least 1");
  if (n < 1) throw InvalidInput("dimension must be at least 1");
  return -m * (n - 2);
}

std::int64_t maslov_resolution_shift(std::int64_t mu, std::int64_t b, std::int64_t n) {
  if (b < 0) throw InvalidInput("number of resolved corners must be non-negative");
  return mu + (n - 2) * b;
}

bool co_monomial_check(const Laurent& u, const Laurent& v) {
  Laurent r = u * v - Laurent::constant(u.nvars(), 1);
  return r.size() == 1;
}

bool clifford_co_check() {
  const std::vector<std::string> names{"x", "y"};
  return co_monomial_check(parse_laurent("x*y + y", names), parse_laurent("y^-1", names));
}

// ---- tree sweep ----

bool EdgeCheck::ok() const {
  return error.empty() && p1 && (*p1 == 1 || *p1 == -1) && collapse_unique && congruence && top_monomial &&
         higher_p && linking_monotone;
}

bool VerifyReport::ok() const {
  return std::all_of(edges.begin(), edges.end(), [](const auto& e) { return e.ok(); }) &&
         std::all_of(seeds.begin(), seeds.end(), [](const auto& s) { return s.ok(); });
}

SpherePotential edge_potential(const Seed& seed, int j) {
  Laurent w = apply_unimodular(seed.potential, normalizing_matrix(seed.classes[j]));
  if (seed.spin) w = flip_sign(w, 1);
  return canonical_sheets(collapse_raw(w, Variant::k11));
}

namespace {

class SeedSource {
 public:
  explicit SeedSource(bool corrupt) : corrupt_(corrupt) {
    if (corrupt_) {
      Seed s = initial_seed();
      s.potential = parse_laurent("x + y - x^-1*y^-1", {"x", "y"});
      local_.emplace(std::vector<int>{}, s);
    }
  }

  Seed get(const std::vector<int>& path) {
    if (!corrupt_) return seed_along_path(path);
    auto it = local_.find(path);
    if (it != local_.end()) return it->second;
    std::vector<int> prefix(path.begin(), path.end() - 1);
    Seed s = mutate_seed(get(prefix), path.back());
    local_.emplace(path, s);
    return s;
  }

 private:
  bool corrupt_;
  std::map<std::vector<int>, Seed> local_;
};

EdgeCheck check_edge(SeedSource& src, const std::vector<int>& path, int j) {
  EdgeCheck c;
  c.path = path;
  c.disk = j;
  c.lower = sorted(triple_along_path(path));
  c.upper = sorted(mutate_triple(triple_along_path(path), j));
  try {
    Seed seed = src.get(path);
    Laurent w = apply_unimodular(seed.potential, normalizing_matrix(seed.classes[j]));
    if (seed.spin) w = flip_sign(w, 1);
    auto variants = collapse_auto(w);
    c.collapse_unique = variants.size() == 1 && variants.front().first == Variant::k11;
    SpherePotential s = canonical_sheets(collapse_raw(w, Variant::k11));
    c.congruence = check_congruence(s);
    c.top_monomial = check_top_p_monomial(s);
    c.higher_p = check_higher_p_theorem(s, c.lower, c.upper);
    auto link = linking_report(s);
    c.linking_monotone = !link.conic_nondisplaceable || link.line_nondisplaceable;
    c.p1 = check_p1(s);
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return c;
}

SeedCheck check_seed(SeedSource& src, const std::vector<int>& path) {
  SeedCheck c;
  c.path = path;
  c.triple = triple_along_path(path);
  try {
    Seed seed = src.get(path);
    c.triangle = check_newton_triangle(seed.potential, seed.triple);
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return c;
}

}  // namespace

VerifyReport verify_tree(const VerifyOptions& opt) {
  if (opt.depth < 0) throw InvalidInput("depth must be non-negative");
  VerifyReport report;
  SeedSource src(opt.corrupt);
  if (opt.ordered) {
    std::vector<std::vector<int>> level{{}};
    report.seeds.push_back(check_seed(src, {}));
    for (int d = 0; d < opt.depth; ++d) {
      std::vector<std::vector<int>> next;
      for (const auto& path : level)
        for (int j = 0; j < 3; ++j) {
          if (!path.empty() && path.back() == j) continue;
          report.edges.push_back(check_edge(src, path, j));
          auto longer = path;
          longer.push_back(j);
          report.seeds.push_back(check_seed(src, longer));
          next.push_back(std::move(longer));
        }
      level = std::move(next);
    }
  } else {
    report.seeds.push_back(check_seed(src, {}));
    for (const auto& e : enumerate_tree(opt.depth)) {
      auto path = canonical_path(e.lower);
      int j = mutation_index(triple_along_path(path), e.upper);
      report.edges.push_back(check_edge(src, path, j));
      report.seeds.push_back(check_seed(src, canonical_path(e.upper)));
    }
  }
  return report;
}

nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json edges = nlohmann::json::array(), seeds = nlohmann::json::array();
  for (const auto& e : r.edges) {
    nlohmann::json j = {{"pair", triple_to_string(e.lower) + ":" + triple_to_string(e.upper)},
                        {"path", path_to_string(e.path)},
                        {"disk", e.disk},
                        {"p1", e.p1 ? nlohmann::json(e.p1->get_str()) : nlohmann::json(nullptr)},
                        {"p1_is_unit", e.p1 && (*e.p1 == 1 || *e.p1 == -1)},
                        {"collapse_unique", e.collapse_unique},
                        {"congruence", e.congruence},
                        {"top_p_monomial", e.top_monomial},
                        {"higher_p_theorem", e.higher_p},
                        {"linking_monotone", e.linking_monotone},
                        {"ok", e.ok()}};
    if (!e.error.empty()) j["error"] = e.error;
    edges.push_back(j);
  }
  for (const auto& s : r.seeds) {
    nlohmann::json j = {{"path", path_to_string(s.path)},
                        {"triple", triple_to_string(s.triple)},
                        {"newton_triangle", s.triangle},
                        {"ok", s.ok()}};
    if (!s.error.empty()) j["error"] = s.error;
    seeds.push_back(j);
  }
  return {{"ok", r.ok()}, {"edges", edges}, {"seeds", seeds}};
}

}  // namespace whitneypot
