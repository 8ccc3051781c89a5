#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "whitneypot/errors.hpp"
#include "whitneypot/markov.hpp"
#include "whitneypot/mutation.hpp"
#include "whitneypot/ppa.hpp"
#include "whitneypot/sphere.hpp"
#include "whitneypot/verify.hpp"

using namespace whitneypot;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// The five spheres of the published table, in its row order.
const std::vector<std::pair<Triple, Triple>>& table_rows() {
  static const std::vector<std::pair<Triple, Triple>> rows{
      {{1, 1, 1}, {1, 1, 2}},  {{1, 1, 2}, {1, 2, 5}},   {{1, 2, 5}, {2, 5, 29}},
      {{1, 2, 5}, {1, 5, 13}}, {{1, 5, 13}, {1, 13, 34}},
  };
  return rows;
}

std::string pair_key(const Triple& a, const Triple& b) {
  return triple_to_string(sorted(a)) + ":" + triple_to_string(sorted(b));
}

const char* verdict(bool ok) { return ok ? "pass" : "FAIL"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---- table ----

int cmd_table(const std::string& format) {
  const auto& rows = table_rows();
  if (format == "json") {
    json out = json::array();
    for (const auto& [a, b] : rows) {
      SpherePotential s = whitney_potential(a, b);
      out.push_back({{"pair", pair_key(a, b)},
                     {"label", pair_label(a, b)},
                     {"text", emit_table_text(s)},
                     {"potential", sphere_to_json(s, true)}});
    }
    std::cout << out.dump(2) << "\n";
  } else if (format == "latex") {
    std::cout << "\\begin{tabular}{ll}\n";
    for (const auto& [a, b] : rows)
      std::cout << "$" << pair_label(a, b) << "$ & $" << emit_table_latex(whitney_potential(a, b)) << "$ \\\\\n";
    std::cout << "\\end{tabular}\n";
  } else {
    for (const auto& [a, b] : rows) std::cout << pair_label(a, b) << ": " << emit_table_text(whitney_potential(a, b)) << "\n";
  }
  return kOk;
}

// ---- potential ----

int cmd_potential(const std::string& pair, const std::string& format, const std::string& show) {
  auto [a, b] = parse_pair(pair);
  if (!adjacent(a, b)) throw InvalidInput(triple_to_string(a) + " and " + triple_to_string(b) + " are not adjacent");
  EdgeTorus torus = edge_torus(a, b);
  SpherePotential s = potential_from_torus(torus);

  const auto p1 = check_p1(s);
  if (show == "p1") {
    std::cout << "P1(1) = " << p1.get_str() << "\n";
    return (p1 == 1 || p1 == -1) ? kOk : kFailed;
  }

  const Seed seed = seed_along_path(torus.path);
  const bool unique = collapse_auto(torus.normalized).size() == 1;
  const bool p1_ok = p1 == 1 || p1 == -1;
  const bool congruence = check_congruence(s);
  const bool top = check_top_p_monomial(s);
  const bool triangle = check_newton_triangle(seed.potential, seed.triple);
  const bool higher = check_higher_p_theorem(s, torus.lower, torus.upper);
  const LinkingReport link = linking_report(s);
  const bool ok = unique && p1_ok && congruence && top && triangle && higher;

  if (format == "json") {
    json out = {{"pair", pair_key(torus.lower, torus.upper)},
                {"label", pair_label(torus.lower, torus.upper)},
                {"potential", sphere_to_json(s, true)},
                {"p1_at_1", p1.get_str()},
                {"checks",
                 {{"p1_is_unit", p1_ok},
                  {"collapse_unique", unique},
                  {"congruence", congruence},
                  {"top_p_monomial", top},
                  {"newton_triangle", triangle},
                  {"higher_p_theorem", higher}}},
                {"linking", to_json(link)},
                {"ok", ok}};
    std::cout << out.dump(2) << "\n";
    return ok ? kOk : kFailed;
  }

  if (show != "summary") {
    const std::string body = format == "latex" ? emit_table_latex(s) : emit_table_text(s);
    std::cout << pair_label(torus.lower, torus.upper) << ": " << body << "\n";
  }
  if (show == "potential") return kOk;
  auto consistent = [](const Scenario& sc) { return sc.consistent() ? "consistent" : "violated"; };
  std::cout << "P1(1) = " << p1.get_str() << "\n"
            << "collapse: " << verdict(unique) << "\n"
            << "congruence: " << verdict(congruence) << "\n"
            << "top p-monomial: " << verdict(top) << "\n"
            << "newton triangle: " << verdict(triangle) << "\n"
            << "higher p-powers: " << verdict(higher) << "\n"
            << "linking (i): " << consistent(link.scenario_i) << "\n"
            << "linking (ii)(a): " << consistent(link.scenario_ii_a) << "\n"
            << "linking (ii)(b): " << consistent(link.scenario_ii_b) << "\n"
            << "line non-displaceable: " << (link.line_nondisplaceable ? "yes" : "no") << "\n"
            << "conic non-displaceable: " << (link.conic_nondisplaceable ? "yes" : "no") << "\n";
  return ok ? kOk : kFailed;
}

// ---- tree / seed ----

int cmd_tree(int depth, bool as_json) {
  if (depth < 0) throw InvalidInput("depth must be non-negative");
  const auto edges = enumerate_tree(depth);
  if (as_json) {
    json out = json::array();
    for (const auto& e : edges)
      out.push_back({{"lower", triple_to_string(e.lower)},
                     {"upper", triple_to_string(e.upper)},
                     {"depth", tree_depth(e.upper)}});
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& e : edges) std::cout << "(" << triple_to_string(e.lower) << ") -- (" << triple_to_string(e.upper) << ")\n";
  }
  return kOk;
}

int cmd_seed(const std::string& path) {
  std::cout << seed_to_json(seed_along_path(parse_path(path))).dump(2) << "\n";
  return kOk;
}

// ---- verify ----

int cmd_verify(const VerifyOptions& opt, bool as_json) {
  if (opt.depth < 1) throw InvalidInput("depth must be at least 1");
  const VerifyReport r = verify_tree(opt);
  if (as_json) {
    std::cout << to_json(r).dump(2) << "\n";
    return r.ok() ? kOk : kFailed;
  }
  int bad_edges = 0, bad_seeds = 0;
  for (const auto& e : r.edges) {
    if (e.ok()) continue;
    ++bad_edges;
    std::cout << "edge " << pair_key(e.lower, e.upper) << " (path " << path_to_string(e.path) << ", disk " << e.disk
              << "): ";
    if (!e.error.empty())
      std::cout << e.error;
    else
      std::cout << "p1=" << (e.p1 ? e.p1->get_str() : "none") << " collapse=" << e.collapse_unique
                << " congruence=" << e.congruence << " top=" << e.top_monomial << " higher_p=" << e.higher_p
                << " linking=" << e.linking_monotone;
    std::cout << "\n";
  }
  for (const auto& s : r.seeds) {
    if (s.ok()) continue;
    ++bad_seeds;
    std::cout << "seed " << triple_to_string(s.triple) << " (path " << path_to_string(s.path)
              << "): " << (s.error.empty() ? "newton triangle fails" : s.error) << "\n";
  }
  std::cout << "edges checked: " << r.edges.size() << ", failures: " << bad_edges << "\n"
            << "seeds checked: " << r.seeds.size() << ", failures: " << bad_seeds << "\n"
            << "verify: " << verdict(r.ok()) << "\n";
  return r.ok() ? kOk : kFailed;
}

// ---- ppa-check ----

struct PpaArgs {
  std::string quiver;
  std::string variant = "both";
  std::string edge;
  std::string rep;
  std::string presentation = "bprime";
  int reps = 20;
  std::uint64_t seed = 1;
  bool corrupt = false;
};

int cmd_ppa_check(const PpaArgs& a) {
  using namespace whitneypot::ppa;
  const Quiver q = parse_quiver(read_file(a.quiver));

  if (!a.rep.empty()) {
    const Algebra alg(q, a.presentation == "b" ? Presentation::B : Presentation::BPrime);
    const Representation rho = representation_from_json(json::parse(read_file(a.rep)), alg);
    const bool ok = check_representation(alg, rho);
    std::cout << "representation valid: " << (ok ? "true" : "false") << "\n";
    return ok ? kOk : kFailed;
  }

  const Algebra src(q, Presentation::BPrime);
  std::vector<int> edges;
  if (!a.edge.empty()) {
    const int e = q.edge_index(a.edge);
    if (e < 0) throw InvalidInput("no edge named " + a.edge);
    edges.push_back(e);
  } else {
    edges = surgerable_edges(q);
    if (edges.empty()) throw InvalidInput("quiver has no loop that is the last edge at its vertex");
  }
  std::vector<SurgeryVariant> variants;
  if (a.variant != "q") variants.push_back(SurgeryVariant::p);
  if (a.variant != "p") variants.push_back(SurgeryVariant::q);

  SurgeryCheckOptions opt;
  opt.representations = a.reps;
  opt.seed = a.seed;
  opt.corrupt = a.corrupt;
  bool all = true;
  for (int e : edges)
    for (auto v : variants) {
      const SurgeryCheck r = check_surgery_relations(src, e, v, opt);
      all = all && r.ok();
      std::cout << "edge " << q.edges[e].name << " variant " << (v == SurgeryVariant::p ? "p" : "q")
                << ": symbolic=" << r.symbolic << " numeric=" << r.numeric << " chord_invertible=" << r.chord_invertible
                << " pullback=" << r.pullback_valid << "\n";
      for (const auto& f : r.failures) std::cout << "  " << f << "\n";
    }
  std::cout << "relations preserved: " << (all ? "true" : "false") << "\n";
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disk potentials of Whitney spheres in CP^2 and their checks"};
  app.require_subcommand(1);

  std::string format = "text";
  auto* table = app.add_subcommand("table", "Print the five tabulated sphere potentials (t -> -t convention)");
  table->add_option("--format", format)->check(CLI::IsMember({"text", "json", "latex"}));

  std::string pair, show = "all", pformat = "text";
  auto* potential = app.add_subcommand("potential", "Potential and checks for one edge of the Markov tree");
  potential->add_option("--pair", pair, "a,b,c:a',b',c'")->required();
  potential->add_option("--format", pformat)->check(CLI::IsMember({"text", "json", "latex"}));
  potential->add_option("--show", show)->check(CLI::IsMember({"all", "potential", "p1", "summary"}));

  int tree_depth_arg = 2;
  bool tree_json = false;
  auto* tree = app.add_subcommand("tree", "List Markov tree edges");
  tree->add_option("--depth", tree_depth_arg)->check(CLI::Range(0, 64));
  tree->add_flag("--json", tree_json);

  VerifyOptions vopt;
  bool verify_json = false;
  auto* verify = app.add_subcommand("verify", "Check every sphere and seed up to a depth");
  verify->add_option("--depth", vopt.depth)->check(CLI::Range(1, 64));
  verify->add_flag("--json", verify_json);
  verify->add_flag("--ordered", vopt.ordered, "Walk all ordered mutation paths");
  verify->add_flag("--corrupt-seed", vopt.corrupt)->group("");

  std::string seed_path;
  auto* seed = app.add_subcommand("seed", "Print the seed reached along a mutation path");
  seed->add_option("--path", seed_path, "comma-separated disk indices, empty for the root");

  PpaArgs ppa_args;
  auto* ppa = app.add_subcommand("ppa-check", "Check surgery maps or a representation of a quiver algebra");
  ppa->add_option("--quiver", ppa_args.quiver)->required()->check(CLI::ExistingFile);
  ppa->add_option("--variant", ppa_args.variant)->check(CLI::IsMember({"p", "q", "both"}));
  ppa->add_option("--edge", ppa_args.edge);
  ppa->add_option("--reps", ppa_args.reps)->check(CLI::Range(0, 100000));
  ppa->add_option("--prng-seed", ppa_args.seed);
  ppa->add_option("--rep", ppa_args.rep, "representation JSON to validate instead")->check(CLI::ExistingFile);
  ppa->add_option("--presentation", ppa_args.presentation)->check(CLI::IsMember({"b", "bprime"}));
  ppa->add_flag("--corrupt-map", ppa_args.corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*table) return cmd_table(format);
    if (*potential) return cmd_potential(pair, pformat, show);
    if (*tree) return cmd_tree(tree_depth_arg, tree_json);
    if (*verify) return cmd_verify(vopt, verify_json);
    if (*seed) return cmd_seed(seed_path);
    if (*ppa) return cmd_ppa_check(ppa_args);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
