#include "whitneypot/markov.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "whitneypot/errors.hpp"

namespace whitneypot {

bool is_markov(const Triple& t) {
  for (const auto& v : t)
    if (v <= 0) return false;
  return t[0] * t[0] + t[1] * t[1] + t[2] * t[2] == 3 * t[0] * t[1] * t[2];
}

Triple mutate_triple(const Triple& t, int j) {
  if (j < 0 || j > 2) throw InvalidInput("mutation index must be 0, 1 or 2");
  Triple r = t;
  r[j] = 3 * t[(j + 1) % 3] * t[(j + 2) % 3] - t[j];
  return r;
}

Triple sorted(const Triple& t) {
  Triple r = t;
  std::sort(r.begin(), r.end());
  return r;
}

bool operator_less(const Triple& a, const Triple& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::optional<Triple> parent(const Triple& t) {
  Triple s = sorted(t);
  if (s[2] == 1) return std::nullopt;
  Triple p = mutate_triple(s, 2);
  return sorted(p);
}

int tree_depth(const Triple& t) {
  if (!is_markov(t)) throw InvalidInput("not a Markov triple: " + triple_to_string(t));
  int d = 0;
  auto cur = std::optional<Triple>(sorted(t));
  while ((cur = parent(*cur))) ++d;
  return d;
}

std::vector<Triple> chain_to_root_reversed(const Triple& t) {
  if (!is_markov(t)) throw InvalidInput("not a Markov triple: " + triple_to_string(t));
  std::vector<Triple> chain{sorted(t)};
  while (auto p = parent(chain.back())) chain.push_back(*p);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

int mutation_index(const Triple& from, const Triple& to) {
  Triple target = sorted(to);
  for (int j = 0; j < 3; ++j)
    if (sorted(mutate_triple(from, j)) == target) return j;
  return -1;
}

bool adjacent(const Triple& a, const Triple& b) {
  if (!is_markov(a) || !is_markov(b)) return false;
  return mutation_index(a, b) >= 0 && sorted(a) != sorted(b);
}

std::vector<TreeEdge> enumerate_tree(int depth) {
  std::vector<TreeEdge> edges;
  std::vector<std::pair<Triple, Triple>> frontier;  // (node, where we came from)
  const Triple root{1, 1, 1};
  frontier.push_back({root, Triple{0, 0, 0}});
  for (int level = 0; level < depth; ++level) {
    std::vector<std::pair<Triple, Triple>> next;
    for (const auto& [node, from] : frontier) {
      std::set<Triple, decltype(&operator_less)> seen(&operator_less);
      for (int j = 0; j < 3; ++j) {
        Triple n = sorted(mutate_triple(node, j));
        if (n == from || n == node || !seen.insert(n).second) continue;
        next.push_back({n, node});
      }
    }
    std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return operator_less(a.second, b.second);
      return operator_less(a.first, b.first);
    });
    for (const auto& [n, from] : next) edges.push_back({from, n});
    frontier = std::move(next);
  }
  return edges;
}

std::string triple_to_string(const Triple& t) {
  return t[0].get_str() + "," + t[1].get_str() + "," + t[2].get_str();
}

std::string edge_to_string(const TreeEdge& e) {
  return triple_to_string(e.lower) + ":(" + triple_to_string(e.upper) + ")";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '(')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == ')')) s.remove_suffix(1);
  return s;
}

}  // namespace

Triple parse_triple(std::string_view s) {
  s = trim(s);
  Triple t;
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t end = s.find(',', start);
    if ((i < 2) != (end != std::string_view::npos)) throw InvalidInput("triple must be 'a,b,c'");
    std::string part(trim(s.substr(start, end == std::string_view::npos ? s.size() - start : end - start)));
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("triple entries must be positive integers");
    t[i] = mpz_class(part);
    start = end + 1;
  }
  return t;
}

std::pair<Triple, Triple> parse_pair(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) throw InvalidInput("pair must be 'a,b,c:a',b',c''");
  return {parse_triple(s.substr(0, colon)), parse_triple(s.substr(colon + 1))};
}

std::vector<int> parse_path(std::string_view s) {
  std::vector<int> path;
  s = trim(s);
  if (s.empty()) return path;
  std::size_t start = 0;
  while (true) {
    std::size_t end = s.find(',', start);
    auto part = trim(s.substr(start, end == std::string_view::npos ? s.size() - start : end - start));
    if (part != "0" && part != "1" && part != "2") throw InvalidInput("path entries must be 0, 1 or 2");
    path.push_back(part[0] - '0');
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return path;
}

std::string path_to_string(const std::vector<int>& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) os << (i ? "," : "") << path[i];
  return os.str();
}

std::vector<int> canonical_path(const Triple& target) {
  auto chain = chain_to_root_reversed(target);
  std::vector<int> path;
  Triple cur{1, 1, 1};
  for (std::size_t i = 1; i < chain.size(); ++i) {
    int j = mutation_index(cur, chain[i]);
    path.push_back(j);
    cur = mutate_triple(cur, j);
  }
  return path;
}

Triple triple_along_path(const std::vector<int>& path) {
  Triple t{1, 1, 1};
  for (int j : path) t = mutate_triple(t, j);
  return t;
}

}  // namespace whitneypot
