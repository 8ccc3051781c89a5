#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace whitneypot {

using Triple = std::array<mpz_class, 3>;

bool is_markov(const Triple& t);
// Entry j replaced by 3 * (product of the other two) - entry.
Triple mutate_triple(const Triple& t, int j);
Triple sorted(const Triple& t);
bool operator_less(const Triple& a, const Triple& b);

// Neighbour one step closer to (1,1,1), sorted; nullopt at the root.
std::optional<Triple> parent(const Triple& t);
int tree_depth(const Triple& t);

// Sorted triples from (1,1,1) to t, inclusive.
std::vector<Triple> chain_to_root_reversed(const Triple& t);

// Index j whose mutation takes `from` (ordered) to a triple equal to `to` as
// unordered triples, preferring the lowest index.  -1 when not adjacent.
int mutation_index(const Triple& from, const Triple& to);
bool adjacent(const Triple& a, const Triple& b);

struct TreeEdge {
  Triple lower;  // closer to the root
  Triple upper;
};

// Unordered tree edges whose upper endpoint is within `depth` of the root,
// breadth first, each level in ascending order.
std::vector<TreeEdge> enumerate_tree(int depth);

std::string triple_to_string(const Triple& t);
std::string edge_to_string(const TreeEdge& e);
Triple parse_triple(std::string_view s);
// "a,b,c:a',b',c'" with optional parentheses around either side.
std::pair<Triple, Triple> parse_pair(std::string_view s);

// Path indices "0,2,1"; empty string gives the empty path.
std::vector<int> parse_path(std::string_view s);
std::string path_to_string(const std::vector<int>& path);

// Ordered path from (1,1,1) reaching `target` (as an unordered triple),
// choosing the lowest index at every step.
std::vector<int> canonical_path(const Triple& target);
Triple triple_along_path(const std::vector<int>& path);

}  // namespace whitneypot
