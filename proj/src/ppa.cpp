#include "whitneypot/ppa.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "whitneypot/errors.hpp"

namespace whitneypot::ppa {

// ---------------------------------------------------------------- quivers

int Quiver::vertex_index(std::string_view name) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].name == name) return static_cast<int>(i);
  return -1;
}

int Quiver::edge_index(std::string_view name) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<int> Quiver::incident(int v) const {
  std::vector<int> out;
  for (std::size_t a = 0; a < edges.size(); ++a)
    if (edges[a].source == v || edges[a].target == v) out.push_back(static_cast<int>(a));
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

std::vector<bool> first_spanning_tree(const Quiver& q) {
  UnionFind uf(q.vertices.size());
  std::vector<bool> tree(q.edges.size(), false);
  for (std::size_t a = 0; a < q.edges.size(); ++a)
    tree[a] = uf.unite(q.edges[a].source, q.edges[a].target);
  return tree;
}

void validate(const Quiver& q) {
  const int n = static_cast<int>(q.vertices.size());
  for (const auto& v : q.vertices) {
    if (v.genus < 0) throw InvalidInput("vertex " + v.name + " has negative genus");
    if (static_cast<int>(v.reversed.size()) != v.genus)
      throw InvalidInput("vertex " + v.name + " needs one handle flag per genus");
  }
  for (const auto& e : q.edges)
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n)
      throw InvalidInput("edge " + e.name + " has an unknown endpoint");
  if (q.in_tree.size() != q.edges.size()) throw InvalidInput("spanning tree flags do not match the edges");
  UnionFind uf(q.vertices.size());
  for (std::size_t a = 0; a < q.edges.size(); ++a)
    if (q.in_tree[a] && !uf.unite(q.edges[a].source, q.edges[a].target))
      throw InvalidInput("tree edge " + q.edges[a].name + " closes a cycle");
  for (std::size_t a = 0; a < q.edges.size(); ++a)
    if (!q.in_tree[a] && uf.find(q.edges[a].source) != uf.find(q.edges[a].target))
      throw InvalidInput("tree does not span: edge " + q.edges[a].name + " joins two of its components");
}

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

Quiver parse_quiver(std::string_view text) {
  static const std::regex vertex_re(R"(^vertex\s+(\S+)(?:\s+genus\s+(\d+))?(?:\s+reversed\s+([\d,\s]+))?$)");
  static const std::regex edge_re(R"(^edge\s+([^:\s]+)\s*:\s*(\S+)\s*->\s*(\S+)$)");
  static const std::regex tree_re(R"(^tree\s*:(.*)$)");

  Quiver q;
  std::optional<std::vector<std::string>> tree_names;
  std::set<std::string> declared;
  auto vertex = [&](const std::string& name) {
    int i = q.vertex_index(name);
    if (i >= 0) return i;
    q.vertices.push_back({name, 0, {}});
    return static_cast<int>(q.vertices.size()) - 1;
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::smatch m;
    if (std::regex_match(line, m, vertex_re)) {
      const std::string name = m[1];
      // Edge lines may create a vertex before its vertex line; two vertex lines are an error.
      if (!declared.insert(name).second) throw InvalidInput("vertex " + name + " declared twice");
      Vertex& v = q.vertices[vertex(name)];
      v.genus = m[2].matched ? std::stoi(m[2]) : 0;
      v.reversed.assign(v.genus, false);
      if (m[3].matched)
        for (const auto& h : split_commas(m[3])) {
          int i = std::stoi(h);
          if (i < 1 || i > v.genus) throw InvalidInput("line " + std::to_string(lineno) + ": no handle " + h);
          v.reversed[i - 1] = true;
        }
    } else if (std::regex_match(line, m, edge_re)) {
      if (q.edge_index(m[1].str()) >= 0) throw InvalidInput("edge " + m[1].str() + " declared twice");
      const int s = vertex(m[2]);
      const int t = vertex(m[3]);
      q.edges.push_back({m[1], s, t});
    } else if (std::regex_match(line, m, tree_re)) {
      if (tree_names) throw InvalidInput("more than one tree line");
      tree_names = split_commas(m[1]);
    } else {
      throw InvalidInput("line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
    }
  }
  if (q.vertices.empty()) throw InvalidInput("quiver has no vertices");

  if (tree_names) {
    q.in_tree.assign(q.edges.size(), false);
    for (const auto& name : *tree_names) {
      int a = q.edge_index(name);
      if (a < 0) throw InvalidInput("tree names unknown edge " + name);
      q.in_tree[a] = true;
    }
  } else {
    q.in_tree = first_spanning_tree(q);
  }
  validate(q);
  return q;
}

std::string to_text(const Quiver& q) {
  std::ostringstream out;
  for (const auto& v : q.vertices) {
    out << "vertex " << v.name << " genus " << v.genus;
    std::vector<std::string> rev;
    for (std::size_t i = 0; i < v.reversed.size(); ++i)
      if (v.reversed[i]) rev.push_back(std::to_string(i + 1));
    if (!rev.empty()) {
      out << " reversed ";
      for (std::size_t i = 0; i < rev.size(); ++i) out << (i ? "," : "") << rev[i];
    }
    out << "\n";
  }
  for (const auto& e : q.edges)
    out << "edge " << e.name << ": " << q.vertices[e.source].name << " -> " << q.vertices[e.target].name << "\n";
  out << "tree:";
  bool first = true;
  for (std::size_t a = 0; a < q.edges.size(); ++a)
    if (q.in_tree[a]) {
      out << (first ? " " : ",") << q.edges[a].name;
      first = false;
    }
  out << "\n";
  return out.str();
}

// ---------------------------------------------------------------- letters and words

bool is_invertible_kind(Kind k) { return k != Kind::P && k != Kind::Q; }

Letter inverse(const Letter& l) {
  Letter r = l;
  switch (l.kind) {
    case Kind::T: r.kind = Kind::TInv; break;
    case Kind::TInv: r.kind = Kind::T; break;
    case Kind::TBar: r.kind = Kind::TBarInv; break;
    case Kind::TBarInv: r.kind = Kind::TBar; break;
    case Kind::X: r.kind = Kind::XInv; break;
    case Kind::XInv: r.kind = Kind::X; break;
    case Kind::Y: r.kind = Kind::YInv; break;
    case Kind::YInv: r.kind = Kind::Y; break;
    default: throw InvalidInput("p and q are not invertible generators");
  }
  return r;
}

Letter base(const Letter& l) {
  switch (l.kind) {
    case Kind::TInv:
    case Kind::TBarInv:
    case Kind::XInv:
    case Kind::YInv: return inverse(l);
    default: return l;
  }
}

void Element::add(const Word& w, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Element Element::idempotent(int v) {
  Element e;
  e.add(Word{v, v, {}}, 1);
  return e;
}

Element Element::letter(const Algebra& alg, const Letter& l) {
  if (!alg.has_generator(l)) throw InvalidInput("no generator " + alg.letter_name(l) + " in this presentation");
  Element e;
  e.add(Word{alg.source(l), alg.target(l), {l}}, 1);
  return e;
}

Element Element::word(const Algebra& alg, int start, const std::vector<Letter>& letters) {
  int at = start;
  for (const auto& l : letters) {
    if (!alg.has_generator(l)) throw InvalidInput("no generator " + alg.letter_name(l) + " in this presentation");
    if (alg.source(l) != at) throw InvalidInput("word is not composable at " + alg.letter_name(l));
    at = alg.target(l);
  }
  Element e;
  e.add(Word{start, at, letters}, 1);
  return e;
}

Element& Element::operator+=(const Element& o) {
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

Element Element::operator-() const {
  Element r;
  for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
  return r;
}

Element operator+(Element a, const Element& b) { return a += b; }
Element operator-(Element a, const Element& b) { return a -= b; }

Element operator*(const mpz_class& s, const Element& a) {
  Element r;
  for (const auto& [w, c] : a.terms()) r.add(w, s * c);
  return r;
}

Element compose(const Element& a, const Element& b) {
  Element r;
  for (const auto& [u, cu] : a.terms())
    for (const auto& [v, cv] : b.terms()) {
      if (u.end != v.start) continue;
      Word w{u.start, v.end, u.letters};
      w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
      r.add(w, cu * cv);
    }
  return r;
}

Element operator*(const Element& a, const Element& b) { return compose(a, b); }

// ---------------------------------------------------------------- algebra

Algebra::Algebra(Quiver q, Presentation p) : q_(std::move(q)), p_(p) { validate(q_); }

bool Algebra::has_generator(const Letter& l) const {
  const int ne = static_cast<int>(q_.edges.size());
  switch (l.kind) {
    case Kind::P:
    case Kind::Q: return l.index >= 0 && l.index < ne;
    case Kind::T:
    case Kind::TInv:
      return l.index >= 0 && l.index < ne && (p_ == Presentation::BPrime || !q_.in_tree[l.index]);
    case Kind::TBar:
    case Kind::TBarInv: return p_ == Presentation::BPrime && l.index >= 0 && l.index < ne;
    default:
      return l.vertex >= 0 && l.vertex < static_cast<int>(q_.vertices.size()) && l.index >= 0 &&
             l.index < q_.vertices[l.vertex].genus;
  }
}

int Algebra::source(const Letter& l) const {
  switch (l.kind) {
    case Kind::P:
    case Kind::T:
    case Kind::TInv: return q_.edges.at(l.index).source;
    case Kind::Q:
    case Kind::TBar:
    case Kind::TBarInv: return q_.edges.at(l.index).target;
    default: return l.vertex;
  }
}

int Algebra::target(const Letter& l) const {
  switch (l.kind) {
    case Kind::P: return q_.edges.at(l.index).target;
    case Kind::Q: return q_.edges.at(l.index).source;
    default: return source(l);
  }
}

std::vector<Letter> Algebra::generators() const {
  std::vector<Letter> out;
  for (int a = 0; a < static_cast<int>(q_.edges.size()); ++a)
    for (Kind k : {Kind::P, Kind::Q, Kind::T, Kind::TBar}) {
      Letter l{k, a, 0};
      if (has_generator(l)) out.push_back(l);
    }
  for (int v = 0; v < static_cast<int>(q_.vertices.size()); ++v)
    for (int i = 0; i < q_.vertices[v].genus; ++i) {
      out.push_back({Kind::X, i, v});
      out.push_back({Kind::Y, i, v});
    }
  return out;
}

std::vector<Letter> Algebra::commutator_word(int v, int handle) const {
  const Letter x{Kind::X, handle, v}, y{Kind::Y, handle, v};
  if (q_.vertices.at(v).reversed.at(handle)) return {inverse(y), inverse(x), y, x};
  return {inverse(x), inverse(y), x, y};
}

namespace {

std::vector<Letter> inverse_word(const std::vector<Letter>& w) {
  std::vector<Letter> r;
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(inverse(*it));
  return r;
}

std::vector<Letter> handle_prefix(const Algebra& alg, int v, int count) {
  std::vector<Letter> w;
  for (int i = 0; i < count; ++i) {
    auto c = alg.commutator_word(v, i);
    w.insert(w.end(), c.begin(), c.end());
  }
  return w;
}

}  // namespace

Element Algebra::handle_product(int v) const {
  return Element::word(*this, v, handle_prefix(*this, v, q_.vertices.at(v).genus));
}

Element Algebra::handle_product_inverse(int v) const {
  return Element::word(*this, v, inverse_word(handle_prefix(*this, v, q_.vertices.at(v).genus)));
}

std::vector<Letter> Algebra::boundary_factors(int v) const {
  std::vector<Letter> out;
  for (int a : q_.incident(v)) {
    if (q_.edges[a].source == v) out.push_back({Kind::TInv, a, 0});
    if (q_.edges[a].target == v) out.push_back({Kind::TBar, a, 0});
  }
  return out;
}

std::vector<Element> Algebra::relations() const {
  std::vector<Element> rel;
  auto inverse_pair = [&](const Letter& l) {
    const int v = source(l);
    rel.push_back(Element::word(*this, v, {l, inverse(l)}) - Element::idempotent(v));
    rel.push_back(Element::word(*this, v, {inverse(l), l}) - Element::idempotent(v));
  };
  for (int a = 0; a < static_cast<int>(q_.edges.size()); ++a) {
    const int s = q_.edges[a].source, t = q_.edges[a].target;
    const Letter p{Kind::P, a, 0}, q{Kind::Q, a, 0}, ta{Kind::T, a, 0}, tb{Kind::TBar, a, 0};
    if (has_generator(ta)) {
      inverse_pair(ta);
      rel.push_back(Element::idempotent(s) - Element::word(*this, s, {p, q}) - Element::letter(*this, ta));
    }
    if (has_generator(tb)) {
      inverse_pair(tb);
      rel.push_back(Element::idempotent(t) - Element::word(*this, t, {q, p}) - Element::letter(*this, tb));
    }
  }
  for (int v = 0; v < static_cast<int>(q_.vertices.size()); ++v) {
    for (int i = 0; i < q_.vertices[v].genus; ++i) {
      inverse_pair({Kind::X, i, v});
      inverse_pair({Kind::Y, i, v});
    }
    if (p_ == Presentation::BPrime) {
      rel.push_back(Element::word(*this, v, boundary_factors(v)) - handle_product(v));
    } else {
      Element lhs = Element::idempotent(v), rhs = handle_product(v);
      for (int a = 0; a < static_cast<int>(q_.edges.size()); ++a) {
        const Letter p{Kind::P, a, 0}, q{Kind::Q, a, 0};
        if (q_.edges[a].source == v)
          lhs = lhs * (Element::idempotent(v) - Element::word(*this, v, {p, q}));
      }
      for (int a = 0; a < static_cast<int>(q_.edges.size()); ++a) {
        const Letter p{Kind::P, a, 0}, q{Kind::Q, a, 0};
        if (q_.edges[a].target == v)
          rhs = rhs * (Element::idempotent(v) - Element::word(*this, v, {q, p}));
      }
      rel.push_back(lhs - rhs);
    }
  }
  return rel;
}

std::string Algebra::letter_name(const Letter& l) const {
  auto edge = [&]() -> std::string {
    if (l.index >= 0 && l.index < static_cast<int>(q_.edges.size())) return q_.edges[l.index].name;
    return "?" + std::to_string(l.index);
  };
  auto handle = [&]() {
    std::string v = (l.vertex >= 0 && l.vertex < static_cast<int>(q_.vertices.size())) ? q_.vertices[l.vertex].name
                                                                                        : "?";
    return std::to_string(l.index + 1) + "_" + v;
  };
  switch (l.kind) {
    case Kind::P: return "p_" + edge();
    case Kind::Q: return "q_" + edge();
    case Kind::T: return "t_" + edge();
    case Kind::TInv: return "t_" + edge() + "^-1";
    case Kind::TBar: return "tbar_" + edge();
    case Kind::TBarInv: return "tbar_" + edge() + "^-1";
    case Kind::X: return "x" + handle();
    case Kind::XInv: return "x" + handle() + "^-1";
    case Kind::Y: return "y" + handle();
    case Kind::YInv: return "y" + handle() + "^-1";
  }
  return "?";
}

std::optional<Letter> Algebra::parse_letter(std::string_view name) const {
  for (const auto& g : generators()) {
    if (letter_name(g) == name) return g;
    if (is_invertible_kind(g.kind) && letter_name(inverse(g)) == name) return inverse(g);
  }
  return std::nullopt;
}

std::string to_text(const Element& e, const Algebra& alg) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : e.terms()) {
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string body;
    if (w.letters.empty()) {
      body = "e_" + alg.quiver().vertices[w.start].name;
    } else {
      for (std::size_t i = 0; i < w.letters.size(); ++i) body += (i ? "*" : "") + alg.letter_name(w.letters[i]);
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += body;
  }
  return out;
}

// ---------------------------------------------------------------- reduction

namespace {

struct Rules {
  std::map<std::pair<Letter, Letter>, Element> pairs;
  std::map<Letter, Element> singles;
  std::vector<std::pair<std::vector<Letter>, Element>> subwords;
};

void add_handle_rules(const Algebra& alg, int v, Rules& r) {
  const int g = alg.quiver().vertices[v].genus;
  if (g == 0) return;
  // C_1 ... C_g = e_v solved for the last commutator.
  const auto prefix = handle_prefix(alg, v, g - 1);
  const auto last = alg.commutator_word(v, g - 1);
  r.subwords.emplace_back(last, Element::word(alg, v, inverse_word(prefix)));
  r.subwords.emplace_back(inverse_word(last), Element::word(alg, v, prefix));
}

Rules build_rules(const Algebra& alg) {
  Rules r;
  const Quiver& q = alg.quiver();
  const int ne = static_cast<int>(q.edges.size());
  auto e = [](int v) { return Element::idempotent(v); };

  if (alg.presentation() == Presentation::BPrime) {
    for (int a = 0; a < ne; ++a) {
      const int s = q.edges[a].source, t = q.edges[a].target;
      r.pairs[{{Kind::P, a, 0}, {Kind::Q, a, 0}}] = e(s) - Element::letter(alg, {Kind::T, a, 0});
      r.pairs[{{Kind::Q, a, 0}, {Kind::P, a, 0}}] = e(t) - Element::letter(alg, {Kind::TBar, a, 0});
    }
    for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) {
      auto f = alg.boundary_factors(v);
      if (f.empty()) {
        add_handle_rules(alg, v, r);
        continue;
      }
      // f_1 ... f_k = R_v solved for f_k.
      const Letter last = f.back();
      f.pop_back();
      Element head = Element::word(alg, v, f);
      Element head_inv = Element::word(alg, v, inverse_word(f));
      r.singles[last] = head_inv * alg.handle_product(v);
      r.singles[inverse(last)] = alg.handle_product_inverse(v) * head;
    }
    return r;
  }

  for (int a = 0; a < ne; ++a)
    if (!q.in_tree[a])
      r.pairs[{{Kind::P, a, 0}, {Kind::Q, a, 0}}] = e(q.edges[a].source) - Element::letter(alg, {Kind::T, a, 0});
  for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) {
    std::vector<int> in, out;
    for (int a = 0; a < ne; ++a) {
      if (q.edges[a].target == v) in.push_back(a);
      if (q.edges[a].source == v) out.push_back(a);
    }
    if (in.size() == 1) {
      const int b = in.front();
      Element prod = e(v);
      for (int a : out) prod = prod * (e(v) - Element::word(alg, v, {{Kind::P, a, 0}, {Kind::Q, a, 0}}));
      r.pairs[{{Kind::Q, b, 0}, {Kind::P, b, 0}}] = e(v) - alg.handle_product_inverse(v) * prod;
    } else if (in.empty() && out.size() == 1) {
      const int a = out.front();
      if (q.in_tree[a]) {
        r.pairs[{{Kind::P, a, 0}, {Kind::Q, a, 0}}] = e(v) - alg.handle_product(v);
      } else {
        r.singles[{Kind::T, a, 0}] = alg.handle_product(v);
        r.singles[{Kind::TInv, a, 0}] = alg.handle_product_inverse(v);
      }
    } else if (in.empty() && out.empty()) {
      add_handle_rules(alg, v, r);
    }
  }
  return r;
}

// Replace letters [i, i+len) of w by rhs.
void splice(const Word& w, std::size_t i, std::size_t len, const Element& rhs, const mpz_class& c, Element& out) {
  for (const auto& [u, cu] : rhs.terms()) {
    Word n{w.start, w.end, {}};
    n.letters.reserve(w.letters.size() - len + u.letters.size());
    n.letters.insert(n.letters.end(), w.letters.begin(), w.letters.begin() + static_cast<std::ptrdiff_t>(i));
    n.letters.insert(n.letters.end(), u.letters.begin(), u.letters.end());
    n.letters.insert(n.letters.end(), w.letters.begin() + static_cast<std::ptrdiff_t>(i + len), w.letters.end());
    out.add(n, c * cu);
  }
}

bool rewrite_once(const Word& w, const mpz_class& c, const Rules& r, Element& out) {
  const auto& L = w.letters;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (i + 1 < L.size() && is_invertible_kind(L[i].kind) && L[i + 1] == inverse(L[i])) {
      Word n{w.start, w.end, {}};
      n.letters.insert(n.letters.end(), L.begin(), L.begin() + static_cast<std::ptrdiff_t>(i));
      n.letters.insert(n.letters.end(), L.begin() + static_cast<std::ptrdiff_t>(i + 2), L.end());
      out.add(n, c);
      return true;
    }
    if (i + 1 < L.size()) {
      auto it = r.pairs.find({L[i], L[i + 1]});
      if (it != r.pairs.end()) {
        splice(w, i, 2, it->second, c, out);
        return true;
      }
    }
    if (auto it = r.singles.find(L[i]); it != r.singles.end()) {
      splice(w, i, 1, it->second, c, out);
      return true;
    }
    for (const auto& [pattern, rhs] : r.subwords) {
      if (i + pattern.size() > L.size()) continue;
      if (std::equal(pattern.begin(), pattern.end(), L.begin() + static_cast<std::ptrdiff_t>(i))) {
        splice(w, i, pattern.size(), rhs, c, out);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

ReduceResult reduce(const Element& e, const Algebra& alg, int max_passes) {
  const Rules rules = build_rules(alg);
  ReduceResult res;
  res.value = e;
  while (res.passes < max_passes) {
    Element next;
    bool changed = false;
    for (const auto& [w, c] : res.value.terms()) {
      if (rewrite_once(w, c, rules, next))
        changed = true;
      else
        next.add(w, c);
    }
    res.value = std::move(next);
    ++res.passes;
    if (!changed) {
      res.complete = true;
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------- matrices

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RatMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const mpq_class& x) { return x == 0; });
}

mpq_class RatMatrix::det() const {
  if (rows_ != cols_) throw InvalidInput("determinant of a non-square matrix");
  RatMatrix m = *this;
  mpq_class d = 1;
  const std::size_t n = rows_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      mpq_class f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return d;
}

std::optional<RatMatrix> RatMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  const std::size_t n = rows_;
  RatMatrix m = *this, inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    mpq_class s = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= s;
      inv(c, j) /= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      mpq_class f = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix shapes differ");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

RatMatrix& RatMatrix::operator-=(const RatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("matrix shapes differ");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

RatMatrix& RatMatrix::operator*=(const mpq_class& s) {
  for (auto& x : a_) x *= s;
  return *this;
}

RatMatrix operator+(RatMatrix a, const RatMatrix& b) { return a += b; }
RatMatrix operator-(RatMatrix a, const RatMatrix& b) { return a -= b; }
RatMatrix operator*(const mpq_class& s, RatMatrix a) { return a *= s; }

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matrix shapes do not compose");
  RatMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

nlohmann::json to_json(const RatMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(row);
  }
  return rows;
}

namespace {

mpq_class rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_string()) {
    mpq_class q;
    if (q.set_str(j.get<std::string>(), 10) != 0) throw InvalidInput("bad rational '" + j.get<std::string>() + "'");
    if (q.get_den() == 0) throw InvalidInput("zero denominator");
    q.canonicalize();
    return q;
  }
  throw InvalidInput("matrix entries must be integers or rational strings");
}

}  // namespace

RatMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidInput("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InvalidInput("matrix rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rational_from_json(j[i][c]);
  }
  return m;
}

// ---------------------------------------------------------------- evaluation

namespace {

RatMatrix base_matrix(const Algebra& alg, const Representation& rho, const Letter& l) {
  if (auto it = rho.mats.find(l); it != rho.mats.end()) return it->second;
  const Letter p{Kind::P, l.index, 0}, q{Kind::Q, l.index, 0};
  auto need = [&](const Letter& g) -> const RatMatrix& {
    auto it = rho.mats.find(g);
    if (it == rho.mats.end()) throw InvalidInput("representation has no matrix for " + alg.letter_name(g));
    return it->second;
  };
  if (l.kind == Kind::T) {
    const int v = alg.source(l);
    return RatMatrix::identity(rho.dims.at(v)) - need(p) * need(q);
  }
  if (l.kind == Kind::TBar) {
    const int v = alg.source(l);
    return RatMatrix::identity(rho.dims.at(v)) - need(q) * need(p);
  }
  need(l);
  return {};
}

class Evaluator {
 public:
  Evaluator(const Algebra& alg, const Representation& rho) : alg_(alg), rho_(rho) {}

  const RatMatrix* get(const Letter& l) {
    if (auto it = cache_.find(l); it != cache_.end()) return it->second ? &*it->second : nullptr;
    if (!alg_.has_generator(l)) throw InvalidInput("no generator " + alg_.letter_name(l) + " in this presentation");
    std::optional<RatMatrix> m;
    if (base(l) == l) {
      m = base_matrix(alg_, rho_, l);
    } else {
      const RatMatrix* b = get(base(l));
      if (b) m = b->inverse();
    }
    auto& slot = cache_[l];
    slot = std::move(m);
    return slot ? &*slot : nullptr;
  }

  RatMatrix word(const Word& w) {
    RatMatrix acc = RatMatrix::identity(rho_.dims.at(w.start));
    for (const auto& l : w.letters) {
      const RatMatrix* m = get(l);
      if (!m) throw InvalidInput(alg_.letter_name(base(l)) + " is not invertible in this representation");
      acc = acc * *m;
    }
    return acc;
  }

 private:
  const Algebra& alg_;
  const Representation& rho_;
  std::map<Letter, std::optional<RatMatrix>> cache_;
};

}  // namespace

std::optional<RatMatrix> letter_matrix(const Algebra& alg, const Representation& rho, const Letter& l) {
  Evaluator ev(alg, rho);
  const RatMatrix* m = ev.get(l);
  if (!m) return std::nullopt;
  return *m;
}

RatMatrix evaluate(const Element& e, const Algebra& alg, const Representation& rho, int start, int end) {
  Evaluator ev(alg, rho);
  RatMatrix acc(rho.dims.at(start), rho.dims.at(end));
  for (const auto& [w, c] : e.terms()) {
    if (w.start != start || w.end != end) throw InvalidInput("element mixes endpoints");
    acc += mpq_class(c) * ev.word(w);
  }
  return acc;
}

RatMatrix evaluate(const Element& e, const Algebra& alg, const Representation& rho) {
  if (e.is_zero()) throw InvalidInput("the zero element has no endpoints; pass them explicitly");
  const Word& w = e.terms().begin()->first;
  return evaluate(e, alg, rho, w.start, w.end);
}

bool evaluates_to_zero(const Element& e, const Algebra& alg, const Representation& rho) {
  Evaluator ev(alg, rho);
  std::map<std::pair<int, int>, RatMatrix> blocks;
  for (const auto& [w, c] : e.terms()) {
    auto key = std::pair{w.start, w.end};
    auto it = blocks.find(key);
    if (it == blocks.end()) it = blocks.emplace(key, RatMatrix(rho.dims.at(w.start), rho.dims.at(w.end))).first;
    it->second += mpq_class(c) * ev.word(w);
  }
  return std::all_of(blocks.begin(), blocks.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

bool check_representation(const Algebra& alg, const Representation& rho) {
  const Quiver& q = alg.quiver();
  if (rho.dims.size() != q.vertices.size()) throw InvalidInput("dimension vector does not match the quiver");
  for (int d : rho.dims)
    if (d < 0) throw InvalidInput("negative dimension");
  for (const auto& [l, m] : rho.mats) {
    if (!alg.has_generator(l) || base(l) != l)
      throw InvalidInput("representation assigns a matrix to a non-generator " + alg.letter_name(l));
    const auto rows = static_cast<std::size_t>(rho.dims[alg.source(l)]);
    const auto cols = static_cast<std::size_t>(rho.dims[alg.target(l)]);
    if (m.rows() != rows || m.cols() != cols)
      throw InvalidInput("matrix for " + alg.letter_name(l) + " has the wrong shape");
  }
  Evaluator ev(alg, rho);
  for (const auto& g : alg.generators()) {
    if (!is_invertible_kind(g.kind)) {
      if (!rho.mats.count(g)) throw InvalidInput("representation has no matrix for " + alg.letter_name(g));
      continue;
    }
    if (!ev.get(inverse(g))) return false;
  }
  for (const auto& r : alg.relations())
    if (!evaluates_to_zero(r, alg, rho)) return false;
  return true;
}

// ---------------------------------------------------------------- sampling

namespace {

class Sampler {
 public:
  explicit Sampler(std::mt19937_64& rng) : rng_(rng) {}

  int small(int lo = -2, int hi = 2) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(int num, int den) { return std::uniform_int_distribution<int>(0, den - 1)(rng_) < num; }

  RatMatrix random(std::size_t r, std::size_t c) {
    RatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = small();
    return m;
  }

  RatMatrix invertible(std::size_t n) {
    for (;;) {
      RatMatrix m = random(n, n);
      if (m.det() != 0) return m;
    }
  }

  // a e + b m, invertible, so it commutes with m.
  RatMatrix commuting(const RatMatrix& m) {
    for (;;) {
      RatMatrix c = mpq_class(small()) * RatMatrix::identity(m.rows()) + mpq_class(small()) * m;
      if (c.det() != 0) return c;
    }
  }

 private:
  std::mt19937_64& rng_;
};

RatMatrix inv(const RatMatrix& m) {
  auto r = m.inverse();
  if (!r) throw std::logic_error("sampler produced a singular matrix");
  return *r;
}

// Pairs (A_j, B_j) of invertible n x n matrices with prod_j A_j B_j A_j^-1 B_j^-1 = e.
std::vector<std::pair<RatMatrix, RatMatrix>> trivial_commutators(Sampler& s, std::size_t count, std::size_t n) {
  std::vector<std::pair<RatMatrix, RatMatrix>> out;
  while (out.size() + 1 < count) {
    RatMatrix a = s.invertible(n), b = s.invertible(n);
    out.emplace_back(a, b);
    out.emplace_back(b, a);
  }
  if (out.size() < count) {
    RatMatrix b = s.invertible(n);
    out.emplace_back(s.commuting(b), b);
  }
  return out;
}

void set_handle(Representation& rho, const Quiver& q, int v, int i, const RatMatrix& a, const RatMatrix& b) {
  // The commutator of handle i is [A, B] with A = x^-1, B = y^-1 (or swapped when reversed).
  const bool rev = q.vertices[v].reversed[i];
  rho.mats[{Kind::X, i, v}] = inv(rev ? b : a);
  rho.mats[{Kind::Y, i, v}] = inv(rev ? a : b);
}

// Non-loop edge (or degenerate loop) with p q = 0 = q p.
void degenerate_edge(Sampler& s, Representation& rho, const Quiver& q, int a) {
  const auto ds = static_cast<std::size_t>(rho.dims[q.edges[a].source]);
  const auto dt = static_cast<std::size_t>(rho.dims[q.edges[a].target]);
  RatMatrix p(ds, dt), qq(dt, ds);
  switch (s.small(0, 2)) {
    case 0: qq = s.random(dt, ds); break;
    case 1: p = s.random(ds, dt); break;
    default: break;
  }
  rho.mats[{Kind::P, a, 0}] = p;
  rho.mats[{Kind::Q, a, 0}] = qq;
}

void conjugate(Representation& rho, const Algebra& alg, const std::vector<RatMatrix>& S) {
  std::vector<RatMatrix> Sinv;
  for (const auto& m : S) Sinv.push_back(inv(m));
  for (auto& [l, m] : rho.mats) m = S[alg.source(l)] * m * Sinv[alg.target(l)];
}

void fill_derived(Representation& rho, const Algebra& alg) {
  for (const auto& g : alg.generators())
    if ((g.kind == Kind::T || g.kind == Kind::TBar) && !rho.mats.count(g)) rho.mats[g] = base_matrix(alg, rho, g);
}

Representation sample_bprime(const Algebra& alg, Sampler& s, const SampleOptions& opt) {
  const Quiver& q = alg.quiver();
  Representation rho;
  for (std::size_t v = 0; v < q.vertices.size(); ++v) rho.dims.push_back(s.small(opt.min_dim, opt.max_dim));

  for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) {
    const auto n = static_cast<std::size_t>(rho.dims[v]);
    std::vector<int> rich;
    for (int a : q.incident(v)) {
      if (!q.edges[a].is_loop()) continue;
      if (s.coin(1, 4))
        degenerate_edge(s, rho, q, a);
      else
        rich.push_back(a);
    }
    // A rich loop contributes t^-1 tbar = [T, P] with T = t^-1, P = p^-1.
    std::vector<std::pair<RatMatrix, RatMatrix>> loop_pairs;
    const int g = q.vertices[v].genus;
    const std::size_t matched = std::min<std::size_t>(rich.size(), g);
    for (std::size_t j = 0; j < matched; ++j) {
      RatMatrix T = s.invertible(n), P = s.invertible(n);
      loop_pairs.emplace_back(T, P);
      set_handle(rho, q, v, static_cast<int>(j), T, P);
    }
    for (auto& pr : trivial_commutators(s, rich.size() - matched, n)) loop_pairs.push_back(std::move(pr));
    auto extra = trivial_commutators(s, g - matched, n);
    for (std::size_t j = 0; j < extra.size(); ++j)
      set_handle(rho, q, v, static_cast<int>(matched + j), extra[j].first, extra[j].second);

    for (std::size_t j = 0; j < rich.size(); ++j) {
      const int a = rich[j];
      RatMatrix t = inv(loop_pairs[j].first), p = inv(loop_pairs[j].second);
      RatMatrix pinv = loop_pairs[j].second;
      rho.mats[{Kind::P, a, 0}] = p;
      rho.mats[{Kind::Q, a, 0}] = pinv * (RatMatrix::identity(n) - t);
    }
  }
  for (int a = 0; a < static_cast<int>(q.edges.size()); ++a)
    if (!q.edges[a].is_loop()) degenerate_edge(s, rho, q, a);
  fill_derived(rho, alg);

  std::vector<RatMatrix> S;
  for (int d : rho.dims) S.push_back(s.invertible(d));
  conjugate(rho, alg, S);
  return rho;
}

// Loops commute with their own t and every vertex has R_v = e.
Representation sample_b_commuting(const Algebra& alg, Sampler& s, const SampleOptions& opt) {
  const Quiver& q = alg.quiver();
  Representation rho;
  for (std::size_t v = 0; v < q.vertices.size(); ++v) rho.dims.push_back(s.small(opt.min_dim, opt.max_dim));
  for (int a = 0; a < static_cast<int>(q.edges.size()); ++a) {
    if (q.edges[a].is_loop() && !s.coin(1, 4)) {
      const auto n = static_cast<std::size_t>(rho.dims[q.edges[a].source]);
      RatMatrix p = s.invertible(n), t = s.commuting(p);
      rho.mats[{Kind::P, a, 0}] = p;
      rho.mats[{Kind::Q, a, 0}] = inv(p) * (RatMatrix::identity(n) - t);
    } else {
      degenerate_edge(s, rho, q, a);
    }
  }
  for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) {
    auto pairs = trivial_commutators(s, q.vertices[v].genus, rho.dims[v]);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      set_handle(rho, q, v, static_cast<int>(i), pairs[i].first, pairs[i].second);
  }
  fill_derived(rho, alg);
  std::vector<RatMatrix> S;
  for (int d : rho.dims) S.push_back(s.invertible(d));
  conjugate(rho, alg, S);
  return rho;
}

}  // namespace

Representation random_representation(const Algebra& alg, std::mt19937_64& rng, const SampleOptions& opt) {
  if (opt.min_dim < 1 || opt.max_dim < opt.min_dim) throw InvalidInput("bad dimension range");
  Sampler s(rng);
  Representation rho;
  if (alg.presentation() == Presentation::BPrime) {
    rho = sample_bprime(alg, s, opt);
  } else if (alg.quiver().vertices.size() == 1 && s.coin(3, 4)) {
    Algebra bp(alg.quiver(), Presentation::BPrime);
    rho = bprime_to_b(bp, sample_bprime(bp, s, opt));
  } else {
    rho = sample_b_commuting(alg, s, opt);
  }
  if (!check_representation(alg, rho)) throw std::logic_error("sampled representation violates the relations");
  return rho;
}

nlohmann::json to_json(const Representation& rho, const Algebra& alg) {
  nlohmann::json dims = nlohmann::json::object(), mats = nlohmann::json::object();
  for (std::size_t v = 0; v < rho.dims.size(); ++v) dims[alg.quiver().vertices[v].name] = rho.dims[v];
  for (const auto& [l, m] : rho.mats) mats[alg.letter_name(l)] = to_json(m);
  return {{"dims", dims}, {"matrices", mats}};
}

Representation representation_from_json(const nlohmann::json& j, const Algebra& alg) {
  const Quiver& q = alg.quiver();
  Representation rho;
  rho.dims.assign(q.vertices.size(), -1);
  const auto& dims = j.at("dims");
  if (dims.is_array()) {
    if (dims.size() != q.vertices.size()) throw InvalidInput("dimension vector does not match the quiver");
    for (std::size_t v = 0; v < dims.size(); ++v) rho.dims[v] = dims[v].get<int>();
  } else {
    for (const auto& [name, d] : dims.items()) {
      int v = q.vertex_index(name);
      if (v < 0) throw InvalidInput("unknown vertex " + name);
      rho.dims[v] = d.get<int>();
    }
  }
  for (std::size_t v = 0; v < rho.dims.size(); ++v)
    if (rho.dims[v] < 0) throw InvalidInput("no dimension for vertex " + q.vertices[v].name);
  for (const auto& [name, m] : j.at("matrices").items()) {
    auto l = alg.parse_letter(name);
    if (!l || base(*l) != *l) throw InvalidInput("unknown generator " + name);
    rho.mats[*l] = matrix_from_json(m);
  }
  return rho;
}

// ---------------------------------------------------------------- B and B'

namespace {

void require_one_vertex(const Algebra& alg, Presentation want) {
  if (alg.presentation() != want) throw InvalidInput("wrong presentation for the dictionary");
  if (alg.quiver().vertices.size() != 1) throw InvalidInput("the B/B' dictionary is for one-vertex quivers");
}

// Handle j of B' is built from handle g-1-j of B; x and y trade places when
// both handles carry the same orientation flag.
bool swaps(const Quiver& q, int j) {
  const auto& rev = q.vertices[0].reversed;
  return rev[q.vertices[0].genus - 1 - j] == rev[j];
}

RatMatrix must(const std::optional<RatMatrix>& m, const char* what) {
  if (!m) throw InvalidInput(std::string(what) + " is not invertible");
  return *m;
}

}  // namespace

Representation b_to_bprime(const Algebra& b, const Representation& rho) {
  require_one_vertex(b, Presentation::B);
  const Quiver& q = b.quiver();
  const Algebra bp(q, Presentation::BPrime);
  const auto n = static_cast<std::size_t>(rho.dims.at(0));
  const RatMatrix e = RatMatrix::identity(n);
  Representation out;
  out.dims = rho.dims;
  RatMatrix S = e, Sbar = e;
  for (int a = 0; a < static_cast<int>(q.edges.size()); ++a) {
    const RatMatrix p = rho.mats.at({Kind::P, a, 0}), qq = rho.mats.at({Kind::Q, a, 0});
    const RatMatrix t = base_matrix(b, rho, {Kind::T, a, 0});
    const RatMatrix tbar = e - qq * p;
    const RatMatrix c = must(Sbar.inverse(), "tbar prefix") * S;
    const RatMatrix cinv = must(c.inverse(), "conjugator");
    out.mats[{Kind::P, a, 0}] = c * p;
    out.mats[{Kind::Q, a, 0}] = qq * cinv;
    out.mats[{Kind::T, a, 0}] = c * t * cinv;
    out.mats[{Kind::TBar, a, 0}] = tbar;
    S = S * t;
    Sbar = Sbar * tbar;
  }
  const RatMatrix Sinv = must(S.inverse(), "t product");
  const int g = q.vertices[0].genus;
  for (int j = 0; j < g; ++j) {
    const int i = g - 1 - j;
    const RatMatrix x = rho.mats.at({Kind::X, i, 0}), y = rho.mats.at({Kind::Y, i, 0});
    const bool sw = swaps(q, j);
    out.mats[{Kind::X, j, 0}] = Sinv * (sw ? y : x) * S;
    out.mats[{Kind::Y, j, 0}] = Sinv * (sw ? x : y) * S;
  }
  return out;
}

Representation bprime_to_b(const Algebra& bprime, const Representation& rho) {
  require_one_vertex(bprime, Presentation::BPrime);
  const Quiver& q = bprime.quiver();
  const auto n = static_cast<std::size_t>(rho.dims.at(0));
  const RatMatrix e = RatMatrix::identity(n);
  Representation out;
  out.dims = rho.dims;
  RatMatrix S = e, Sbar = e;
  for (int a = 0; a < static_cast<int>(q.edges.size()); ++a) {
    const RatMatrix p = rho.mats.at({Kind::P, a, 0}), qq = rho.mats.at({Kind::Q, a, 0});
    const RatMatrix t = base_matrix(bprime, rho, {Kind::T, a, 0});
    const RatMatrix tbar = base_matrix(bprime, rho, {Kind::TBar, a, 0});
    const RatMatrix c = must(Sbar.inverse(), "tbar prefix") * S;
    const RatMatrix cinv = must(c.inverse(), "conjugator");
    const RatMatrix tb = cinv * t * c;
    out.mats[{Kind::P, a, 0}] = cinv * p;
    out.mats[{Kind::Q, a, 0}] = qq * c;
    out.mats[{Kind::T, a, 0}] = tb;
    S = S * tb;
    Sbar = Sbar * tbar;
  }
  const RatMatrix Sinv = must(S.inverse(), "t product");
  const int g = q.vertices[0].genus;
  for (int j = 0; j < g; ++j) {
    const int i = g - 1 - j;
    const RatMatrix x = S * rho.mats.at({Kind::X, j, 0}) * Sinv, y = S * rho.mats.at({Kind::Y, j, 0}) * Sinv;
    const bool sw = swaps(q, j);
    out.mats[{Kind::X, i, 0}] = sw ? y : x;
    out.mats[{Kind::Y, i, 0}] = sw ? x : y;
  }
  return out;
}

Element dictionary_image(const Algebra& b, const Letter& g) {
  require_one_vertex(b, Presentation::B);
  const Quiver& q = b.quiver();
  const int m = static_cast<int>(q.edges.size());
  const Element e = Element::idempotent(0);
  auto L = [&](Kind k, int i) { return Element::letter(b, {k, i, 0}); };
  auto tbar = [&](int a) { return e - Element::word(b, 0, {{Kind::Q, a, 0}, {Kind::P, a, 0}}); };
  auto S = [&](int k) {  // t_0 ... t_{k-1}
    Element r = e;
    for (int a = 0; a < k; ++a) r = r * L(Kind::T, a);
    return r;
  };
  auto Sinv = [&](int k) {
    Element r = e;
    for (int a = k - 1; a >= 0; --a) r = r * L(Kind::TInv, a);
    return r;
  };
  // From S_m = R Sbar_m: tbar_a^-1 = tbar_{a+1} ... tbar_m S_m^-1 R tbar_1 ... tbar_{a-1}.
  auto tbar_inv = [&](int a) {
    Element r = e;
    for (int c = a + 1; c < m; ++c) r = r * tbar(c);
    r = r * Sinv(m) * b.handle_product(0);
    for (int c = 0; c < a; ++c) r = r * tbar(c);
    return r;
  };
  auto conj = [&](int a) {  // Sbar_{a-1}^-1 S_{a-1}
    Element r = e;
    for (int c = a - 1; c >= 0; --c) r = r * tbar_inv(c);
    return r * S(a);
  };
  auto conj_inv = [&](int a) {
    Element r = Sinv(a);
    for (int c = 0; c < a; ++c) r = r * tbar(c);
    return r;
  };

  const Algebra bp(q, Presentation::BPrime);
  if (!bp.has_generator(g)) throw InvalidInput("not a generator of the geometric presentation");
  const int a = g.index;
  switch (g.kind) {
    case Kind::P: return conj(a) * L(Kind::P, a);
    case Kind::Q: return L(Kind::Q, a) * conj_inv(a);
    case Kind::T: return conj(a) * L(Kind::T, a) * conj_inv(a);
    case Kind::TInv: return conj(a) * L(Kind::TInv, a) * conj_inv(a);
    case Kind::TBar: return tbar(a);
    case Kind::TBarInv: return tbar_inv(a);
    default: break;
  }
  const int gen = q.vertices[0].genus;
  const int i = gen - 1 - g.index;
  const bool sw = swaps(q, g.index);
  Kind k = g.kind;
  if (sw) {
    switch (k) {
      case Kind::X: k = Kind::Y; break;
      case Kind::XInv: k = Kind::YInv; break;
      case Kind::Y: k = Kind::X; break;
      case Kind::YInv: k = Kind::XInv; break;
      default: break;
    }
  }
  return Sinv(m) * L(k, i) * S(m);
}

// ---------------------------------------------------------------- surgery

std::vector<int> surgerable_edges(const Quiver& q) {
  std::vector<int> out;
  for (int a = 0; a < static_cast<int>(q.edges.size()); ++a) {
    if (!q.edges[a].is_loop()) continue;
    const auto inc = q.incident(q.edges[a].source);
    if (inc.back() == a) out.push_back(a);
  }
  return out;
}

namespace {

void require_surgerable(const Algebra& src, int edge) {
  if (src.presentation() != Presentation::BPrime)
    throw InvalidInput("surgery maps act on the geometric presentation");
  const Quiver& q = src.quiver();
  if (edge < 0 || edge >= static_cast<int>(q.edges.size())) throw InvalidInput("no such edge");
  if (!q.edges[edge].is_loop())
    throw InvalidInput("edge " + q.edges[edge].name + " joins two vertices; merging surgery is not supported");
  if (q.incident(q.edges[edge].source).back() != edge)
    throw InvalidInput("edge " + q.edges[edge].name + " must be the last edge at its vertex");
}

Element generator_map(const Algebra& src, const Algebra& tgt, int m, SurgeryVariant var, const Letter& g,
                      bool corrupt) {
  if (!src.has_generator(g)) throw InvalidInput("not a generator of the source algebra");
  const int v = src.quiver().edges[m].source;
  const int h = src.quiver().vertices[v].genus;
  if (g.kind == Kind::X || g.kind == Kind::XInv || g.kind == Kind::Y || g.kind == Kind::YInv)
    return Element::letter(tgt, g);
  if (g.index != m) {
    Letter r = g;
    if (r.index > m) --r.index;
    return Element::letter(tgt, r);
  }
  const Letter x{Kind::X, h, v}, y{Kind::Y, h, v};
  auto W = [&](std::vector<Letter> w) { return Element::word(tgt, v, std::move(w)); };
  // x -> x^-1 (e - y) and the conjugates x^-1 y^{+-1} x.
  const Element chord_back = corrupt ? W({inverse(x)}) : W({inverse(x)}) - W({inverse(x), y});
  const bool along_p = var == SurgeryVariant::p;
  switch (g.kind) {
    case Kind::P: return along_p ? W({x}) : chord_back;
    case Kind::Q: return along_p ? chord_back : W({x});
    case Kind::T: return along_p ? W({y}) : W({inverse(x), y, x});
    case Kind::TInv: return along_p ? W({inverse(y)}) : W({inverse(x), inverse(y), x});
    case Kind::TBar: return along_p ? W({inverse(x), y, x}) : W({y});
    case Kind::TBarInv: return along_p ? W({inverse(x), inverse(y), x}) : W({inverse(y)});
    default: break;
  }
  throw std::logic_error("unhandled generator kind");
}

Element image(const Algebra& src, const Algebra& tgt, int m, SurgeryVariant var, const Element& el, bool corrupt) {
  Element out;
  for (const auto& [w, c] : el.terms()) {
    Element acc = Element::idempotent(w.start);
    for (const auto& l : w.letters) acc = acc * generator_map(src, tgt, m, var, l, corrupt);
    out += c * acc;
  }
  return out;
}

}  // namespace

Algebra surgery_target(const Algebra& src, int edge, SurgeryVariant v) {
  require_surgerable(src, edge);
  Quiver q = src.quiver();
  Vertex& vert = q.vertices[q.edges[edge].source];
  vert.genus += 1;
  vert.reversed.push_back(v == SurgeryVariant::q);
  q.edges.erase(q.edges.begin() + edge);
  q.in_tree.erase(q.in_tree.begin() + edge);
  return Algebra(std::move(q), Presentation::BPrime);
}

Element surgery_generator_map(const Algebra& src, int edge, SurgeryVariant v, const Letter& g) {
  const Algebra tgt = surgery_target(src, edge, v);
  return generator_map(src, tgt, edge, v, g, false);
}

Element surgery_image(const Algebra& src, int edge, SurgeryVariant v, const Element& e) {
  const Algebra tgt = surgery_target(src, edge, v);
  return image(src, tgt, edge, v, e, false);
}

SurgeryCheck check_surgery_relations(const Algebra& src, int edge, SurgeryVariant v, const SurgeryCheckOptions& opt) {
  const Algebra tgt = surgery_target(src, edge, v);
  SurgeryCheck res;
  std::vector<Element> images;
  for (const auto& r : src.relations()) images.push_back(image(src, tgt, edge, v, r, opt.corrupt));

  res.symbolic = true;
  for (std::size_t i = 0; i < images.size(); ++i) {
    auto red = reduce(images[i], tgt);
    if (!red.value.is_zero()) {
      res.symbolic = false;
      res.failures.push_back("relation " + std::to_string(i) + " reduces to " + to_text(red.value, tgt));
    }
  }

  const Letter chord{v == SurgeryVariant::p ? Kind::P : Kind::Q, edge, 0};
  const Element chord_image = generator_map(src, tgt, edge, v, chord, opt.corrupt);
  std::mt19937_64 rng(opt.seed);
  res.numeric = res.chord_invertible = res.pullback_valid = true;
  for (int k = 0; k < opt.representations; ++k) {
    const Representation rho = random_representation(tgt, rng, opt.sample);
    for (std::size_t i = 0; i < images.size(); ++i)
      if (!evaluates_to_zero(images[i], tgt, rho)) {
        if (res.numeric)
          res.failures.push_back("relation " + std::to_string(i) + " is nonzero in sample " + std::to_string(k));
        res.numeric = false;
      }
    const int cv = src.source(chord);
    if (evaluate(chord_image, tgt, rho, cv, cv).det() == 0) {
      if (res.chord_invertible) res.failures.push_back("chord image singular in sample " + std::to_string(k));
      res.chord_invertible = false;
    }
    Representation pulled;
    pulled.dims = rho.dims;
    for (const auto& g : src.generators())
      pulled.mats[g] =
          evaluate(generator_map(src, tgt, edge, v, g, opt.corrupt), tgt, rho, src.source(g), src.target(g));
    bool valid = false;
    try {
      valid = check_representation(src, pulled);
    } catch (const InvalidInput&) {
    }
    if (!valid) {
      if (res.pullback_valid) res.failures.push_back("pulled-back sample " + std::to_string(k) + " is not valid");
      res.pullback_valid = false;
    }
  }
  return res;
}

}  // namespace whitneypot::ppa
