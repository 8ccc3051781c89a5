#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace whitneypot::ppa {

// ---------------------------------------------------------------- quivers

struct Vertex {
  std::string name;
  int genus = 0;
  // Handle i contributes [x_i^-1, y_i^-1] unless reversed, then [y_i^-1, x_i^-1].
  std::vector<bool> reversed;
};

struct Edge {
  std::string name;
  int source = 0;
  int target = 0;
  bool is_loop() const { return source == target; }
};

struct Quiver {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<bool> in_tree;  // per edge

  int vertex_index(std::string_view name) const;
  int edge_index(std::string_view name) const;
  // Edges incident to v in increasing index order (a loop appears once).
  std::vector<int> incident(int v) const;
};

// Kruskal over edges in index order: the lexicographically first spanning
// forest.
std::vector<bool> first_spanning_tree(const Quiver& q);
// Throws InvalidInput unless in_tree is a spanning forest.
void validate(const Quiver& q);

// Lines: "vertex v genus g", "edge a: v -> w", "tree: a1,a2,..." ('#' starts
// a comment).  Without a tree line the first spanning tree is used.
Quiver parse_quiver(std::string_view text);
std::string to_text(const Quiver& q);

// ---------------------------------------------------------------- words

enum class Presentation { B, BPrime };

enum class Kind { P, Q, T, TInv, TBar, TBarInv, X, XInv, Y, YInv };

struct Letter {
  Kind kind = Kind::P;
  int index = 0;   // edge for P, Q, T, TBar; handle (0-based) for X, Y
  int vertex = 0;  // used by X, Y only
  auto operator<=>(const Letter&) const = default;
};

bool is_invertible_kind(Kind k);
Letter inverse(const Letter& l);
// The non-inverse kind a letter refers to.
Letter base(const Letter& l);

struct Word {
  int start = 0;
  int end = 0;
  std::vector<Letter> letters;
  auto operator<=>(const Word&) const = default;
};

class Algebra;

// Integer combination of composable words.
class Element {
 public:
  Element() = default;

  static Element idempotent(int v);
  static Element letter(const Algebra& alg, const Letter& l);
  // Empty letters give the idempotent at `start`.
  static Element word(const Algebra& alg, int start, const std::vector<Letter>& letters);

  const std::map<Word, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const Word& w, const mpz_class& c);

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element operator-() const;
  bool operator==(const Element& o) const { return terms_ == o.terms_; }

 private:
  std::map<Word, mpz_class> terms_;
};

Element operator+(Element a, const Element& b);
Element operator-(Element a, const Element& b);
Element operator*(const mpz_class& s, const Element& a);
// Concatenation; non-composable products vanish.
Element compose(const Element& a, const Element& b);
Element operator*(const Element& a, const Element& b);

class Algebra {
 public:
  Algebra(Quiver q, Presentation p);

  const Quiver& quiver() const { return q_; }
  Presentation presentation() const { return p_; }

  bool has_generator(const Letter& l) const;
  int source(const Letter& l) const;
  int target(const Letter& l) const;
  std::vector<Letter> generators() const;  // non-inverse kinds only

  // Product of handle commutators at v, left to right, and its inverse.
  std::vector<Letter> commutator_word(int v, int handle) const;
  Element handle_product(int v) const;
  Element handle_product_inverse(int v) const;

  // Factors of the geometric vertex relation at v (t^-1 for outgoing ends,
  // tbar for incoming ends, in edge order).
  std::vector<Letter> boundary_factors(int v) const;

  // Every defining relation as an element that must vanish.
  std::vector<Element> relations() const;

  std::string letter_name(const Letter& l) const;
  std::optional<Letter> parse_letter(std::string_view name) const;

 private:
  Quiver q_;
  Presentation p_;
};

std::string to_text(const Element& e, const Algebra& alg);

struct ReduceResult {
  Element value;
  bool complete = false;  // false if the pass limit was hit
  int passes = 0;
};

// Bounded oriented rewriting with the defining relations.
ReduceResult reduce(const Element& e, const Algebra& alg, int max_passes = 256);

// ---------------------------------------------------------------- matrices

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static RatMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpq_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_zero() const;
  mpq_class det() const;
  std::optional<RatMatrix> inverse() const;

  RatMatrix& operator+=(const RatMatrix& o);
  RatMatrix& operator-=(const RatMatrix& o);
  RatMatrix& operator*=(const mpq_class& s);
  bool operator==(const RatMatrix& o) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpq_class> a_;
};

RatMatrix operator+(RatMatrix a, const RatMatrix& b);
RatMatrix operator-(RatMatrix a, const RatMatrix& b);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(const mpq_class& s, RatMatrix a);

nlohmann::json to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------- representations

// Matrices for non-inverse generators.  Missing t_a default to e - p_a q_a
// and missing tbar_a to e - q_a p_a.
struct Representation {
  std::vector<int> dims;
  std::map<Letter, RatMatrix> mats;
};

// Matrix of a single letter (inverses computed); nullopt when a required
// inverse does not exist.
std::optional<RatMatrix> letter_matrix(const Algebra& alg, const Representation& rho, const Letter& l);

// Shape d_start x d_end; throws if the element mixes endpoints.
RatMatrix evaluate(const Element& e, const Algebra& alg, const Representation& rho, int start, int end);
RatMatrix evaluate(const Element& e, const Algebra& alg, const Representation& rho);
bool evaluates_to_zero(const Element& e, const Algebra& alg, const Representation& rho);

// Throws InvalidInput on shape mismatch.
bool check_representation(const Algebra& alg, const Representation& rho);

struct SampleOptions {
  int min_dim = 1;
  int max_dim = 3;
};

// A valid representation with small integer data, built so that the vertex
// relations hold by construction (then double-checked).
Representation random_representation(const Algebra& alg, std::mt19937_64& rng, const SampleOptions& opt = {});

nlohmann::json to_json(const Representation& rho, const Algebra& alg);
Representation representation_from_json(const nlohmann::json& j, const Algebra& alg);

// ---------------------------------------------------------------- B and B'

// One-vertex quivers only.  Representations of the spanning-tree
// presentation and of the geometric one correspond through a change of
// generators that conjugates each t_a by a prefix of boundary loops and
// renames the handles.
Representation b_to_bprime(const Algebra& b, const Representation& rho);
Representation bprime_to_b(const Algebra& bprime, const Representation& rho);
// Image in B of a generator of B' (the algebra map dual to b_to_bprime).
Element dictionary_image(const Algebra& b, const Letter& g);

// ---------------------------------------------------------------- surgery

enum class SurgeryVariant { p, q };

// Geometric presentation only; `edge` must be a loop and the last edge at
// its vertex.  Removes the edge and adds a handle at its vertex.
Algebra surgery_target(const Algebra& src, int edge, SurgeryVariant v);
Element surgery_generator_map(const Algebra& src, int edge, SurgeryVariant v, const Letter& g);
Element surgery_image(const Algebra& src, int edge, SurgeryVariant v, const Element& e);

struct SurgeryCheckOptions {
  int representations = 20;
  std::uint64_t seed = 1;
  SampleOptions sample{};
  // Test hook: send q_m to x^-1 (variant p) or p_m to x^-1 (variant q).
  bool corrupt = false;
};

struct SurgeryCheck {
  bool symbolic = false;        // all relation images reduce to 0
  bool numeric = false;         // and evaluate to 0 in sampled target reps
  bool chord_invertible = false;  // image of p_m (resp. q_m) invertible
  bool pullback_valid = false;  // pulled-back reps satisfy the source relations
  std::vector<std::string> failures;
  bool ok() const { return symbolic && numeric && chord_invertible && pullback_valid; }
};

SurgeryCheck check_surgery_relations(const Algebra& src, int edge, SurgeryVariant v,
                                     const SurgeryCheckOptions& opt = {});

// Loops that may be surgered (the last edge at their vertex).
std::vector<int> surgerable_edges(const Quiver& q);

}  // namespace whitneypot::ppa
