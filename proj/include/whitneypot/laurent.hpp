#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace whitneypot {

using Exponents = std::vector<std::int64_t>;

// Total degree first, then lexicographic.
struct GradedLexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

// Sparse Laurent polynomial over Z in a fixed number of variables.
class Laurent {
 public:
  using TermMap = std::map<Exponents, mpz_class, GradedLexLess>;

  Laurent() = default;
  explicit Laurent(std::size_t nvars) : nvars_(nvars) {}

  static Laurent constant(std::size_t nvars, const mpz_class& c);
  static Laurent monomial(Exponents e, const mpz_class& c = 1);
  static Laurent variable(std::size_t nvars, std::size_t i, std::int64_t power = 1);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponents& e, const mpz_class& c);
  mpz_class coeff(const Exponents& e) const;

  std::int64_t min_degree(std::size_t var) const;
  std::int64_t max_degree(std::size_t var) const;

  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  Laurent& operator*=(const mpz_class& s);
  Laurent operator-() const;

  // Multiply by the monomial with exponent e.
  Laurent shifted(const Exponents& e) const;

  bool operator==(const Laurent& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }
  bool operator!=(const Laurent& o) const { return !(*this == o); }

 private:
  void check_arity(const Exponents& e) const;

  std::size_t nvars_ = 0;
  TermMap terms_;
};

Laurent operator+(Laurent a, const Laurent& b);
Laurent operator-(Laurent a, const Laurent& b);
Laurent operator*(const Laurent& a, const Laurent& b);
Laurent operator*(Laurent a, const mpz_class& s);
Laurent pow(const Laurent& a, unsigned n);

// Dense block of coefficients for v^lo, v^(lo+1), ...
struct DenseUnivariate {
  std::int64_t lo = 0;
  std::vector<mpz_class> c;

  bool is_zero() const;
  void trim();
  void add(const DenseUnivariate& o);
  // Multiply by (1+v)^k, k >= 0.
  void mul_one_plus(std::int64_t k);
  // Divide by (1+v) in place; returns false and leaves *this untouched if
  // the division is not exact.
  bool div_one_plus();
};

// Groups the terms of p by all exponents except `var`.  The key keeps its
// length with a zero in position `var`.
std::map<Exponents, DenseUnivariate> split_by_variable(const Laurent& p, std::size_t var);
Laurent join_by_variable(const std::map<Exponents, DenseUnivariate>& cols, std::size_t var,
                         std::size_t nvars);

Laurent multiply_by_unit_power(const Laurent& p, std::size_t var, std::int64_t k);
// Exact division by (1+v)^k; throws NotDivisible.
Laurent divide_by_unit_power(const Laurent& p, std::size_t var, std::int64_t k);
// Largest k <= limit such that (1+v)^k divides p.
std::int64_t unit_multiplicity(const Laurent& p, std::size_t var, std::int64_t limit);

// numerator / (1+v)^den_pow with v = variable unit_var.
struct Localized {
  Laurent numerator;
  std::size_t unit_var = 0;
  std::int64_t den_pow = 0;
};

Localized reduce(const Localized& f);
// Throws NotLaurent when a denominator survives reduction.
Laurent clear_denominator(const Localized& f);

// Image of one variable: sign * monomial * (1+v)^unit_pow.
struct UnitImage {
  int sign = 1;
  Exponents monomial;
  std::int64_t unit_pow = 0;
};

Localized substitute_units(const Laurent& p, const std::vector<UnitImage>& images,
                           std::size_t unit_var);

// Monomial change of variables e -> M e (M square, size nvars).
Laurent monomial_transform(const Laurent& p, const std::vector<std::vector<std::int64_t>>& m);
using Matrix2 = std::array<std::array<std::int64_t, 2>, 2>;

// Two-variable basis change e -> M e; rejects det(M) != 1.
Laurent apply_unimodular(const Laurent& p, const Matrix2& m);

// Coefficient of v^k as a polynomial in the remaining variables.
Laurent coeff_in(const Laurent& p, std::size_t var, std::int64_t k);

// Exact value at a point with nonzero rational coordinates.
mpq_class evaluate(const Laurent& p, const std::vector<mpq_class>& point);

// Substitute var -> -var.
Laurent flip_sign(const Laurent& p, std::size_t var);

using Point2 = std::array<std::int64_t, 2>;

struct NewtonPolygon {
  std::vector<Point2> vertices;             // counter-clockwise
  std::vector<std::int64_t> side_lengths;   // lattice length of side i -> i+1
  std::vector<std::int64_t> cone_indices;   // |det(v_i, v_{i+1})|
};

NewtonPolygon newton_polytope(const Laurent& p);

std::vector<std::string> default_names(std::size_t nvars);
std::string to_text(const Laurent& p, const std::vector<std::string>& names = {});
Laurent parse_laurent(std::string_view text, const std::vector<std::string>& names);

nlohmann::json to_json(const Laurent& p);
Laurent laurent_from_json(const nlohmann::json& j, std::size_t nvars);

}  // namespace whitneypot
