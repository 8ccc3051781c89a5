#include "whitneypot/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "whitneypot/errors.hpp"

namespace whitneypot {

bool GradedLexLess::operator()(const Exponents& a, const Exponents& b) const {
  std::int64_t da = 0, db = 0;
  for (auto e : a) da += e;
  for (auto e : b) db += e;
  if (da != db) return da < db;
  return a < b;
}

Laurent Laurent::constant(std::size_t nvars, const mpz_class& c) {
  Laurent r(nvars);
  r.add_term(Exponents(nvars, 0), c);
  return r;
}

Laurent Laurent::monomial(Exponents e, const mpz_class& c) {
  Laurent r(e.size());
  r.add_term(e, c);
  return r;
}

Laurent Laurent::variable(std::size_t nvars, std::size_t i, std::int64_t power) {
  Exponents e(nvars, 0);
  e.at(i) = power;
  return monomial(std::move(e));
}

void Laurent::check_arity(const Exponents& e) const {
  if (e.size() != nvars_) throw InvalidInput("exponent vector has wrong length");
}

void Laurent::add_term(const Exponents& e, const mpz_class& c) {
  check_arity(e);
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

mpz_class Laurent::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

std::int64_t Laurent::min_degree(std::size_t var) const {
  if (terms_.empty()) throw InvalidInput("degree of zero polynomial");
  std::int64_t m = terms_.begin()->first.at(var);
  for (const auto& [e, c] : terms_) m = std::min(m, e[var]);
  return m;
}

std::int64_t Laurent::max_degree(std::size_t var) const {
  if (terms_.empty()) throw InvalidInput("degree of zero polynomial");
  std::int64_t m = terms_.begin()->first.at(var);
  for (const auto& [e, c] : terms_) m = std::max(m, e[var]);
  return m;
}

Laurent& Laurent::operator+=(const Laurent& o) {
  if (o.nvars_ != nvars_) throw InvalidInput("adding polynomials in different rings");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
  if (o.nvars_ != nvars_) throw InvalidInput("subtracting polynomials in different rings");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Laurent& Laurent::operator*=(const mpz_class& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Laurent Laurent::shifted(const Exponents& s) const {
  check_arity(s);
  Laurent r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += s[i];
    r.terms_.emplace_hint(r.terms_.end(), std::move(f), c);
  }
  return r;
}

Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
Laurent operator*(Laurent a, const mpz_class& s) { return a *= s; }

Laurent operator*(const Laurent& a, const Laurent& b) {
  if (a.nvars() != b.nvars()) throw InvalidInput("multiplying polynomials in different rings");
  Laurent r(a.nvars());
  Exponents e(a.nvars());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Laurent pow(const Laurent& a, unsigned n) {
  Laurent r = Laurent::constant(a.nvars(), 1);
  Laurent base = a;
  while (n) {
    if (n & 1u) r = r * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return r;
}

// ---- dense univariate blocks ----

bool DenseUnivariate::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const mpz_class& x) { return x == 0; });
}

void DenseUnivariate::trim() {
  std::size_t first = 0;
  while (first < c.size() && c[first] == 0) ++first;
  if (first == c.size()) {
    c.clear();
    lo = 0;
    return;
  }
  std::size_t last = c.size();
  while (c[last - 1] == 0) --last;
  if (first > 0 || last < c.size()) {
    c = std::vector<mpz_class>(c.begin() + static_cast<std::ptrdiff_t>(first),
                               c.begin() + static_cast<std::ptrdiff_t>(last));
    lo += static_cast<std::int64_t>(first);
  }
}

void DenseUnivariate::add(const DenseUnivariate& o) {
  if (o.c.empty()) return;
  if (c.empty()) {
    *this = o;
    return;
  }
  std::int64_t nlo = std::min(lo, o.lo);
  std::int64_t nhi = std::max(lo + static_cast<std::int64_t>(c.size()),
                              o.lo + static_cast<std::int64_t>(o.c.size()));
  if (nlo < lo || nhi > lo + static_cast<std::int64_t>(c.size())) {
    std::vector<mpz_class> n(static_cast<std::size_t>(nhi - nlo));
    for (std::size_t i = 0; i < c.size(); ++i) n[static_cast<std::size_t>(lo - nlo) + i].swap(c[i]);
    c.swap(n);
    lo = nlo;
  }
  for (std::size_t i = 0; i < o.c.size(); ++i) c[static_cast<std::size_t>(o.lo - lo) + i] += o.c[i];
}

void DenseUnivariate::mul_one_plus(std::int64_t k) {
  if (c.empty()) return;
  for (std::int64_t pass = 0; pass < k; ++pass) {
    c.emplace_back(0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] += c[i - 1];
  }
}

bool DenseUnivariate::div_one_plus() {
  if (c.empty()) return true;
  // (1+v) Q = C  =>  Q_{i-1} = C_i - Q_i, top down.
  const std::size_t n = c.size();
  if (n == 1) return false;
  std::vector<mpz_class> q(n - 1);
  q[n - 2] = c[n - 1];
  for (std::size_t i = n - 2; i > 0; --i) q[i - 1] = c[i] - q[i];
  if (q[0] != c[0]) return false;
  c.swap(q);
  return true;
}

std::map<Exponents, DenseUnivariate> split_by_variable(const Laurent& p, std::size_t var) {
  std::map<Exponents, std::map<std::int64_t, mpz_class>> sparse;
  for (const auto& [e, c] : p.terms()) {
    Exponents key = e;
    key.at(var) = 0;
    sparse[key][e[var]] = c;
  }
  std::map<Exponents, DenseUnivariate> out;
  for (auto& [key, col] : sparse) {
    DenseUnivariate d;
    d.lo = col.begin()->first;
    d.c.resize(static_cast<std::size_t>(col.rbegin()->first - d.lo + 1));
    for (auto& [k, v] : col) d.c[static_cast<std::size_t>(k - d.lo)].swap(v);
    out.emplace(key, std::move(d));
  }
  return out;
}

Laurent join_by_variable(const std::map<Exponents, DenseUnivariate>& cols, std::size_t var,
                         std::size_t nvars) {
  Laurent r(nvars);
  for (const auto& [key, d] : cols) {
    Exponents e = key;
    for (std::size_t i = 0; i < d.c.size(); ++i) {
      if (d.c[i] == 0) continue;
      e[var] = d.lo + static_cast<std::int64_t>(i);
      r.add_term(e, d.c[i]);
    }
  }
  return r;
}

Laurent multiply_by_unit_power(const Laurent& p, std::size_t var, std::int64_t k) {
  if (k < 0) return divide_by_unit_power(p, var, -k);
  auto cols = split_by_variable(p, var);
  for (auto& [key, d] : cols) d.mul_one_plus(k);
  return join_by_variable(cols, var, p.nvars());
}

Laurent divide_by_unit_power(const Laurent& p, std::size_t var, std::int64_t k) {
  if (k < 0) return multiply_by_unit_power(p, var, -k);
  auto cols = split_by_variable(p, var);
  for (auto& [key, d] : cols)
    for (std::int64_t i = 0; i < k; ++i)
      if (!d.div_one_plus()) throw NotDivisible("polynomial is not divisible by the requested power of (1+v)");
  return join_by_variable(cols, var, p.nvars());
}

std::int64_t unit_multiplicity(const Laurent& p, std::size_t var, std::int64_t limit) {
  if (p.is_zero()) return limit;
  auto cols = split_by_variable(p, var);
  std::int64_t best = limit;
  for (auto& [key, d] : cols) {
    std::int64_t m = 0;
    while (m < best && d.div_one_plus()) ++m;
    best = m;
    if (best == 0) break;
  }
  return best;
}

Localized reduce(const Localized& f) {
  if (f.den_pow <= 0) {
    Localized r = f;
    if (r.den_pow < 0) {
      r.numerator = multiply_by_unit_power(r.numerator, r.unit_var, -r.den_pow);
      r.den_pow = 0;
    }
    return r;
  }
  std::int64_t m = unit_multiplicity(f.numerator, f.unit_var, f.den_pow);
  Localized r;
  r.unit_var = f.unit_var;
  r.numerator = m ? divide_by_unit_power(f.numerator, f.unit_var, m) : f.numerator;
  r.den_pow = f.numerator.is_zero() ? 0 : f.den_pow - m;
  return r;
}

Laurent clear_denominator(const Localized& f) {
  Localized r = reduce(f);
  if (r.den_pow > 0) throw NotLaurent("a (1+v) denominator survives reduction");
  return r.numerator;
}

Localized substitute_units(const Laurent& p, const std::vector<UnitImage>& images,
                           std::size_t unit_var) {
  if (images.size() != p.nvars()) throw InvalidInput("one image per variable is required");
  const std::size_t out_vars = images.empty() ? 0 : images.front().monomial.size();
  for (const auto& im : images) {
    if (im.monomial.size() != out_vars) throw InvalidInput("images live in different rings");
    if (im.sign != 1 && im.sign != -1) throw InvalidInput("image sign must be +1 or -1");
  }
  if (unit_var >= out_vars) throw InvalidInput("unit variable out of range");

  // key (monomial without unit_var) -> unit power -> block in unit_var
  std::map<Exponents, std::map<std::int64_t, DenseUnivariate>> groups;
  Exponents mono(out_vars);
  for (const auto& [e, c] : p.terms()) {
    std::fill(mono.begin(), mono.end(), 0);
    std::int64_t k = 0;
    int sign = 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto& im = images[i];
      for (std::size_t j = 0; j < out_vars; ++j) mono[j] += e[i] * im.monomial[j];
      k += e[i] * im.unit_pow;
      if (im.sign < 0 && (e[i] % 2 != 0)) sign = -sign;
    }
    Exponents key = mono;
    key[unit_var] = 0;
    DenseUnivariate d;
    d.lo = mono[unit_var];
    d.c.emplace_back(sign > 0 ? c : mpz_class(-c));
    groups[key][k].add(d);
  }

  // Per group: Horner in (1+v) so the block is acc * (1+v)^kmin.
  struct Reduced {
    DenseUnivariate block;
    std::int64_t power;
  };
  std::map<Exponents, Reduced> reduced;
  std::int64_t den = 0;
  for (auto& [key, by_k] : groups) {
    DenseUnivariate acc;
    std::int64_t cur = by_k.rbegin()->first;
    for (auto it = by_k.rbegin(); it != by_k.rend(); ++it) {
      acc.mul_one_plus(cur - it->first);
      cur = it->first;
      acc.add(it->second);
    }
    acc.trim();
    if (acc.c.empty()) continue;
    std::int64_t power = cur;
    while (power < 0 && acc.div_one_plus()) ++power;
    den = std::max(den, -power);
    reduced.emplace(key, Reduced{std::move(acc), power});
  }
  std::map<Exponents, DenseUnivariate> cols;
  for (auto& [key, r] : reduced) {
    r.block.mul_one_plus(r.power + den);
    cols.emplace(key, std::move(r.block));
  }
  Localized out;
  out.unit_var = unit_var;
  out.numerator = join_by_variable(cols, unit_var, out_vars);
  out.den_pow = out.numerator.is_zero() ? 0 : den;
  return out;
}

Laurent monomial_transform(const Laurent& p, const std::vector<std::vector<std::int64_t>>& m) {
  const std::size_t n = p.nvars();
  if (m.size() != n) throw InvalidInput("transform matrix has wrong size");
  for (const auto& row : m)
    if (row.size() != n) throw InvalidInput("transform matrix has wrong size");
  Laurent r(n);
  Exponents f(n);
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < n; ++j) s += m[i][j] * e[j];
      f[i] = s;
    }
    r.add_term(f, c);
  }
  return r;
}

Laurent apply_unimodular(const Laurent& p, const Matrix2& m) {
  if (p.nvars() != 2) throw InvalidInput("basis changes act on two-variable polynomials");
  if (m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1) throw InvalidInput("basis change must have determinant 1");
  return monomial_transform(p, {{m[0][0], m[0][1]}, {m[1][0], m[1][1]}});
}

Laurent coeff_in(const Laurent& p, std::size_t var, std::int64_t k) {
  if (var >= p.nvars()) throw InvalidInput("variable out of range");
  Laurent r(p.nvars() - 1);
  Exponents f(p.nvars() - 1);
  for (const auto& [e, c] : p.terms()) {
    if (e[var] != k) continue;
    for (std::size_t i = 0, j = 0; i < e.size(); ++i)
      if (i != var) f[j++] = e[i];
    r.add_term(f, c);
  }
  return r;
}

namespace {

mpq_class power(const mpq_class& x, std::int64_t n) {
  mpq_class base = x;
  if (n < 0) {
    base = 1 / base;
    n = -n;
  }
  mpq_class r = 1;
  while (n) {
    if (n & 1) r *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return r;
}

}  // namespace

mpq_class evaluate(const Laurent& p, const std::vector<mpq_class>& point) {
  if (point.size() != p.nvars()) throw InvalidInput("point has wrong dimension");
  for (const auto& v : point)
    if (v == 0) throw InvalidInput("Laurent polynomials cannot be evaluated at zero coordinates");
  mpq_class sum = 0;
  for (const auto& [e, c] : p.terms()) {
    mpq_class t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) t *= power(point[i], e[i]);
    sum += t;
  }
  return sum;
}

Laurent flip_sign(const Laurent& p, std::size_t var) {
  Laurent r(p.nvars());
  for (const auto& [e, c] : p.terms()) r.add_term(e, e.at(var) % 2 ? mpz_class(-c) : c);
  return r;
}

// ---- Newton polygon ----

namespace {

__int128 cross(const Point2& o, const Point2& a, const Point2& b) {
  return static_cast<__int128>(a[0] - o[0]) * (b[1] - o[1]) -
         static_cast<__int128>(a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

NewtonPolygon newton_polytope(const Laurent& p) {
  if (p.nvars() != 2) throw InvalidInput("Newton polygons need exactly two variables");
  std::vector<Point2> pts;
  pts.reserve(p.size());
  for (const auto& [e, c] : p.terms()) pts.push_back({e[0], e[1]});
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  NewtonPolygon out;
  if (pts.size() <= 2) {
    out.vertices = pts;
  } else {
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& pt : pts) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], pt) <= 0) --k;
      hull[k++] = pt;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
      while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
      hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    out.vertices = hull;
  }

  const std::size_t n = out.vertices.size();
  const std::size_t sides = n < 2 ? 0 : (n == 2 ? 1 : n);
  for (std::size_t i = 0; i < sides; ++i) {
    const auto& a = out.vertices[i];
    const auto& b = out.vertices[(i + 1) % n];
    out.side_lengths.push_back(std::gcd(b[0] - a[0], b[1] - a[1]));
    __int128 d = static_cast<__int128>(a[0]) * b[1] - static_cast<__int128>(a[1]) * b[0];
    out.cone_indices.push_back(static_cast<std::int64_t>(d < 0 ? -d : d));
  }
  return out;
}

// ---- text and JSON ----

std::vector<std::string> default_names(std::size_t nvars) {
  static const char* base[] = {"x", "y", "z"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nvars; ++i)
    names.push_back(i < 3 ? base[i] : "x" + std::to_string(i));
  return names;
}

std::string to_text(const Laurent& p, const std::vector<std::string>& given) {
  auto names = given.empty() ? default_names(p.nvars()) : given;
  if (names.size() != p.nvars()) throw InvalidInput("one name per variable is required");
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (std::size_t i = 0; i < e.size(); ++i) os << '*' << names[i] << '^' << e[i];
  }
  return os.str();
}

namespace {

class LaurentParser {
 public:
  LaurentParser(std::string_view s, const std::vector<std::string>& names) : s_(s), names_(names) {}

  Laurent parse() {
    Laurent out(names_.size());
    skip();
    if (pos_ == s_.size()) throw InvalidInput("empty polynomial text");
    bool first = true;
    while (true) {
      skip();
      if (pos_ == s_.size()) break;
      int sign = 1;
      if (!first) {
        if (s_[pos_] == '+') {
          ++pos_;
        } else if (s_[pos_] != '-') {
          fail("expected '+' or '-' between terms");
        }
      }
      skip();
      while (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
        if (s_[pos_] == '-') sign = -sign;
        ++pos_;
        skip();
      }
      term(out, sign);
      first = false;
    }
    return out;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("cannot parse polynomial at offset " + std::to_string(pos_) + ": " + what);
  }
  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }

  void term(Laurent& out, int sign) {
    mpz_class coeff = sign;
    Exponents e(names_.size(), 0);
    bool any = false;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      char ch = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        coeff *= mpz_class(digits());
      } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string name(s_.substr(start, pos_ - start));
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) fail("unknown variable '" + name + "'");
        std::int64_t power = 1;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          skip();
          int psign = 1;
          if (pos_ < s_.size() && s_[pos_] == '-') {
            psign = -1;
            ++pos_;
          }
          power = psign * std::stoll(digits());
        }
        e[static_cast<std::size_t>(it - names_.begin())] += power;
      } else {
        fail(std::string("unexpected character '") + ch + "'");
      }
      any = true;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      if (pos_ >= s_.size() || s_[pos_] == '+' || s_[pos_] == '-') break;
    }
    if (!any) fail("empty term");
    out.add_term(e, coeff);
  }

  std::string_view s_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Laurent parse_laurent(std::string_view text, const std::vector<std::string>& names) {
  return LaurentParser(text, names).parse();
}

nlohmann::json to_json(const Laurent& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) arr.push_back({{"exp", e}, {"coeff", c.get_str()}});
  return arr;
}

Laurent laurent_from_json(const nlohmann::json& j, std::size_t nvars) {
  if (!j.is_array()) throw InvalidInput("polynomial JSON must be an array of terms");
  Laurent r(nvars);
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("exp") || !t.contains("coeff"))
      throw InvalidInput("polynomial term needs 'exp' and 'coeff'");
    Exponents e = t.at("exp").get<Exponents>();
    if (e.size() != nvars) throw InvalidInput("exponent vector has wrong length");
    mpz_class c;
    const auto& cj = t.at("coeff");
    if (cj.is_string()) {
      if (c.set_str(cj.get<std::string>(), 10) != 0) throw InvalidInput("bad coefficient");
    } else if (cj.is_number_integer()) {
      c = mpz_class(std::to_string(cj.get<long long>()));
    } else {
      throw InvalidInput("coefficient must be a decimal string");
    }
    r.add_term(e, c);
  }
  return r;
}

}  // namespace whitneypot
