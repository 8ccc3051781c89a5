#pragma once

// Independent reading of the published sphere potentials.  The rows are the
// LaTeX source of the table, copied verbatim; a tiny recursive-descent
// parser expands them into dense (p, q, t) coefficients without touching the
// library.

#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace reference {

using Key = std::array<int, 3>;  // exponents of p, q, t
using Poly = std::map<Key, long long>;

struct Row {
  std::array<int, 3> lower;
  std::array<int, 3> upper;
  std::string label;
  const char* latex;
};

inline const std::vector<Row>& rows() {
  static const std::vector<Row> r{
      {{1, 1, 1}, {1, 1, 2}, "L[(1,1,1)(1,1,2)]", R"(p+{q^2}t^{-1})"},
      {{1, 1, 2}, {1, 2, 5}, "L[(1,1,2)(1,2,5)]", R"({p}t^{-1}+2 q^2+q^5 t)"},
      {{1, 2, 5}, {2, 5, 29}, "L[(1,2,5)(2,5,29)]",
       R"(p + 2 q^2 + 5 q^5 + {4 q^8}t^{-1} + {10 q^{11}}t^{-1} + 2 q^{14}t^{-2} + {10 q^{17}}t^{-2}
          + 5 q^{23}t^{-3} + q^{29}{t^{-4}})"},
      {{1, 2, 5}, {1, 5, 13}, "L[(1,2,5)(1,5,13)]",
       R"({p (5+4 t)}t^{-2} + {2 p^4 (5+t)}t^{-3} + {10 p^7}t^{-4} + {5 p^{10}}t^{-5} + {p^{13}}t^{-6}
          + {q^2}t^{-1})"},
      {{1, 5, 13}, {1, 13, 34}, "L[(1,5,13)(1,13,34)]",
       R"({p \left(78+225 t+210 t^2+68 t^3+4 t^4\right)}t^{-4}
          + {2 p^4 \left(143+300 t+175 t^2+26 t^3\right)}t^{-3}
          + {p^7 \left(715+1050 t+350 t^2+18 t^3\right)}t^{-2}
          + {p^{10} \left(1287+1260 t+210 t^2+2 t^3\right)}t^{-1}
          + 2 p^{13} \left(858+525 t+35 t^2\right)
          + 2 p^{16} t \left(858+300t+5 t^2\right)
          + 9 p^{19} t^2 (143+25 t)
          + 5 p^{22} t^3 (143+10 t)
          + p^{25} t^4 (286+5 t)
          + 78 p^{28} t^5
          + 13 p^{31} t^6
          + p^{34} t^7
          + {q^2 \left(13+24 t+9 t^2\right)}t^{-5}
          + {q^5}t^{-6})"},
  };
  return r;
}

class Parser {
 public:
  explicit Parser(std::string src) {
    for (const char* junk : {"\\left", "\\right"})
      for (std::size_t at; (at = src.find(junk)) != std::string::npos;) src.erase(at, std::string(junk).size());
    for (char c : src)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  Poly parse() {
    Poly r = sum(0);
    if (i_ != s_.size()) throw std::runtime_error("trailing input at " + std::to_string(i_));
    return r;
  }

 private:
  static Poly mul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ka, ca] : a)
      for (const auto& [kb, cb] : b) r[{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}] += ca * cb;
    return clean(r);
  }
  static Poly clean(Poly r) {
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
  }
  static Poly one() { return {{{0, 0, 0}, 1}}; }

  bool at(char c) const { return i_ < s_.size() && s_[i_] == c; }
  void expect(char c) {
    if (!at(c)) throw std::runtime_error(std::string("expected ") + c + " at " + std::to_string(i_));
    ++i_;
  }

  Poly sum(char close) {
    Poly r;
    int sign = 1;
    if (at('-')) sign = -1, ++i_;
    else if (at('+')) ++i_;
    for (;;) {
      Poly t = product(close);
      for (const auto& [k, c] : t) r[k] += sign * c;
      if (at('+')) sign = 1, ++i_;
      else if (at('-')) sign = -1, ++i_;
      else break;
    }
    return clean(r);
  }

  Poly product(char close) {
    Poly r = one();
    bool any = false;
    while (i_ < s_.size() && !at('+') && !at('-') && !at(close)) {
      r = mul(r, factor());
      any = true;
    }
    if (!any) throw std::runtime_error("empty product at " + std::to_string(i_));
    return r;
  }

  int exponent() {
    if (!at('^')) return 1;
    ++i_;
    bool braced = at('{');
    if (braced) ++i_;
    int sign = 1;
    if (at('-')) sign = -1, ++i_;
    // Unbraced TeX exponents are a single character.
    int v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      v = 10 * v + (s_[i_++] - '0');
      if (!braced) break;
    }
    if (braced) expect('}');
    return sign * v;
  }

  Poly factor() {
    if (at('(') || at('{')) {
      const char close = at('(') ? ')' : '}';
      ++i_;
      Poly inner = sum(close);
      expect(close);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      long long v = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) v = 10 * v + (s_[i_++] - '0');
      return {{{0, 0, 0}, v}};
    }
    const char var = s_[i_++];
    const int slot = var == 'p' ? 0 : var == 'q' ? 1 : var == 't' ? 2 : -1;
    if (slot < 0) throw std::runtime_error(std::string("unexpected ") + var);
    Key k{0, 0, 0};
    k[slot] = exponent();
    return {{k, 1}};
  }

  std::string s_;
  std::size_t i_ = 0;
};

inline Poly parse(const std::string& latex) { return Parser(latex).parse(); }

}  // namespace reference
