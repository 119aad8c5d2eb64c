// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>

namespace lelong {

namespace {

class Scanner {
 public:
  explicit Scanner(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
  }
  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!accept(c)) fail(std::string("expected '") + c + "' (" + what + ")");
  }
  bool accept_word(const char* w) {
    skip_ws();
    std::size_t i = 0;
    while (w[i] && pos_ + i < s_.size() && s_[pos_ + i] == w[i]) ++i;
    if (w[i]) return false;
    for (std::size_t k = 0; k < i; ++k) advance();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

  bool peek_digit() {
    char c = peek();
    return c >= '0' && c <= '9';
  }

  // unsigned decimal literal as exact rational
  Rat number() {
    skip_ws();
    std::string intpart, fracpart;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      intpart.push_back(s_[pos_]);
      advance();
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      advance();
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        fracpart.push_back(s_[pos_]);
        advance();
      }
    }
    if (intpart.empty() && fracpart.empty()) fail("expected number");
    std::int64_t num = 0, den = 1;
    for (char c : intpart) {
      if (num > (INT64_MAX - 9) / 10) fail("number too large");
      num = num * 10 + (c - '0');
    }
    for (char c : fracpart) {
      if (num > (INT64_MAX - 9) / 10 || den > INT64_MAX / 10) fail("number has too many digits");
      num = num * 10 + (c - '0');
      den *= 10;
    }
    return Rat(num, den);
  }

  int integer() {
    Rat r = number();
    if (r.den() != 1) fail("expected integer");
    if (r.num() > 1000000) fail("integer too large");
    return static_cast<int>(r.num());
  }

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  void advance() {
    if (pos_ < s_.size()) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, int dim) : sc_(text), fixed_dim_(dim) {}

  ExprPtr run() {
    ExprPtr e = parse_expr();
    if (!sc_.eof()) sc_.fail("trailing input");
    const int n = fixed_dim_ > 0 ? fixed_dim_ : std::max(max_var_ + 1, 1);
    if (fixed_dim_ > 0 && max_var_ + 1 > fixed_dim_)
      sc_.fail("variable index exceeds declared dimension");
    return widen(e, n);
  }

 private:
  // Polynomials are first parsed in a generous ambient arity, then the whole
  // tree is widened to the final arity once it is known.
  static constexpr int kMaxVars = 16;

  ExprPtr parse_expr() {
    std::vector<ExprPtr> prods;
    prods.push_back(parse_prod());
    while (sc_.accept('+')) prods.push_back(parse_prod());
    if (prods.size() == 1) return prods[0];
    return PshExpr::sum(std::move(prods));
  }

  ExprPtr parse_prod() {
    if (sc_.peek_digit()) {
      Rat c = sc_.number();
      if (!(Rat(0) < c)) sc_.fail("scale factor must be positive");
      sc_.expect('*', "scale");
      return PshExpr::scale(c, parse_atom());
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    if (sc_.accept_word("log")) {
      sc_.expect('(', "log");
      std::vector<PowTerm> terms;
      terms.push_back(parse_powterm());
      while (sc_.accept('+')) terms.push_back(parse_powterm());
      sc_.expect(')', "log");
      return PshExpr::log_sum_pow(std::move(terms));
    }
    if (sc_.accept_word("max")) {
      sc_.expect('(', "max");
      std::vector<ExprPtr> args;
      args.push_back(parse_expr());
      while (sc_.accept(',')) args.push_back(parse_expr());
      sc_.expect(')', "max");
      return PshExpr::max(std::move(args));
    }
    if (sc_.accept('(')) {
      ExprPtr e = parse_expr();
      sc_.expect(')', "parenthesized expression");
      return e;
    }
    sc_.fail("expected 'log', 'max' or '('");
  }

  PowTerm parse_powterm() {
    sc_.expect('|', "power term");
    Poly p = parse_poly();
    sc_.expect('|', "power term");
    sc_.expect('^', "power term");
    Rat a = sc_.number();
    if (!(Rat(0) < a)) sc_.fail("power exponent must be positive");
    return {std::move(p), a};
  }

  // poly := polyterm { ("+"|"-") polyterm } ; polyterm := factor { "*" factor }
  // factor := variable [ "^" int ] | complexliteral | decimal
  Poly parse_poly() {
    Poly acc = parse_polyterm();
    for (;;) {
      if (sc_.accept('+'))
        acc = acc + parse_polyterm();
      else if (sc_.accept('-'))
        acc = acc - parse_polyterm();
      else
        return acc;
    }
  }

  Poly parse_polyterm() {
    Poly acc = parse_polyfactor();
    while (sc_.accept('*')) acc = acc * parse_polyfactor();
    return acc;
  }

  Poly parse_polyfactor() {
    char c = sc_.peek();
    if (c == 'z') {
      sc_.accept('z');
      int idx = sc_.integer();
      if (idx < 1 || idx > kMaxVars) sc_.fail("variable index out of range");
      max_var_ = std::max(max_var_, idx - 1);
      Poly v = Poly::variable(kMaxVars, idx - 1);
      if (sc_.accept('^')) {
        int e = sc_.integer();
        if (e < 1) sc_.fail("polynomial power must be a positive integer");
        v = v.pow(e);
      }
      return v;
    }
    if (c == '(') {
      // complex literal (a+bi) / (a-bi); also allows (a) as a real literal
      sc_.accept('(');
      bool neg = sc_.accept('-');
      Rat re = sc_.number();
      double real = (neg ? -1.0 : 1.0) * re.to_double();
      double imag = 0.0;
      if (sc_.peek() == '+' || sc_.peek() == '-') {
        bool ineg = sc_.peek() == '-';
        sc_.accept(ineg ? '-' : '+');
        Rat im = sc_.number();
        if (!sc_.accept('i')) sc_.fail("expected 'i' in complex literal");
        imag = (ineg ? -1.0 : 1.0) * im.to_double();
      } else if (sc_.accept('i')) {
        imag = real;
        real = 0.0;
      }
      sc_.expect(')', "complex literal");
      return Poly::constant(kMaxVars, cdouble(real, imag));
    }
    if (c >= '0' && c <= '9') {
      Rat r = sc_.number();
      return Poly::constant(kMaxVars, cdouble(r.to_double(), 0.0));
    }
    sc_.fail("expected variable, number or complex literal");
  }

  ExprPtr widen(const ExprPtr& e, int n) {
    switch (e->kind()) {
      case PshExpr::Kind::LogSumPow: {
        std::vector<PowTerm> terms;
        for (const auto& t : e->terms()) terms.push_back({shrink_widen(t.poly, n), t.alpha});
        return PshExpr::log_sum_pow(std::move(terms));
      }
      case PshExpr::Kind::Scale:
        return PshExpr::scale(e->scale_factor(), widen(e->children()[0], n));
      case PshExpr::Kind::Sum: {
        std::vector<ExprPtr> ch;
        for (const auto& c : e->children()) ch.push_back(widen(c, n));
        return PshExpr::sum(std::move(ch), n);
      }
      case PshExpr::Kind::Max: {
        std::vector<ExprPtr> ch;
        for (const auto& c : e->children()) ch.push_back(widen(c, n));
        return PshExpr::max(std::move(ch));
      }
      case PshExpr::Kind::Compose:
        sc_.fail("internal: compose in parse tree");
    }
    sc_.fail("internal: bad node");
  }

  Poly shrink_widen(const Poly& p, int n) {
    Poly r(n);
    for (const auto& m : p.terms()) {
      std::vector<int> e(n, 0);
      for (int v = 0; v < p.nvars(); ++v) {
        if (m.exps[v] > 0) {
          if (v >= n) sc_.fail("internal: variable beyond arity");
          e[v] = m.exps[v];
        }
      }
      r.add_term(std::move(e), m.coeff);
    }
    return r;
  }

  Scanner sc_;
  int fixed_dim_;
  int max_var_ = -1;
};

}  // namespace

ExprPtr parse(const std::string& text, int dim) { return Parser(text, dim).run(); }

Rat parse_decimal(const std::string& text) {
  Scanner sc(text);
  bool neg = sc.accept('-');
  Rat r = sc.number();
  if (!sc.eof()) throw ParseError("trailing characters in number", 1, 1);
  return neg ? -r : r;
}

}  // namespace lelong
