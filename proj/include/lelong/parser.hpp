// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Recursive-descent parser for the expression DSL:
//
//   expr    := sum
//   sum     := prod { "+" prod }
//   prod    := [ posreal "*" ] atom
//   atom    := "log" "(" powsum ")" | "max" "(" expr { "," expr } ")" | "(" expr ")"
//   powsum  := powterm { "+" powterm }
//   powterm := "|" poly "|" "^" posreal
//   poly    := polynomial in z1..zn, complex literals "(a+bi)", integer
//              powers, "*", "+", "-"
//
// Decimal literals parse to exact rationals, so scales and exponents keep
// exact values through classification and printing.
#pragma once

#include <stdexcept>
#include <string>

#include "lelong/expr.hpp"

namespace lelong {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                           std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

// dim = 0 infers the arity from the largest variable index used; a positive
// dim fixes it (and must cover every variable mentioned).
ExprPtr parse(const std::string& text, int dim = 0);

// exact rational from a decimal literal like "0.25"
Rat parse_decimal(const std::string& text);

}  // namespace lelong
