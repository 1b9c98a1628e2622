#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dmod/weyl.hpp"

namespace dmod {

using Bindings = std::map<std::string, Rational>;

// Operator expression tree; products keep their written order.
struct Expr {
  enum class Kind { Sum, Product, Power, Generator, Number, Identifier };
  Kind kind = Kind::Number;
  std::string name;                          // generator or identifier
  Rational value;                            // number literal
  unsigned exponent = 1;                     // power
  std::vector<std::shared_ptr<Expr>> items;  // sum terms, product factors, or the power base
  std::vector<bool> negated;                 // per sum term

  friend bool operator==(const Expr& a, const Expr& b);
};

using ExprPtr = std::shared_ptr<Expr>;

// expr := [sign] term (('+'|'-') term)*; term := factor ('*' factor)*;
// factor := atom ('^' uint)?; atom := X | D | A | ADAG | G | rational | identifier | '(' expr ')'
ExprPtr parse_expr(const std::string& text);
std::string print_expr(const Expr& e);

// A = D + X, ADAG = D - X, G = X*D.
QWeyl lower_expr(const Expr& e, const Bindings& bindings);
QWeyl parse_operator(const std::string& text, const Bindings& bindings = {});

// "a=1/2,b=3" -> bindings
Bindings parse_bindings(const std::string& text);

}  // namespace dmod
