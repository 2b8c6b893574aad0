#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace advconf {

// A value assigned to an option: boolean, categorical choice, or real.
using OptionValue = std::variant<bool, std::string, double>;

enum class CompareOp { Eq, Lt, Le, Gt, Ge };

struct Atom {
  std::string option;
  CompareOp op = CompareOp::Eq;
  OptionValue literal;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable boolean expression tree. Binary connectives are left-nested
// for && and ||, right-nested for =>.
struct Expr {
  enum class Kind { Atom, Not, And, Or, Implies };

  Kind kind = Kind::Atom;
  Atom atom;     // Kind::Atom only
  ExprPtr lhs;   // operand of Not, left operand of binary kinds
  ExprPtr rhs;

  static ExprPtr make_atom(Atom a);
  static ExprPtr make_not(ExprPtr e);
  static ExprPtr make_binary(Kind kind, ExprPtr lhs, ExprPtr rhs);
};

bool structurally_equal(const Expr& a, const Expr& b);

// Parses the constraint grammar:
//   expr := atom | "!" expr | expr "&&" expr | expr "||" expr | expr "=>" expr | "(" expr ")"
//   atom := name ("=="|"<"|"<="|">"|">=") literal
// Precedence from tightest: "!", "&&", "||", "=>" (right associative).
// Only syntax is checked here; VariabilityModel type-checks atoms.
ExprPtr parse_expr(std::string_view text);

// Canonical text form; parse_expr(to_string(e)) is structurally equal to e.
std::string to_string(const Expr& e);

std::string to_string(CompareOp op);

// Shortest round-trip decimal, always carrying a '.' or exponent.
std::string format_real(double v);

struct Constraint {
  ExprPtr expr;

  std::string text() const { return to_string(*expr); }
};

}  // namespace advconf
