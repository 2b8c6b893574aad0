#include "advconf/constraint.hpp"

#include <cctype>
#include <charconv>
#include <system_error>

#include "advconf/errors.hpp"

namespace advconf {

ExprPtr Expr::make_atom(Atom a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Atom;
  e->atom = std::move(a);
  return e;
}

ExprPtr Expr::make_not(ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Not;
  e->lhs = std::move(operand);
  return e;
}

ExprPtr Expr::make_binary(Kind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Atom:
      return a.atom == b.atom;
    case Expr::Kind::Not:
      return structurally_equal(*a.lhs, *b.lhs);
    default:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

namespace {

enum class Tok { Ident, Number, Not, And, Or, Implies, LParen, RParen, Cmp, End };

struct Token {
  Tok type;
  std::string_view text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  ExprPtr parse() {
    ExprPtr e = implication();
    if (cur_.type != Tok::End) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("constraint '" + std::string(text_) + "': " + what + " at offset " +
                     std::to_string(cur_.pos));
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      cur_ = {Tok::End, {}, start};
      return;
    }
    auto two = text_.substr(pos_, 2);
    auto emit = [&](Tok t, std::size_t len) {
      cur_ = {t, text_.substr(start, len), start};
      pos_ += len;
    };
    const char c = text_[pos_];
    if (two == "&&") return emit(Tok::And, 2);
    if (two == "||") return emit(Tok::Or, 2);
    if (two == "=>") return emit(Tok::Implies, 2);
    if (two == "==" || two == "<=" || two == ">=") return emit(Tok::Cmp, 2);
    if (c == '<' || c == '>') return emit(Tok::Cmp, 1);
    if (c == '!') return emit(Tok::Not, 1);
    if (c == '(') return emit(Tok::LParen, 1);
    if (c == ')') return emit(Tok::RParen, 1);
    if (ident_start(c)) {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && ident_char(text_[end])) ++end;
      return emit(Tok::Ident, end - pos_);
    }
    if (digit(c) || c == '-' || c == '.') {
      std::size_t end = pos_ + 1;
      while (end < text_.size()) {
        const char d = text_[end];
        const bool exp_sign = (d == '+' || d == '-') && (text_[end - 1] == 'e' || text_[end - 1] == 'E');
        if (!(digit(d) || d == '.' || d == 'e' || d == 'E' || exp_sign)) break;
        ++end;
      }
      return emit(Tok::Number, end - pos_);
    }
    cur_ = {Tok::End, {}, start};
    fail(std::string("unexpected character '") + c + "'");
  }

  void expect(Tok t, const char* what) {
    if (cur_.type != t) fail(std::string("expected ") + what);
    advance();
  }

  ExprPtr implication() {
    ExprPtr lhs = disjunction();
    if (cur_.type == Tok::Implies) {
      advance();
      return Expr::make_binary(Expr::Kind::Implies, lhs, implication());
    }
    return lhs;
  }

  ExprPtr disjunction() {
    ExprPtr e = conjunction();
    while (cur_.type == Tok::Or) {
      advance();
      e = Expr::make_binary(Expr::Kind::Or, e, conjunction());
    }
    return e;
  }

  ExprPtr conjunction() {
    ExprPtr e = unary();
    while (cur_.type == Tok::And) {
      advance();
      e = Expr::make_binary(Expr::Kind::And, e, unary());
    }
    return e;
  }

  ExprPtr unary() {
    if (cur_.type == Tok::Not) {
      advance();
      return Expr::make_not(unary());
    }
    if (cur_.type == Tok::LParen) {
      advance();
      ExprPtr e = implication();
      expect(Tok::RParen, "')'");
      return e;
    }
    return atom();
  }

  ExprPtr atom() {
    if (cur_.type != Tok::Ident) fail("expected option name");
    Atom a;
    a.option = std::string(cur_.text);
    advance();
    if (cur_.type != Tok::Cmp) fail("expected comparison operator");
    const auto op = cur_.text;
    a.op = op == "==" ? CompareOp::Eq
         : op == "<"  ? CompareOp::Lt
         : op == "<=" ? CompareOp::Le
         : op == ">"  ? CompareOp::Gt
                      : CompareOp::Ge;
    advance();
    if (cur_.type == Tok::Number) {
      double v = 0;
      const auto* first = cur_.text.data();
      const auto* last = first + cur_.text.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) fail("malformed number");
      a.literal = v;
    } else if (cur_.type == Tok::Ident) {
      if (cur_.text == "true") a.literal = true;
      else if (cur_.text == "false") a.literal = false;
      else a.literal = std::string(cur_.text);
    } else {
      fail("expected literal");
    }
    advance();
    return Expr::make_atom(std::move(a));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token cur_{Tok::End, {}, 0};
};

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Implies: return 1;
    case Expr::Kind::Or: return 2;
    case Expr::Kind::And: return 3;
    default: return 4;
  }
}

std::string literal_text(const OptionValue& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return format_real(std::get<double>(v));
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Atom:
      out += e.atom.option;
      out += ' ';
      out += to_string(e.atom.op);
      out += ' ';
      out += literal_text(e.atom.literal);
      return;
    case Expr::Kind::Not:
      out += "!(";
      print(*e.lhs, out);
      out += ')';
      return;
    default:
      break;
  }
  const int p = precedence(e.kind);
  const bool right_assoc = e.kind == Expr::Kind::Implies;
  const int pl = precedence(e.lhs->kind);
  const int pr = precedence(e.rhs->kind);
  const bool wrap_l = pl < p || (right_assoc && pl == p);
  const bool wrap_r = pr < p || (!right_assoc && pr == p);

  if (wrap_l) out += '(';
  print(*e.lhs, out);
  if (wrap_l) out += ')';
  out += e.kind == Expr::Kind::And ? " && " : e.kind == Expr::Kind::Or ? " || " : " => ";
  if (wrap_r) out += '(';
  print(*e.rhs, out);
  if (wrap_r) out += ')';
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEni") == std::string::npos) s += ".0";
  return s;
}

}  // namespace advconf
