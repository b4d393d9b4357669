#pragma once

/**
 * @file formula.hpp
 * @brief Expressions in one complex variable `z`.
 *
 * Grammar (lowest to highest precedence):
 *
 *     expr    := term (('+' | '-') term)*
 *     term    := unary (('*' | '/') unary)*
 *     unary   := '-' unary | power
 *     power   := primary ('^' ['-'] integer)?
 *     primary := number ['i'] | 'i' | 'z' | func '(' expr ')' | '(' expr ')'
 *     func    := exp | log | sqrt | sin | cos
 *
 * Evaluation runs on Dual<cplx>, so every expression yields its exact
 * derivative alongside its value.
 */

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>

#include "core.hpp"
#include "dual.hpp"

namespace holodyn {

using DualValue = Dual<cplx>;

namespace formula {

enum class Op { var, constant, add, sub, mul, div, pow, neg, exp, log, sqrt, sin, cos };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  cplx value{};   // constant
  int power = 0;  // pow
  NodePtr lhs, rhs;
};

inline bool is_function(Op op) {
  return op == Op::exp || op == Op::log || op == Op::sqrt || op == Op::sin || op == Op::cos;
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sqrt: return "sqrt";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    default: return "";
  }
}

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  Expr() : root_(std::make_shared<const Node>(Node{Op::var, {}, 0, nullptr, nullptr})) {}
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  static Expr var() { return Expr(); }
  static Expr constant(cplx c) { return Expr(std::make_shared<const Node>(Node{Op::constant, c, 0, nullptr, nullptr})); }
  static Expr binary(Op op, const Expr& a, const Expr& b) {
    return Expr(std::make_shared<const Node>(Node{op, {}, 0, a.root_, b.root_}));
  }
  static Expr unary(Op op, const Expr& a) {
    return Expr(std::make_shared<const Node>(Node{op, {}, 0, a.root_, nullptr}));
  }
  static Expr pow(const Expr& a, int n) {
    return Expr(std::make_shared<const Node>(Node{Op::pow, {}, n, a.root_, nullptr}));
  }

  const Node& root() const { return *root_; }
  const NodePtr& ptr() const { return root_; }

 private:
  NodePtr root_;
};

inline bool structurally_equal(const Node* a, const Node* b) {
  if (a == b) return true;
  if (!a || !b || a->op != b->op) return false;
  if (a->op == Op::constant && a->value != b->value) return false;
  if (a->op == Op::pow && a->power != b->power) return false;
  return structurally_equal(a->lhs.get(), b->lhs.get()) &&
         structurally_equal(a->rhs.get(), b->rhs.get());
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  return structurally_equal(&a.root(), &b.root());
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "empty expression");
    Expr e = expr();
    skip_ws();
    if (pos_ < s_.size()) throw SyntaxError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (eat('+')) lhs = Expr::binary(Op::add, lhs, term());
      else if (eat('-')) lhs = Expr::binary(Op::sub, lhs, term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = Expr::binary(Op::mul, lhs, unary());
      else if (eat('/')) lhs = Expr::binary(Op::div, lhs, unary());
      else return lhs;
    }
  }

  Expr unary() {
    if (eat('-')) return Expr::unary(Op::neg, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!eat('^')) return base;
    skip_ws();
    bool neg = eat('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw SyntaxError(pos_, "expected integer exponent");
    int n = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, n);
    if (ec != std::errc()) throw SyntaxError(start, "exponent out of range");
    if (eat('^')) throw SyntaxError(pos_ - 1, "chained powers need parentheses");
    return Expr::pow(base, neg ? -n : n);
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw SyntaxError(pos_, "unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) throw SyntaxError(pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  Expr number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') { ++pos_; digits(); }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      std::size_t exp_start = pos_;
      digits();
      // "2exp(z)" style: not an exponent after all.
      if (exp_start == pos_) pos_ = save;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) throw SyntaxError(start, "malformed number");
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        !(pos_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return Expr::constant(cplx(0.0, v));
    }
    return Expr::constant(cplx(v, 0.0));
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string_view name = s_.substr(start, pos_ - start);
    if (name == "z") return Expr::var();
    if (name == "i") return Expr::constant(kI);
    Op op;
    if (name == "exp") op = Op::exp;
    else if (name == "log") op = Op::log;
    else if (name == "sqrt") op = Op::sqrt;
    else if (name == "sin") op = Op::sin;
    else if (name == "cos") op = Op::cos;
    else throw UnknownIdentifier(start, std::string(name));
    if (!eat('(')) throw SyntaxError(pos_, "expected '(' after " + std::string(name));
    Expr arg = expr();
    if (!eat(')')) throw SyntaxError(pos_, "expected ')'");
    return Expr::unary(op, arg);
  }
};

inline std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::add: case Op::sub: return 1;
    case Op::mul: case Op::div: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    case Op::constant:
      // Imaginary literals print as "2i", negative or mixed ones need parens.
      if (n.value.real() != 0.0 && n.value.imag() != 0.0) return 0;
      if (n.value.real() < 0.0 || n.value.imag() < 0.0) return 0;
      return 5;
    default: return 5;
  }
}

inline void print(const Node& n, std::string& out);

inline void print_child(const Node& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print(child, out);
    out += ')';
  } else {
    print(child, out);
  }
}

inline void print(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::var: out += 'z'; return;
    case Op::constant: {
      double re = n.value.real(), im = n.value.imag();
      if (im == 0.0) { out += shortest(re); return; }
      if (re == 0.0) {
        if (im == 1.0) out += 'i';
        else out += shortest(im) + "i";
        return;
      }
      out += shortest(re) + (im < 0 ? "-" : "+") + shortest(std::abs(im)) + "i";
      return;
    }
    case Op::add: case Op::sub: case Op::mul: case Op::div: {
      int p = precedence(n);
      char sym = n.op == Op::add ? '+' : n.op == Op::sub ? '-' : n.op == Op::mul ? '*' : '/';
      print_child(*n.lhs, p, out);
      out += sym;
      // Left-associative: an equal-precedence right child needs parentheses.
      print_child(*n.rhs, p + 1, out);
      return;
    }
    case Op::neg:
      out += '-';
      print_child(*n.lhs, 3, out);
      return;
    case Op::pow:
      print_child(*n.lhs, 5, out);
      out += '^';
      out += std::to_string(n.power);
      return;
    default:
      out += function_name(n.op);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
  }
}

constexpr double kSingular = 1e-300;

inline DualValue eval(const Node& n, const DualValue& z) {
  switch (n.op) {
    case Op::var: return z;
    case Op::constant: return DualValue::constant(n.value);
    case Op::add: return eval(*n.lhs, z) + eval(*n.rhs, z);
    case Op::sub: return eval(*n.lhs, z) - eval(*n.rhs, z);
    case Op::mul: return eval(*n.lhs, z) * eval(*n.rhs, z);
    case Op::div: {
      DualValue den = eval(*n.rhs, z);
      if (std::abs(den.value) < kSingular) throw Error(Errc::eval_singular, "division by zero");
      return eval(*n.lhs, z) / den;
    }
    case Op::neg: return -eval(*n.lhs, z);
    case Op::pow: {
      DualValue b = eval(*n.lhs, z);
      if (n.power < 0 && std::abs(b.value) < kSingular)
        throw Error(Errc::eval_singular, "negative power of zero");
      return ipow(b, n.power);
    }
    case Op::exp: return holodyn::exp(eval(*n.lhs, z));
    case Op::log: {
      DualValue a = eval(*n.lhs, z);
      if (std::abs(a.value) < kSingular) throw Error(Errc::eval_singular, "log at 0");
      return holodyn::log(a);
    }
    case Op::sqrt: {
      DualValue a = eval(*n.lhs, z);
      if (std::abs(a.value) < kSingular) throw Error(Errc::eval_singular, "sqrt at 0");
      return holodyn::sqrt(a);
    }
    case Op::sin: return holodyn::sin(eval(*n.lhs, z));
    case Op::cos: return holodyn::cos(eval(*n.lhs, z));
  }
  throw Error(Errc::invalid_argument, "corrupt expression node");
}

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print(e.root(), out);
  return out;
}

/// Evaluates e at a dual point; the chain rule is applied through z.deriv.
inline DualValue eval_dual(const Expr& e, const DualValue& z) { return detail::eval(e.root(), z); }

inline DualValue eval_dual(const Expr& e, cplx z) { return eval_dual(e, DualValue::variable(z)); }

inline cplx eval(const Expr& e, cplx z) { return eval_dual(e, DualValue::constant(z)).value; }

}  // namespace formula
}  // namespace holodyn
