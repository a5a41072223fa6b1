#include "slinv/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "slinv/error.hpp"

namespace slinv {

using std::numbers::pi;

struct Expression::Node {
  enum class Op { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos, Abs };
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double x) const {
    switch (op) {
      case Op::Number: return value;
      case Op::Variable: return x;
      case Op::Add: return lhs->eval(x) + rhs->eval(x);
      case Op::Sub: return lhs->eval(x) - rhs->eval(x);
      case Op::Mul: return lhs->eval(x) * rhs->eval(x);
      case Op::Div: return lhs->eval(x) / rhs->eval(x);
      case Op::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
      case Op::Neg: return -lhs->eval(x);
      case Op::Exp: return std::exp(lhs->eval(x));
      case Op::Sin: return std::sin(lhs->eval(x));
      case Op::Cos: return std::cos(lhs->eval(x));
      case Op::Abs: return std::abs(lhs->eval(x));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  return std::make_shared<const Expression::Node>(Expression::Node{op, value, std::move(lhs), std::move(rhs)});
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("expression: " + what + " at position " + std::to_string(pos_) +
                          " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = make(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Op::Mul, lhs, unary());
      else if (accept('/'))
        lhs = make(Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return make(Op::Number, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view word = s_.substr(start, pos_ - start);
      if (word == "x" || word == "t") return make(Op::Variable);
      if (word == "pi") return make(Op::Number, nullptr, nullptr, pi);
      if (word == "e") return make(Op::Number, nullptr, nullptr, std::numbers::e);
      Op op;
      if (word == "exp")
        op = Op::Exp;
      else if (word == "sin")
        op = Op::Sin;
      else if (word == "cos")
        op = Op::Cos;
      else if (word == "abs")
        op = Op::Abs;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(word) + "'");
      }
      if (!accept('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(op, arg);
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.text_ = std::string(text);
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

PotentialFn Expression::as_function() const {
  return [root = root_](double x) { return root->eval(x); };
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"zero",     "gaussian-bump", "triangle",
                                                 "even-poly6", "trig-mix",    "poly65",
                                                 "sin4pi",   "final-mix"};
  return names;
}

PotentialFn builtin_potential(std::string_view name) {
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "gaussian-bump")
    return [](double x) { return 1.0 - std::exp(-20.0 * (x - 0.5) * (x - 0.5)); };
  if (name == "triangle")
    return [](double x) {
      return x < 0.5 ? 1.0 - std::abs(x - 0.25) : 1.0 - std::abs(x - 0.75);
    };
  if (name == "even-poly6")
    return [](double x) {
      const double u = 2.0 * (x - 0.5);
      const double u2 = u * u;
      return u2 * u2 * u2 - 3.0 * u2 * u2 + u2 - 1.0;
    };
  if (name == "trig-mix")
    return [](double t) {
      return 1.0 + t + 0.3 * std::cos(2 * pi * t) - 0.1 * std::sin(2 * pi * t) +
             std::cos(4 * pi * t) + 0.56 * std::sin(4 * pi * t);
    };
  if (name == "poly65") return [](double t) { return std::pow(t, 6) + std::pow(t, 5) - t; };
  if (name == "sin4pi") return [](double x) { return 1.0 + 0.5 * std::sin(4 * pi * x); };
  if (name == "final-mix")
    return [](double t) { return 1.0 + (t - 0.5) * (t - 0.5) + 0.5 * std::sin(4 * pi * t); };
  throw InvalidArgument("unknown built-in potential '" + std::string(name) + "'");
}

}  // namespace slinv
