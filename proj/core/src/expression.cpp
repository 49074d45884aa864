#include "paulilab/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace paulilab {

ExpressionError::ExpressionError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at offset " + std::to_string(position)),
      position_(position) {}

struct Expression::Node {
  enum class Kind { Number, Var, Unary, Binary, Call };
  Kind kind = Kind::Number;
  double value = 0.0;
  int var = 0;  // 0..2 coordinates, 3 radius
  char op = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(const Vec3& x) const {
    switch (kind) {
      case Kind::Number:
        return value;
      case Kind::Var:
        return var < 3 ? x[var]
                       : std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      case Kind::Unary:
        return -args[0]->eval(x);
      case Kind::Binary: {
        const double a = args[0]->eval(x);
        const double b = args[1]->eval(x);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          default: return std::pow(a, b);
        }
      }
      case Kind::Call: {
        const double a = args[0]->eval(x);
        if (fn == "exp") return std::exp(a);
        if (fn == "log") return std::log(a);
        if (fn == "sin") return std::sin(a);
        if (fn == "cos") return std::cos(a);
        if (fn == "tanh") return std::tanh(a);
        if (fn == "sqrt") return std::sqrt(a);
        if (fn == "abs") return std::abs(a);
        const double b = args[1]->eval(x);
        return fn == "min" ? std::min(a, b) : std::max(a, b);
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
 public:
  Parser(const std::string& s, const std::map<std::string, double>& params)
      : s_(s), params_(params) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError(what, pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) lhs = binary('+', lhs, product());
      else if (accept('-')) lhs = binary('-', lhs, product());
      else return lhs;
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = binary('*', lhs, unary());
      else if (accept('/')) lhs = binary('/', lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->args = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    if (accept('(')) {
      NodePtr n = sum();
      expect(')');
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected character");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();
    if (id == "x" || id == "y" || id == "z" || id == "r") {
      n->kind = Node::Kind::Var;
      n->var = id == "x" ? 0 : id == "y" ? 1 : id == "z" ? 2 : 3;
      return n;
    }
    if (id == "pi") {
      n->value = std::numbers::pi;
      return n;
    }
    if (auto it = params_.find(id); it != params_.end()) {
      n->value = it->second;
      return n;
    }
    static const char* unary_fns[] = {"exp", "log", "sin", "cos",
                                      "tanh", "sqrt", "abs"};
    int arity = 0;
    for (const char* f : unary_fns)
      if (id == f) arity = 1;
    if (id == "min" || id == "max") arity = 2;
    if (arity == 0) {
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    n->kind = Node::Kind::Call;
    n->fn = id;
    expect('(');
    n->args.push_back(sum());
    if (arity == 2) {
      expect(',');
      n->args.push_back(sum());
    }
    expect(')');
    return n;
  }

  const std::string& s_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text,
                             const std::map<std::string, double>& params) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text, params).parse();
  return e;
}

double Expression::operator()(const Vec3& x) const {
  const double v = root_->eval(x);
  if (!std::isfinite(v)) {
    throw ExpressionError("non-finite value of '" + text_ + "'", 0);
  }
  return v;
}

}  // namespace paulilab
