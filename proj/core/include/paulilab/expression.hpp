#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "paulilab/grid.hpp"

namespace paulilab {

/// Thrown for malformed expressions; `position()` is the byte offset.
class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Compiled real-valued expression in x, y, z and r = |x|.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses, numeric
/// literals, the constant pi, named parameters, and the functions exp, log,
/// sin, cos, tanh, sqrt, abs, min(a, b), max(a, b).
class Expression {
 public:
  static Expression parse(const std::string& text,
                          const std::map<std::string, double>& params = {});

  /// Throws ExpressionError when the result is not finite.
  double operator()(const Vec3& x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace paulilab
