#pragma once

#include <memory>
#include <string>

namespace cldg {

/// Compiled arithmetic expression in the variables x, y, t. Supports
/// + - * / ^, parentheses, the constants pi and e, and the functions
/// sin cos tan exp log sqrt abs gamma pow min max. Evaluation only.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(double x, double y = 0.0, double t = 0.0) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
};

}  // namespace cldg
