#include "cldg/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cldg {

struct Expression::Node {
  std::function<double(double, double, double)> eval;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(std::function<double(double, double, double)> f) {
  auto n = std::make_shared<Expression::Node>();
  n->eval = std::move(f);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size())
      throw std::invalid_argument("expression: trailing input at '" +
                                  text_.substr(pos_) + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (consume('+')) {
        NodePtr rhs = term();
        lhs = make([lhs, rhs](double x, double y, double t) {
          return lhs->eval(x, y, t) + rhs->eval(x, y, t);
        });
      } else if (consume('-')) {
        NodePtr rhs = term();
        lhs = make([lhs, rhs](double x, double y, double t) {
          return lhs->eval(x, y, t) - rhs->eval(x, y, t);
        });
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (consume('*')) {
        NodePtr rhs = unary();
        lhs = make([lhs, rhs](double x, double y, double t) {
          return lhs->eval(x, y, t) * rhs->eval(x, y, t);
        });
      } else if (consume('/')) {
        NodePtr rhs = unary();
        lhs = make([lhs, rhs](double x, double y, double t) {
          return lhs->eval(x, y, t) / rhs->eval(x, y, t);
        });
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (consume('-')) {
      NodePtr v = unary();
      return make([v](double x, double y, double t) { return -v->eval(x, y, t); });
    }
    consume('+');
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (consume('^')) {
      NodePtr exp = unary();
      return make([base, exp](double x, double y, double t) {
        return std::pow(base->eval(x, y, t), exp->eval(x, y, t));
      });
    }
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size())
      throw std::invalid_argument("expression: unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    if (consume('(')) {
      NodePtr e = expr();
      if (!consume(')')) throw std::invalid_argument("expression: missing ')'");
      return e;
    }
    throw std::invalid_argument(std::string("expression: unexpected character '") +
                                c + "'");
  }

  NodePtr number() {
    size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) ||
            text_[end] == '.' || text_[end] == 'e' || text_[end] == 'E' ||
            ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
             (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
      ++end;
    const double v = std::stod(text_.substr(pos_, end - pos_));
    pos_ = end;
    return make([v](double, double, double) { return v; });
  }

  NodePtr ident() {
    size_t end = pos_;
    while (end < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
      ++end;
    const std::string name = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (name == "x") return make([](double x, double, double) { return x; });
    if (name == "y") return make([](double, double y, double) { return y; });
    if (name == "t") return make([](double, double, double t) { return t; });
    if (name == "pi") return make([](double, double, double) { return M_PI; });
    if (name == "e") return make([](double, double, double) { return M_E; });

    if (!consume('('))
      throw std::invalid_argument("expression: unknown identifier '" + name + "'");
    std::vector<NodePtr> args;
    if (!consume(')')) {
      do {
        args.push_back(expr());
      } while (consume(','));
      if (!consume(')')) throw std::invalid_argument("expression: missing ')'");
    }
    auto unary_fn = [&](double (*fn)(double)) {
      if (args.size() != 1)
        throw std::invalid_argument("expression: '" + name + "' takes one argument");
      NodePtr a = args[0];
      return make([a, fn](double x, double y, double t) { return fn(a->eval(x, y, t)); });
    };
    auto binary_fn = [&](double (*fn)(double, double)) {
      if (args.size() != 2)
        throw std::invalid_argument("expression: '" + name + "' takes two arguments");
      NodePtr a = args[0], b = args[1];
      return make([a, b, fn](double x, double y, double t) {
        return fn(a->eval(x, y, t), b->eval(x, y, t));
      });
    };
    if (name == "sin") return unary_fn(std::sin);
    if (name == "cos") return unary_fn(std::cos);
    if (name == "tan") return unary_fn(std::tan);
    if (name == "exp") return unary_fn(std::exp);
    if (name == "log") return unary_fn(std::log);
    if (name == "sqrt") return unary_fn(std::sqrt);
    if (name == "abs") return unary_fn(std::fabs);
    if (name == "gamma") return unary_fn(std::tgamma);
    if (name == "pow") return binary_fn(std::pow);
    if (name == "min") return binary_fn([](double a, double b) { return std::fmin(a, b); });
    if (name == "max") return binary_fn([](double a, double b) { return std::fmax(a, b); });
    throw std::invalid_argument("expression: unknown function '" + name + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::operator()(double x, double y, double t) const {
  if (!root_) throw std::logic_error("Expression: empty");
  return root_->eval(x, y, t);
}

}  // namespace cldg
