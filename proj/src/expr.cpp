#include "wdec/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace wdec {

struct Expr::Node {
  enum class Kind { constant, variable, unary, binary, call } kind;
  double value = 0;
  int var = 0;
  char op = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(const Eigen::VectorXd& c) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::variable:
        if (var >= c.size()) throw std::invalid_argument("coordinate index out of range");
        return c[var];
      case Kind::unary: return -a->eval(c);
      case Kind::call: return fn(a->eval(c));
      case Kind::binary: {
        double x = a->eval(c), y = b->eval(c);
        switch (op) {
          case '+': return x + y;
          case '-': return x - y;
          case '*': return x * y;
          case '/': return x / y;
          default: return std::pow(x, y);
        }
      }
    }
    return 0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("expression parse error at position " +
                                std::to_string(i) + ": " + why);
  }

  NodePtr make(Expr::Node n) { return std::make_shared<Expr::Node>(std::move(n)); }

  NodePtr number() {
    size_t start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'))
      ++i;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
      size_t j = i + 1;
      if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
      if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        i = j;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
    }
    Expr::Node n;
    n.kind = Expr::Node::Kind::constant;
    n.value = std::stod(s.substr(start, i - start));
    return make(std::move(n));
  }

  NodePtr identifier() {
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
      ++i;
    std::string name = s.substr(start, i - start);
    static const std::pair<const char*, double (*)(double)> fns[] = {
        {"sin", std::sin}, {"cos", std::cos},   {"tan", std::tan},
        {"exp", std::exp}, {"log", std::log},   {"sqrt", std::sqrt},
        {"abs", std::fabs}, {"sinh", std::sinh}, {"cosh", std::cosh},
        {"tanh", std::tanh}};
    for (const auto& [fname, fn] : fns)
      if (name == fname) {
        if (!eat('(')) fail("expected '(' after " + name);
        NodePtr arg = expression();
        if (!eat(')')) fail("expected ')'");
        Expr::Node n;
        n.kind = Expr::Node::Kind::call;
        n.fn = fn;
        n.a = arg;
        return make(std::move(n));
      }
    Expr::Node n;
    if (name == "pi") {
      n.kind = Expr::Node::Kind::constant;
      n.value = M_PI;
    } else if (name == "e") {
      n.kind = Expr::Node::Kind::constant;
      n.value = M_E;
    } else if (name == "x" || name == "y" || name == "z") {
      n.kind = Expr::Node::Kind::variable;
      n.var = name[0] - 'x';
    } else if (name.size() == 2 && name[0] == 'x' &&
               std::isdigit(static_cast<unsigned char>(name[1]))) {
      n.kind = Expr::Node::Kind::variable;
      n.var = name[1] - '0';
    } else {
      fail("unknown identifier '" + name + "'");
    }
    return make(std::move(n));
  }

  NodePtr primary() {
    skip();
    if (i >= s.size()) fail("unexpected end of input");
    if (s[i] == '(') {
      ++i;
      NodePtr e = expression();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(s[i]))) return identifier();
    fail(std::string("unexpected character '") + s[i] + "'");
  }

  NodePtr power() {
    NodePtr base = primary();
    skip();
    if (i < s.size() && s[i] == '^') {
      ++i;
      Expr::Node n;
      n.kind = Expr::Node::Kind::binary;
      n.op = '^';
      n.a = base;
      n.b = unary();  // right associative; exponent may carry a sign
      return make(std::move(n));
    }
    return base;
  }

  // unary minus binds looser than ^, so -x^2 reads -(x^2)
  NodePtr unary() {
    skip();
    if (i < s.size() && s[i] == '-') {
      ++i;
      Expr::Node n;
      n.kind = Expr::Node::Kind::unary;
      n.a = unary();
      return make(std::move(n));
    }
    return power();
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      skip();
      if (i < s.size() && (s[i] == '*' || s[i] == '/')) {
        char op = s[i++];
        Expr::Node n;
        n.kind = Expr::Node::Kind::binary;
        n.op = op;
        n.a = left;
        n.b = unary();
        left = make(std::move(n));
      } else {
        return left;
      }
    }
  }

  NodePtr expression() {
    NodePtr left = term();
    for (;;) {
      skip();
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        char op = s[i++];
        Expr::Node n;
        n.kind = Expr::Node::Kind::binary;
        n.op = op;
        n.a = left;
        n.b = term();
        left = make(std::move(n));
      } else {
        return left;
      }
    }
  }
};

} // namespace

Expr::Expr(const std::string& text) : text_(text) {
  Parser p(text);
  root_ = p.expression();
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
}

double Expr::eval(const Eigen::VectorXd& coords) const { return root_->eval(coords); }

} // namespace wdec
