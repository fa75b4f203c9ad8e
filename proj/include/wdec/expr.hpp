#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

namespace wdec {

/// Arithmetic expression over coordinates: variables x, y, z (or x0..x9),
/// constants pi and e, operators + - * / ^ with parentheses, and the
/// functions sin cos tan exp log sqrt abs sinh cosh tanh.
/// Throws std::invalid_argument on parse errors.
class Expr {
public:
  explicit Expr(const std::string& text);
  double eval(const Eigen::VectorXd& coords) const;
  const std::string& text() const { return text_; }

  struct Node;

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

} // namespace wdec
