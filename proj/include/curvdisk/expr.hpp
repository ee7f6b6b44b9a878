#pragma once
// Tiny closed-form expression grammar for curvature data and Pohozaev vector
// fields: real literals, x1, x2, theta, + - * / ^, sin cos exp log sqrt abs.
// Expressions evaluate on grid nodes and differentiate symbolically.

#include <memory>
#include <string>

namespace curvdisk {

class Expr {
 public:
  // Throws std::invalid_argument with a position message on parse errors.
  static Expr parse(const std::string& text);

  double eval(double x1, double x2) const;

  // Symbolic partial derivative; var is "x1" or "x2". theta is treated as
  // atan2(x2, x1) so d(theta)/dx1 = -x2/r^2, d(theta)/dx2 = x1/r^2.
  Expr diff(const std::string& var) const;

  std::string str() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace curvdisk
