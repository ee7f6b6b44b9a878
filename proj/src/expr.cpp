#include "curvdisk/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace curvdisk {

enum class Op {
  kConst, kX1, kX2, kTheta,
  kAdd, kSub, kMul, kDiv, kPow, kNeg,
  kSin, kCos, kExp, kLog, kSqrt, kAbs
};

struct Expr::Node {
  Op op = Op::kConst;
  double value = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr number(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::kConst;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->op == Op::kConst && n->value == v;
}

// Light constant folding keeps symbolic derivatives from ballooning.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst)
    return number(a->value + b->value);
  return make(Op::kAdd, a, b);
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst)
    return number(a->value - b->value);
  if (is_const(a, 0)) return make(Op::kNeg, nullptr, b);
  return make(Op::kSub, a, b);
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0) || is_const(b, 0)) return number(0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  if (a->op == Op::kConst && b->op == Op::kConst)
    return number(a->value * b->value);
  return make(Op::kMul, a, b);
}
NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0)) return number(0);
  if (is_const(b, 1)) return a;
  return make(Op::kDiv, a, b);
}

double eval_node(const Expr::Node* n, double x1, double x2) {
  switch (n->op) {
    case Op::kConst: return n->value;
    case Op::kX1: return x1;
    case Op::kX2: return x2;
    case Op::kTheta: return std::atan2(x2, x1);
    case Op::kAdd: return eval_node(n->a.get(), x1, x2) + eval_node(n->b.get(), x1, x2);
    case Op::kSub: return eval_node(n->a.get(), x1, x2) - eval_node(n->b.get(), x1, x2);
    case Op::kMul: return eval_node(n->a.get(), x1, x2) * eval_node(n->b.get(), x1, x2);
    case Op::kDiv: return eval_node(n->a.get(), x1, x2) / eval_node(n->b.get(), x1, x2);
    case Op::kPow: return std::pow(eval_node(n->a.get(), x1, x2), eval_node(n->b.get(), x1, x2));
    case Op::kNeg: return -eval_node(n->b.get(), x1, x2);
    case Op::kSin: return std::sin(eval_node(n->b.get(), x1, x2));
    case Op::kCos: return std::cos(eval_node(n->b.get(), x1, x2));
    case Op::kExp: return std::exp(eval_node(n->b.get(), x1, x2));
    case Op::kLog: return std::log(eval_node(n->b.get(), x1, x2));
    case Op::kSqrt: return std::sqrt(eval_node(n->b.get(), x1, x2));
    case Op::kAbs: return std::abs(eval_node(n->b.get(), x1, x2));
  }
  return 0;
}

NodePtr diff_node(const NodePtr& n, bool wrt_x1) {
  switch (n->op) {
    case Op::kConst: return number(0);
    case Op::kX1: return number(wrt_x1 ? 1 : 0);
    case Op::kX2: return number(wrt_x1 ? 0 : 1);
    case Op::kTheta: {
      // theta = atan2(x2, x1): grad = (-x2, x1) / (x1^2 + x2^2)
      NodePtr r2 = add(mul(make(Op::kX1), make(Op::kX1)),
                       mul(make(Op::kX2), make(Op::kX2)));
      return wrt_x1 ? div(make(Op::kNeg, nullptr, make(Op::kX2)), r2)
                    : div(make(Op::kX1), r2);
    }
    case Op::kAdd: return add(diff_node(n->a, wrt_x1), diff_node(n->b, wrt_x1));
    case Op::kSub: return sub(diff_node(n->a, wrt_x1), diff_node(n->b, wrt_x1));
    case Op::kMul:
      return add(mul(diff_node(n->a, wrt_x1), n->b),
                 mul(n->a, diff_node(n->b, wrt_x1)));
    case Op::kDiv:
      return div(sub(mul(diff_node(n->a, wrt_x1), n->b),
                     mul(n->a, diff_node(n->b, wrt_x1))),
                 mul(n->b, n->b));
    case Op::kPow: {
      if (n->b->op == Op::kConst) {
        double p = n->b->value;
        return mul(number(p), mul(diff_node(n->a, wrt_x1),
                                  make(Op::kPow, n->a, number(p - 1))));
      }
      // a^b = exp(b log a)
      NodePtr da = diff_node(n->a, wrt_x1), db = diff_node(n->b, wrt_x1);
      NodePtr term = add(mul(db, make(Op::kLog, nullptr, n->a)),
                         div(mul(n->b, da), n->a));
      return mul(make(Op::kPow, n->a, n->b), term);
    }
    case Op::kNeg: return make(Op::kNeg, nullptr, diff_node(n->b, wrt_x1));
    case Op::kSin:
      return mul(make(Op::kCos, nullptr, n->b), diff_node(n->b, wrt_x1));
    case Op::kCos:
      return make(Op::kNeg, nullptr,
                  mul(make(Op::kSin, nullptr, n->b), diff_node(n->b, wrt_x1)));
    case Op::kExp: return mul(make(Op::kExp, nullptr, n->b), diff_node(n->b, wrt_x1));
    case Op::kLog: return div(diff_node(n->b, wrt_x1), n->b);
    case Op::kSqrt:
      return div(diff_node(n->b, wrt_x1),
                 mul(number(2), make(Op::kSqrt, nullptr, n->b)));
    case Op::kAbs:
      return mul(div(n->b, make(Op::kAbs, nullptr, n->b)),
                 diff_node(n->b, wrt_x1));
  }
  return number(0);
}

std::string str_node(const Expr::Node* n);

std::string wrap(const Expr::Node* n) { return "(" + str_node(n) + ")"; }

std::string str_node(const Expr::Node* n) {
  switch (n->op) {
    case Op::kConst: {
      char buf[32];
      snprintf(buf, sizeof buf, "%.17g", n->value);
      return buf;
    }
    case Op::kX1: return "x1";
    case Op::kX2: return "x2";
    case Op::kTheta: return "theta";
    case Op::kAdd: return wrap(n->a.get()) + " + " + wrap(n->b.get());
    case Op::kSub: return wrap(n->a.get()) + " - " + wrap(n->b.get());
    case Op::kMul: return wrap(n->a.get()) + " * " + wrap(n->b.get());
    case Op::kDiv: return wrap(n->a.get()) + " / " + wrap(n->b.get());
    case Op::kPow: return wrap(n->a.get()) + " ^ " + wrap(n->b.get());
    case Op::kNeg: return "-" + wrap(n->b.get());
    case Op::kSin: return "sin" + wrap(n->b.get());
    case Op::kCos: return "cos" + wrap(n->b.get());
    case Op::kExp: return "exp" + wrap(n->b.get());
    case Op::kLog: return "log" + wrap(n->b.get());
    case Op::kSqrt: return "sqrt" + wrap(n->b.get());
    case Op::kAbs: return "abs" + wrap(n->b.get());
  }
  return "";
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("expression error at position " +
                                std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    for (;;) {
      if (eat('+')) e = add(e, term());
      else if (eat('-')) e = sub(e, term());
      else return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (eat('*')) e = mul(e, unary());
      else if (eat('/')) e = div(e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::kNeg, nullptr, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Op::kPow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return number(v);
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (name == "x1") return make(Op::kX1);
      if (name == "x2") return make(Op::kX2);
      if (name == "theta") return make(Op::kTheta);
      if (name == "pi") return number(3.14159265358979323846);
      Op op;
      if (name == "sin") op = Op::kSin;
      else if (name == "cos") op = Op::kCos;
      else if (name == "exp") op = Op::kExp;
      else if (name == "log") op = Op::kLog;
      else if (name == "sqrt") op = Op::kSqrt;
      else if (name == "abs") op = Op::kAbs;
      else fail("unknown identifier '" + name + "'");
      if (!eat('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!eat(')')) fail("expected ')'");
      return make(op, nullptr, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expr Expr::parse(const std::string& text) {
  return Expr(Parser(text).run());
}

double Expr::eval(double x1, double x2) const {
  return eval_node(root_.get(), x1, x2);
}

Expr Expr::diff(const std::string& var) const {
  if (var != "x1" && var != "x2")
    throw std::invalid_argument("diff: variable must be x1 or x2");
  return Expr(diff_node(root_, var == "x1"));
}

std::string Expr::str() const { return str_node(root_.get()); }

}  // namespace curvdisk
