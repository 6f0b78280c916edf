#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include "error.hpp"

namespace canal {

// Scalar expressions in s. The cone-direction inputs of null canals may also
// use t and w; differentiation is always with respect to s.
class Expr {
 public:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Func };
  enum class Fn { Sin, Cos, Sinh, Cosh, Tan, Tanh, Exp, Log, Sqrt };

  struct Node {
    Op op = Op::Const;
    double value = 0;  // constant, or exponent for Pow
    int var = 0;       // 0 = s, 1 = t, 2 = w
    Fn fn = Fn::Sin;
    std::shared_ptr<const Node> a, b;
  };
  using Ptr = std::shared_ptr<const Node>;

  Expr() : n_(make_const(0).n_) {}
  explicit Expr(Ptr p) : n_(std::move(p)) {}

  const Node& node() const { return *n_; }
  const Ptr& ptr() const { return n_; }
  bool is_const() const { return n_->op == Op::Const; }
  bool is_const(double v) const { return is_const() && n_->value == v; }
  double const_value() const { return n_->value; }

  static Expr make_const(double v) {
    auto p = std::make_shared<Node>();
    p->op = Op::Const;
    p->value = v;
    return Expr(p);
  }
  static Expr make_var(int i = 0) {
    auto p = std::make_shared<Node>();
    p->op = Op::Var;
    p->var = i;
    return Expr(p);
  }

 private:
  Ptr n_;
};

namespace detail {

inline Expr node(Expr::Op op, const Expr& a, const Expr& b) {
  auto p = std::make_shared<Expr::Node>();
  p->op = op;
  p->a = a.ptr();
  p->b = b.ptr();
  return Expr(p);
}

inline const char* fn_name(Expr::Fn f) {
  switch (f) {
    case Expr::Fn::Sin: return "sin";
    case Expr::Fn::Cos: return "cos";
    case Expr::Fn::Sinh: return "sinh";
    case Expr::Fn::Cosh: return "cosh";
    case Expr::Fn::Tan: return "tan";
    case Expr::Fn::Tanh: return "tanh";
    case Expr::Fn::Exp: return "exp";
    case Expr::Fn::Log: return "log";
    case Expr::Fn::Sqrt: return "sqrt";
  }
  return "?";
}

inline bool fn_lookup(std::string_view name, Expr::Fn& out) {
  static const std::pair<const char*, Expr::Fn> table[] = {
      {"sin", Expr::Fn::Sin},   {"cos", Expr::Fn::Cos},   {"sinh", Expr::Fn::Sinh},
      {"cosh", Expr::Fn::Cosh}, {"tan", Expr::Fn::Tan},   {"tanh", Expr::Fn::Tanh},
      {"exp", Expr::Fn::Exp},   {"log", Expr::Fn::Log},   {"sqrt", Expr::Fn::Sqrt}};
  for (auto& [n, f] : table)
    if (name == n) {
      out = f;
      return true;
    }
  return false;
}

template <class T>
T apply_fn(Expr::Fn f, T x) {
  // unqualified calls so extended-precision scalar types find their own overloads
  using std::sin, std::cos, std::sinh, std::cosh, std::tan, std::tanh, std::exp, std::log, std::sqrt;
  switch (f) {
    case Expr::Fn::Sin: return sin(x);
    case Expr::Fn::Cos: return cos(x);
    case Expr::Fn::Sinh: return sinh(x);
    case Expr::Fn::Cosh: return cosh(x);
    case Expr::Fn::Tan:
      if (cos(x) == 0.0) throw Error(ErrorKind::DomainError, "tan pole");
      return tan(x);
    case Expr::Fn::Tanh: return tanh(x);
    case Expr::Fn::Exp: return exp(x);
    case Expr::Fn::Log:
      if (!(x > 0)) throw Error(ErrorKind::DomainError, "log of non-positive value");
      return log(x);
    case Expr::Fn::Sqrt:
      if (x < 0) throw Error(ErrorKind::DomainError, "sqrt of negative value");
      return sqrt(x);
  }
  return 0;
}

template <class T>
T apply_pow(T x, double p) {
  if (x == 0 && p < 0) throw Error(ErrorKind::DomainError, "zero to a negative power");
  if (x < 0 && p != std::floor(p)) throw Error(ErrorKind::DomainError, "negative base to a fractional power");
  using std::pow;
  if (p == std::floor(p) && std::abs(p) <= 16) {
    // small integer powers by multiplication, exact for every scalar type
    T v = 1;
    for (int i = 0; i < std::abs(static_cast<int>(p)); ++i) v *= x;
    return p < 0 ? T(1) / v : v;
  }
  return pow(x, T(p));
}

}  // namespace detail

// constructors with constant folding and the obvious identities

inline Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr::make_const(-a.const_value());
  if (a.node().op == Expr::Op::Neg) return Expr(a.node().a);
  auto p = std::make_shared<Expr::Node>();
  p->op = Expr::Op::Neg;
  p->a = a.ptr();
  return Expr(p);
}

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::make_const(a.const_value() + b.const_value());
  if (a.is_const(0)) return b;
  if (b.is_const(0)) return a;
  return detail::node(Expr::Op::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::make_const(a.const_value() - b.const_value());
  if (b.is_const(0)) return a;
  if (a.is_const(0)) return -b;
  return detail::node(Expr::Op::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr::make_const(a.const_value() * b.const_value());
  if (a.is_const(0) || b.is_const(0)) return Expr::make_const(0);
  if (a.is_const(1)) return b;
  if (b.is_const(1)) return a;
  if (a.is_const(-1)) return -b;
  if (b.is_const(-1)) return -a;
  return detail::node(Expr::Op::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && b.const_value() != 0)
    return Expr::make_const(a.const_value() / b.const_value());
  if (a.is_const(0) && !b.is_const(0)) return Expr::make_const(0);
  if (b.is_const(1)) return a;
  return detail::node(Expr::Op::Div, a, b);
}

inline Expr pow(const Expr& a, double p) {
  if (p == 0) return Expr::make_const(1);
  if (p == 1) return a;
  if (a.is_const()) {
    double x = a.const_value();
    if (!(x == 0 && p < 0) && !(x < 0 && p != std::floor(p))) return Expr::make_const(std::pow(x, p));
  }
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Pow;
  n->value = p;
  n->a = a.ptr();
  return Expr(n);
}

inline Expr apply(Expr::Fn f, const Expr& a) {
  if (a.is_const()) {
    try {
      double v = detail::apply_fn(f, a.const_value());
      if (std::isfinite(v)) return Expr::make_const(v);
    } catch (const Error&) {
      // keep the node so evaluation reports the domain error
    }
  }
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Func;
  n->fn = f;
  n->a = a.ptr();
  return Expr(n);
}

namespace detail {

template <class T>
T eval_node(const Expr::Node& n, const T* vars) {
  using Op = Expr::Op;
  T r = 0;
  switch (n.op) {
    case Op::Const: return T(n.value);
    case Op::Var: return vars[n.var];
    case Op::Neg: return -eval_node(*n.a, vars);
    case Op::Add: r = eval_node(*n.a, vars) + eval_node(*n.b, vars); break;
    case Op::Sub: r = eval_node(*n.a, vars) - eval_node(*n.b, vars); break;
    case Op::Mul: r = eval_node(*n.a, vars) * eval_node(*n.b, vars); break;
    case Op::Div: {
      T d = eval_node(*n.b, vars);
      if (d == 0) throw Error(ErrorKind::DomainError, "division by zero");
      r = eval_node(*n.a, vars) / d;
      break;
    }
    case Op::Pow: r = apply_pow(eval_node(*n.a, vars), n.value); break;
    case Op::Func: r = apply_fn(n.fn, eval_node(*n.a, vars)); break;
  }
  if (!std::isfinite(static_cast<double>(r))) throw Error(ErrorKind::DomainError, "non-finite intermediate value");
  return r;
}

}  // namespace detail

inline double eval(const Expr& e, double s, double t = 0, double w = 0) {
  const double v[3] = {s, t, w};
  return detail::eval_node(e.node(), v);
}

// same in another scalar type (the finite-difference oracle runs in quad precision)
template <class T>
T eval_as(const Expr& e, T s, T t = 0, T w = 0) {
  const T v[3] = {s, t, w};
  return detail::eval_node(e.node(), v);
}

inline Expr differentiate(const Expr& e) {
  using Op = Expr::Op;
  using Fn = Expr::Fn;
  const auto& n = e.node();
  auto sub = [](const Expr::Ptr& p) { return Expr(p); };
  switch (n.op) {
    case Op::Const: return Expr::make_const(0);
    case Op::Var: return Expr::make_const(n.var == 0 ? 1 : 0);
    case Op::Neg: return -differentiate(sub(n.a));
    case Op::Add: return differentiate(sub(n.a)) + differentiate(sub(n.b));
    case Op::Sub: return differentiate(sub(n.a)) - differentiate(sub(n.b));
    case Op::Mul: {
      Expr u = sub(n.a), v = sub(n.b);
      return differentiate(u) * v + u * differentiate(v);
    }
    case Op::Div: {
      Expr u = sub(n.a), v = sub(n.b);
      Expr du = differentiate(u), dv = differentiate(v);
      if (dv.is_const(0)) return du / v;
      return (du * v - u * dv) / pow(v, 2);
    }
    case Op::Pow: {
      Expr u = sub(n.a);
      return Expr::make_const(n.value) * pow(u, n.value - 1) * differentiate(u);
    }
    case Op::Func: {
      Expr u = sub(n.a);
      Expr du = differentiate(u);
      if (du.is_const(0)) return Expr::make_const(0);
      switch (n.fn) {
        case Fn::Sin: return apply(Fn::Cos, u) * du;
        case Fn::Cos: return -(apply(Fn::Sin, u) * du);
        case Fn::Sinh: return apply(Fn::Cosh, u) * du;
        case Fn::Cosh: return apply(Fn::Sinh, u) * du;
        case Fn::Tan: return du / pow(apply(Fn::Cos, u), 2);
        case Fn::Tanh: return (Expr::make_const(1) - pow(apply(Fn::Tanh, u), 2)) * du;
        case Fn::Exp: return apply(Fn::Exp, u) * du;
        case Fn::Log: return du / u;
        case Fn::Sqrt: return du / (Expr::make_const(2) * apply(Fn::Sqrt, u));
      }
    }
  }
  return Expr::make_const(0);
}

namespace detail {

inline std::string num_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (v < 0) return "(" + s + ")";
  return s;
}

inline void print_node(const Expr::Node& n, std::string& out) {
  using Op = Expr::Op;
  static const char* vars[] = {"s", "t", "w"};
  switch (n.op) {
    case Op::Const: out += num_text(n.value); return;
    case Op::Var: out += vars[n.var]; return;
    case Op::Neg:
      out += "(-";
      print_node(*n.a, out);
      out += ")";
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const char* op = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
      out += "(";
      print_node(*n.a, out);
      out += op;
      print_node(*n.b, out);
      out += ")";
      return;
    }
    case Op::Pow:
      out += "(";
      print_node(*n.a, out);
      out += "^" + num_text(n.value) + ")";
      return;
    case Op::Func:
      out += fn_name(n.fn);
      out += "(";
      print_node(*n.a, out);
      out += ")";
      return;
  }
}

class Parser {
 public:
  Parser(std::string_view text, bool allow_tw) : src_(text), allow_tw_(allow_tw) {}

  Expr run() {
    Expr e = sum();
    skip();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view src_;
  size_t pos_ = 0;
  bool allow_tw_;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::SyntaxError, why + " at byte " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (eat('+')) e = e + product();
      else if (eat('-')) e = e - product();
      else return e;
    }
  }
  Expr product() {
    Expr e = unary();
    for (;;) {
      if (eat('*')) e = e * unary();
      else if (eat('/')) e = e / unary();
      else return e;
    }
  }
  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Expr power() {
    Expr base = primary();
    if (eat('^')) {
      size_t at = pos_;
      Expr ex = unary();  // right-associative, allows 2^-1
      if (!ex.is_const()) {
        pos_ = at;
        fail("exponent must be a constant");
      }
      return pow(base, ex.const_value());
    }
    return base;
  }
  Expr primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
      std::string_view name = src_.substr(start, pos_ - start);
      skip();
      bool call = pos_ < src_.size() && src_[pos_] == '(';
      if (call) {
        Expr::Fn f;
        if (!fn_lookup(name, f))
          throw Error(ErrorKind::UnknownFunction, std::string(name) + " at byte " + std::to_string(start));
        ++pos_;
        Expr arg = sum();
        if (!eat(')')) fail("expected ')'");
        return apply(f, arg);
      }
      if (name == "s") return Expr::make_var(0);
      if (allow_tw_ && name == "t") return Expr::make_var(1);
      if (allow_tw_ && name == "w") return Expr::make_var(2);
      if (name == "pi") return Expr::make_const(3.14159265358979323846);
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  Expr number() {
    size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::make_const(v);
  }
};

}  // namespace detail

inline Expr parse(std::string_view text, bool allow_tw = false) {
  return detail::Parser(text, allow_tw).run();
}

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_node(e.node(), out);
  return out;
}

}  // namespace canal
