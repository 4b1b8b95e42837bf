#include "lorentz/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lorentz/errors.hpp"

namespace lorentz {

// ---------------------------------------------------------------------------
// Jet2 arithmetic
// ---------------------------------------------------------------------------

Jet2::Jet2(double v, Vec g, Mat h) : value(v), gradient(std::move(g)), hessian(std::move(h)) {
  hessian = 0.5 * (hessian + hessian.transpose()).eval();
}

Jet2 Jet2::constant(int n, double v) {
  Jet2 j;
  j.value = v;
  j.gradient = Vec::Zero(n);
  j.hessian = Mat::Zero(n, n);
  return j;
}

Jet2 Jet2::variable(int n, int i, double v) {
  Jet2 j = constant(n, v);
  j.gradient(i) = 1.0;
  return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value + b.value;
  r.gradient = a.gradient + b.gradient;
  r.hessian = a.hessian + b.hessian;
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value - b.value;
  r.gradient = a.gradient - b.gradient;
  r.hessian = a.hessian - b.hessian;
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r;
  r.value = -a.value;
  r.gradient = -a.gradient;
  r.hessian = -a.hessian;
  return r;
}

Jet2 operator*(double s, const Jet2& a) {
  Jet2 r;
  r.value = s * a.value;
  r.gradient = s * a.gradient;
  r.hessian = s * a.hessian;
  return r;
}

Jet2 operator+(double s, const Jet2& a) {
  Jet2 r = a;
  r.value += s;
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  r.gradient = a.value * b.gradient + b.value * a.gradient;
  Mat cross = a.gradient * b.gradient.transpose();
  r.hessian = a.value * b.hessian + b.value * a.hessian + cross + cross.transpose();
  return r;
}

Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r;
  r.value = f0;
  r.gradient = f1 * a.gradient;
  r.hessian = f1 * a.hessian + f2 * (a.gradient * a.gradient.transpose());
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.value == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / b.value;
  return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  if (!(a.value > 0.0)) throw DomainError("log of nonpositive argument");
  const double inv = 1.0 / a.value;
  return chain(a, std::log(a.value), inv, -inv * inv);
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return chain(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return chain(a, c, -s, -c);
}

Jet2 tan(const Jet2& a) {
  if (std::cos(a.value) == 0.0) throw DomainError("tan at a pole");
  const double t = std::tan(a.value);
  const double d = 1.0 + t * t;
  return chain(a, t, d, 2.0 * t * d);
}

Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value), c = std::cosh(a.value);
  return chain(a, s, c, s);
}

Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.value), c = std::cosh(a.value);
  return chain(a, c, s, c);
}

Jet2 tanh(const Jet2& a) {
  const double t = std::tanh(a.value);
  const double d = 1.0 - t * t;
  return chain(a, t, d, -2.0 * t * d);
}

Jet2 sqrt(const Jet2& a) {
  if (!(a.value > 0.0)) throw DomainError("sqrt of nonpositive argument");
  const double s = std::sqrt(a.value);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.value));
}

Jet2 pow_int(const Jet2& a, long k) {
  if (k == 0) return Jet2::constant(a.dim(), 1.0);
  const long m = k < 0 ? -k : k;
  Jet2 r = a;
  for (long i = 1; i < m; ++i) r = r * a;
  if (k < 0) return Jet2::constant(a.dim(), 1.0) / r;
  return r;
}

Jet2 pow_real(const Jet2& a, const Jet2& b) {
  if (!(a.value > 0.0)) throw DomainError("real exponent of nonpositive base");
  return exp(b * log(a));
}

// ---------------------------------------------------------------------------
// Symbol table
// ---------------------------------------------------------------------------

SymbolTable::SymbolTable(std::vector<std::string> coordinates, std::vector<std::string> parameters)
    : coordinates_(std::move(coordinates)), parameters_(std::move(parameters)) {}

std::optional<SymbolTable::Entry> SymbolTable::lookup(const std::string& name) const {
  for (std::size_t i = 0; i < coordinates_.size(); ++i)
    if (coordinates_[i] == name) return Entry{Kind::coordinate, static_cast<int>(i)};
  for (std::size_t i = 0; i < parameters_.size(); ++i)
    if (parameters_[i] == name) return Entry{Kind::parameter, static_cast<int>(i)};
  return std::nullopt;
}

std::vector<double> SymbolTable::bind(const std::map<std::string, double>& values) const {
  std::vector<double> out;
  out.reserve(parameters_.size());
  for (const auto& p : parameters_) {
    auto it = values.find(p);
    if (it == values.end()) throw ParamError("parameter '" + p + "' is not bound");
    out.push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_literal(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::literal;
  n->literal = v;
  return n;
}

std::optional<Op> function_op(const std::string& name) {
  static const std::pair<const char*, Op> table[] = {
      {"exp", Op::exp},   {"log", Op::log},   {"sin", Op::sin},   {"cos", Op::cos},
      {"tan", Op::tan},   {"sinh", Op::sinh}, {"cosh", Op::cosh}, {"tanh", Op::tanh},
      {"sqrt", Op::sqrt}};
  for (const auto& [n, op] : table)
    if (name == n) return op;
  return std::nullopt;
}

class Parser {
 public:
  Parser(const std::string& text, const SymbolTable& symbols) : text_(text), symbols_(symbols) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_node(Op::add, lhs, term());
      else if (accept('-')) lhs = make_node(Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_node(Op::mul, lhs, unary());
      else if (accept('/')) lhs = make_node(Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_node(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_node(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    const std::string token = text_.substr(start, pos_ - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    if (used != token.size()) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    return make_literal(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (auto fn = function_op(name)) {
      if (!accept('(')) fail("expected '(' after function " + name);
      NodePtr arg = expression();
      if (!accept(')')) fail("expected ')'");
      return make_node(*fn, arg);
    }
    if (auto entry = symbols_.lookup(name)) {
      auto n = std::make_shared<ExprNode>();
      n->op = entry->kind == SymbolTable::Kind::coordinate ? Op::coordinate : Op::parameter;
      n->index = entry->index;
      n->name = name;
      return n;
    }
    if (name == "pi") return make_literal(std::numbers::pi);
    throw UnknownSymbol(name);
  }

  const std::string& text_;
  const SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

std::optional<long> integral_exponent(const ExprNode& n) {
  double v;
  if (n.op == Op::literal) v = n.literal;
  else if (n.op == Op::neg && n.lhs->op == Op::literal) v = -n.lhs->literal;
  else return std::nullopt;
  if (std::floor(v) != v || std::abs(v) > 64) return std::nullopt;
  return static_cast<long>(v);
}

Jet2 eval_node(const ExprNode& n, std::span<const double> x, std::span<const double> params) {
  const int dim = static_cast<int>(x.size());
  switch (n.op) {
    case Op::literal: return Jet2::constant(dim, n.literal);
    case Op::coordinate: return Jet2::variable(dim, n.index, x[n.index]);
    case Op::parameter: return Jet2::constant(dim, params[n.index]);
    case Op::add: return eval_node(*n.lhs, x, params) + eval_node(*n.rhs, x, params);
    case Op::sub: return eval_node(*n.lhs, x, params) - eval_node(*n.rhs, x, params);
    case Op::mul: return eval_node(*n.lhs, x, params) * eval_node(*n.rhs, x, params);
    case Op::div: return eval_node(*n.lhs, x, params) / eval_node(*n.rhs, x, params);
    case Op::neg: return -eval_node(*n.lhs, x, params);
    case Op::pow: {
      Jet2 base = eval_node(*n.lhs, x, params);
      if (auto k = integral_exponent(*n.rhs)) return pow_int(base, *k);
      return pow_real(base, eval_node(*n.rhs, x, params));
    }
    case Op::exp: return exp(eval_node(*n.lhs, x, params));
    case Op::log: return log(eval_node(*n.lhs, x, params));
    case Op::sin: return sin(eval_node(*n.lhs, x, params));
    case Op::cos: return cos(eval_node(*n.lhs, x, params));
    case Op::tan: return tan(eval_node(*n.lhs, x, params));
    case Op::sinh: return sinh(eval_node(*n.lhs, x, params));
    case Op::cosh: return cosh(eval_node(*n.lhs, x, params));
    case Op::tanh: return tanh(eval_node(*n.lhs, x, params));
    case Op::sqrt: return sqrt(eval_node(*n.lhs, x, params));
  }
  throw Error("corrupt expression node");
}

double value_node(const ExprNode& n, std::span<const double> x, std::span<const double> params) {
  switch (n.op) {
    case Op::literal: return n.literal;
    case Op::coordinate: return x[n.index];
    case Op::parameter: return params[n.index];
    case Op::add: return value_node(*n.lhs, x, params) + value_node(*n.rhs, x, params);
    case Op::sub: return value_node(*n.lhs, x, params) - value_node(*n.rhs, x, params);
    case Op::mul: return value_node(*n.lhs, x, params) * value_node(*n.rhs, x, params);
    case Op::div: {
      const double d = value_node(*n.rhs, x, params);
      if (d == 0.0) throw DomainError("division by zero");
      return value_node(*n.lhs, x, params) / d;
    }
    case Op::neg: return -value_node(*n.lhs, x, params);
    case Op::pow: {
      const double base = value_node(*n.lhs, x, params);
      if (auto k = integral_exponent(*n.rhs)) {
        if (*k < 0 && base == 0.0) throw DomainError("division by zero");
        return std::pow(base, static_cast<double>(*k));
      }
      if (!(base > 0.0)) throw DomainError("real exponent of nonpositive base");
      return std::exp(value_node(*n.rhs, x, params) * std::log(base));
    }
    case Op::exp: return std::exp(value_node(*n.lhs, x, params));
    case Op::log: {
      const double a = value_node(*n.lhs, x, params);
      if (!(a > 0.0)) throw DomainError("log of nonpositive argument");
      return std::log(a);
    }
    case Op::sin: return std::sin(value_node(*n.lhs, x, params));
    case Op::cos: return std::cos(value_node(*n.lhs, x, params));
    case Op::tan: return std::tan(value_node(*n.lhs, x, params));
    case Op::sinh: return std::sinh(value_node(*n.lhs, x, params));
    case Op::cosh: return std::cosh(value_node(*n.lhs, x, params));
    case Op::tanh: return std::tanh(value_node(*n.lhs, x, params));
    case Op::sqrt: {
      const double a = value_node(*n.lhs, x, params);
      if (!(a > 0.0)) throw DomainError("sqrt of nonpositive argument");
      return std::sqrt(a);
    }
  }
  throw Error("corrupt expression node");
}

const char* op_name(Op op) {
  switch (op) {
    case Op::add: return "Add";
    case Op::sub: return "Sub";
    case Op::mul: return "Mul";
    case Op::div: return "Div";
    case Op::neg: return "Neg";
    case Op::pow: return "Pow";
    case Op::exp: return "Exp";
    case Op::log: return "Log";
    case Op::sin: return "Sin";
    case Op::cos: return "Cos";
    case Op::tan: return "Tan";
    case Op::sinh: return "Sinh";
    case Op::cosh: return "Cosh";
    case Op::tanh: return "Tanh";
    case Op::sqrt: return "Sqrt";
    default: return "?";
  }
}

void print_node(const ExprNode& n, std::ostream& os) {
  switch (n.op) {
    case Op::literal: {
      std::ostringstream s;
      s.precision(17);
      s << n.literal;
      os << s.str();
      return;
    }
    case Op::coordinate:
    case Op::parameter: os << n.name; return;
    default: break;
  }
  os << op_name(n.op) << '(';
  print_node(*n.lhs, os);
  if (n.rhs) {
    os << ',';
    print_node(*n.rhs, os);
  }
  os << ')';
}

}  // namespace

Expr Expr::constant(double value, int coordinates) {
  return Expr(make_literal(value), coordinates, 0);
}

Expr parse(const std::string& text, const SymbolTable& symbols) {
  if (symbols.empty()) throw Error("parse requires a nonempty symbol table");
  Parser p(text, symbols);
  return Expr(p.parse(), symbols.coordinate_count(), symbols.parameter_count());
}

Jet2 eval2(const Expr& e, std::span<const double> point, std::span<const double> params) {
  if (static_cast<int>(point.size()) != e.coordinate_count())
    throw DimensionError("point dimension does not match the expression's chart");
  if (static_cast<int>(params.size()) < e.parameter_count())
    throw ParamError("not all parameters are bound");
  return eval_node(e.root(), point, params);
}

double eval(const Expr& e, std::span<const double> point, std::span<const double> params) {
  if (static_cast<int>(point.size()) != e.coordinate_count())
    throw DimensionError("point dimension does not match the expression's chart");
  if (static_cast<int>(params.size()) < e.parameter_count())
    throw ParamError("not all parameters are bound");
  return value_node(e.root(), point, params);
}

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print_node(e.root(), os);
  return os.str();
}

}  // namespace lorentz
