#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorentz/jet.hpp"

namespace lorentz {

/// Names visible to an expression: chart coordinates (differentiated) and
/// named parameters (held constant).
class SymbolTable {
 public:
  SymbolTable() = default;
  SymbolTable(std::vector<std::string> coordinates, std::vector<std::string> parameters = {});

  enum class Kind { coordinate, parameter };
  struct Entry {
    Kind kind;
    int index;
  };

  std::optional<Entry> lookup(const std::string& name) const;
  int coordinate_count() const { return static_cast<int>(coordinates_.size()); }
  int parameter_count() const { return static_cast<int>(parameters_.size()); }
  const std::vector<std::string>& coordinates() const { return coordinates_; }
  const std::vector<std::string>& parameters() const { return parameters_; }
  bool empty() const { return coordinates_.empty() && parameters_.empty(); }

  /// Parameter values in table order; every parameter must be bound.
  std::vector<double> bind(const std::map<std::string, double>& values) const;

 private:
  std::vector<std::string> coordinates_;
  std::vector<std::string> parameters_;
};

enum class Op {
  literal, coordinate, parameter,
  add, sub, mul, div, neg, pow,
  exp, log, sin, cos, tan, sinh, cosh, tanh, sqrt
};

struct ExprNode {
  Op op;
  double literal = 0.0;
  int index = -1;
  std::string name;  // symbol name for coordinate/parameter nodes
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

/// Immutable parsed scalar expression.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> root, int coordinates, int parameters)
      : root_(std::move(root)), coordinates_(coordinates), parameters_(parameters) {}

  const ExprNode& root() const { return *root_; }
  bool valid() const { return root_ != nullptr; }
  int coordinate_count() const { return coordinates_; }
  int parameter_count() const { return parameters_; }

  static Expr constant(double value, int coordinates);

 private:
  std::shared_ptr<const ExprNode> root_;
  int coordinates_ = 0;
  int parameters_ = 0;
};

/// Infix grammar: + - (left), * / (left), unary -, ^ (right), f(e), ( e ).
/// Throws SyntaxError or UnknownSymbol.
Expr parse(const std::string& text, const SymbolTable& symbols);

/// Value, gradient and Hessian with respect to the coordinates.
Jet2 eval2(const Expr& e, std::span<const double> point, std::span<const double> params = {});
inline Jet2 eval2(const Expr& e, const Vec& point, std::span<const double> params = {}) {
  return eval2(e, std::span<const double>(point.data(), static_cast<std::size_t>(point.size())), params);
}

/// Plain value (no derivatives).
double eval(const Expr& e, std::span<const double> point, std::span<const double> params = {});

/// Prefix form, e.g. Sub(Exp(Mul(2,t)),Pow(r,2)).
std::string to_string(const Expr& e);

}  // namespace lorentz
