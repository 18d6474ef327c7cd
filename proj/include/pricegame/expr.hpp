#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pricegame/util.hpp"

namespace pricegame {

/// Expression tree over the fixed operator basis
///   +  -  *  /  ^  min(...)  max(...)  pwl(arg, x0,y0, x1,y1, ...)
/// with decimal constants and named variables. Instances supply their
/// payoff terms, price rules and cost curves as expressions, so a game
/// is data rather than code.
///
/// pwl interpolates linearly between breakpoints and clamps outside the
/// first/last breakpoint. Breakpoint abscissae must be strictly increasing.
///
/// Immutable; copies share structure.
class Expr {
 public:
  struct Node;

  Expr() = default;

  /// Parse from source text. Errors carry a character position.
  static Expr parse(std::string_view src);

  static Expr constant(double v);
  static Expr variable(std::string name);

  bool valid() const { return root_ != nullptr; }

  /// Original source text when parsed; synthesized form otherwise.
  const std::string& source() const { return src_; }

  /// Sorted unique variable names referenced by the tree.
  std::vector<std::string> variables() const;

  /// Exact derivative with respect to `var`, when the tree is smooth
  /// (no min/max/pwl on a path touching `var`, exponents constant).
  /// nullopt means "use a finite difference instead".
  std::optional<Expr> derivative(std::string_view var) const;

  /// Evaluate with an explicit environment; slow path for tests/tools.
  double eval(std::span<const std::string> names, std::span<const double> values) const;

  class Bound;
  /// Compile against a fixed variable layout for fast repeated evaluation.
  /// Unknown variable names raise UsageError.
  Bound bind(std::span<const std::string> names) const;

 private:
  std::shared_ptr<const Node> root_;
  std::string src_;

  Expr(std::shared_ptr<const Node> root, std::string src);
  friend struct ExprBuilder;
};

/// Postfix program over a fixed slot layout.
class Expr::Bound {
 public:
  double eval(std::span<const double> slots) const;  // throws EvalError on non-finite result
  double eval_raw(std::span<const double> slots) const;
  const std::string& source() const { return src_; }

 private:
  friend class Expr;
  enum class Op : std::uint8_t { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Min, Max, Pwl };
  struct Instr {
    Op op;
    int a = 0;  // slot, argc, or table index
    double v = 0.0;
  };
  std::vector<Instr> prog_;
  std::vector<std::vector<std::pair<double, double>>> tables_;
  std::size_t depth_ = 0;
  std::string src_;
};

/// Linear interpolation over (x, y) breakpoints, clamped at the ends.
/// Shared by pwl expression nodes and the load-duration curve.
double pwl_eval(std::span<const std::pair<double, double>> pts, double x);

}  // namespace pricegame
