#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "endcert/contraction.hpp"
#include "endcert/metric.hpp"

namespace endcert {
namespace dsl {

/// Arithmetic expression over the single variable x.
/// Grammar: x, numeric literals, + - * /, unary minus, min, max, abs,
/// parentheses; left-associative, standard precedence.
struct Expr {
  enum class Op { Num, Var, Add, Sub, Mul, Div, Neg, Min, Max, Abs };
  Op op = Op::Num;
  double value = 0;
  std::shared_ptr<const Expr> a, b;
};
using ExprPtr = std::shared_ptr<const Expr>;

struct Guard {
  enum class Cmp { Always, Eq, Ne, Lt, Le, Gt, Ge };
  Cmp cmp = Cmp::Always;
  ExprPtr lhs, rhs;  // unset for Always
};

/// One `guard -> set` clause. The image is an interval [lo,hi] or a
/// finite set {e1, e2, ...}; a one-element set evaluates to the
/// canonical degenerate interval.
struct Clause {
  Guard guard;
  bool is_finite = false;
  ExprPtr lo, hi;                 // interval bounds
  std::vector<ExprPtr> elements;  // finite-set elements
};

/// Piecewise interval-valued map on the real line with left-to-right
/// first-match clause semantics. An `otherwise` clause, if present,
/// must be last.
struct MapDef {
  std::vector<Clause> clauses;
};

struct ParseError {
  int line = 1;
  int column = 1;
  std::string message;
  std::string token;
};

using ParseResult = std::variant<MapDef, ParseError>;

/// Parses `clause (";" clause)*` where
/// clause := ("if" pred "->" | "otherwise ->") setexpr. Deterministic;
/// malformed input yields a positioned ParseError.
ParseResult parse(std::string_view text);

/// Evaluation failure: no clause matched, empty interval, non-finite
/// value or division by zero. Carries the offending x.
class MapEvalError : public std::runtime_error {
 public:
  MapEvalError(double x, const std::string& msg);
  double x() const { return x_; }

 private:
  double x_;
};

/// First matching clause's image at x. Guard comparisons are exact
/// double comparisons (x == 1 matches only the stored 1.0). Interval
/// images require lo <= hi after evaluation.
BoundedSet eval_map(const MapDef& def, double x);

/// Canonical source text; parse(print(d)) reproduces d.
std::string print(const MapDef& def);

/// Coverage probe: first sampled x in [lo,hi] not matched by any
/// clause, if one exists. n_samples includes both endpoints.
std::optional<double> first_uncovered(const MapDef& def, double lo, double hi, int n_samples);

/// Adapter for the certifier/solver. Points must be 1-d.
MultiMap to_multimap(MapDef def);

}  // namespace dsl
}  // namespace endcert
