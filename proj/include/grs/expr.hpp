#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "grs/jet.hpp"

// Symbolic scalar fields on a coordinate chart. An Expr is an immutable tree
// over named coordinates; metric components, Christoffel inputs and potentials
// are all Exprs, and every evaluation produces a truncated Taylor jet so the
// curvature stack downstream never touches finite differences.
//
// Grammar (parse_expr):
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | postfix
//   postfix  := atom ('^' exponent)?          single exponent, no chaining
//   atom     := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'
//   exponent := INT | '(' '-'? INT ('/' INT)? ')'
//   FUNC     := 'exp' | 'ln' | 'sqrt'
// Precedence: '^' > unary '-' > '*','/' > '+','-'; so -x^2 is -(x^2) and
// -a*b is (-a)*b. Exponents are rational constants kept in lowest terms.
// NUMBER literals start with a digit ("0.5", not ".5").
//
// Builders fold constants for the binary ops, unary minus and pow when every
// operand is a literal; x^0 folds to 1 and x^1 to x. exp/ln/sqrt of literals
// stay symbolic. The parser uses the same builders, so parse-print-parse is
// the identity on parseable trees.
//
// Three node kinds exist only for internal plumbing and cannot be parsed:
// quintic Hermite splines (numeric ODE trajectories), anchored numeric
// antiderivatives, and partial derivatives of a subexpression. They print in
// an angle-bracket diagnostic form that intentionally does not re-parse.

namespace grs {

enum class ExprKind {
  kConstant,
  kVariable,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kPow,
  kExp,
  kLn,
  kSqrt,
  kSpline,     // internal
  kAntideriv,  // internal
  kDeriv,      // internal
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Piecewise quintic Hermite interpolant: value, first and second derivative
// prescribed per knot. Second derivatives of the interpolant converge at
// O(h^4) and third at O(h^3) for smooth data, which keeps interpolated
// metrics within the curvature-stack tolerances.
struct HermiteCurve {
  std::vector<double> t;   // strictly increasing knots
  std::vector<double> v;   // values
  std::vector<double> d1;  // first derivatives
  std::vector<double> d2;  // second derivatives

  // Value and first three derivatives at x. Throws domain_error outside the
  // knot range (no extrapolation).
  std::array<double, 4> eval(double x) const;

 private:
  friend HermiteCurve make_hermite_curve(std::vector<double>, std::vector<double>,
                                         std::vector<double>, std::vector<double>);
  std::vector<std::array<double, 6>> seg;  // monomial coeffs per segment
};

HermiteCurve make_hermite_curve(std::vector<double> t, std::vector<double> v,
                                std::vector<double> d1, std::vector<double> d2);

// Numeric antiderivative F(x) = int_anchor^x f(s) ds of a univariate
// integrand. Cumulative checkpoints over [lo, hi] are computed once at
// construction with adaptive Simpson (1e-13 per segment), so point
// evaluations only integrate from the nearest checkpoint.
struct AntiderivCache {
  ExprPtr integrand;  // may reference only `var`
  int var = 0;
  double anchor = 0.0;
  std::vector<double> xs;
  std::vector<double> fs;  // F(xs[i])

  double value_at(double x) const;
};

struct Expr {
  ExprKind kind = ExprKind::kConstant;
  double cval = 0.0;               // kConstant
  int var = -1;                    // kVariable, kSpline, kAntideriv, kDeriv
  long long pnum = 1, pden = 1;    // kPow exponent, lowest terms, pden > 0
  ExprPtr a, b;                    // children
  std::shared_ptr<const HermiteCurve> curve;     // kSpline
  std::shared_ptr<const AntiderivCache> quad;    // kAntideriv
};

ExprPtr ex_const(double v);
ExprPtr ex_var(int i);
ExprPtr ex_add(ExprPtr a, ExprPtr b);
ExprPtr ex_sub(ExprPtr a, ExprPtr b);
ExprPtr ex_mul(ExprPtr a, ExprPtr b);
ExprPtr ex_div(ExprPtr a, ExprPtr b);
ExprPtr ex_neg(ExprPtr a);
ExprPtr ex_pow(ExprPtr a, long long num, long long den);
ExprPtr ex_exp(ExprPtr a);
ExprPtr ex_ln(ExprPtr a);
ExprPtr ex_sqrt(ExprPtr a);
ExprPtr ex_spline(std::shared_ptr<const HermiteCurve> c, int var);
// Precomputes checkpoints across [lo, hi]; integrand may reference only var.
ExprPtr ex_antideriv(ExprPtr integrand, int var, double anchor, double lo,
                     double hi);
// Folds to the zero constant when sub never mentions var; otherwise the
// node consumes one jet order, so order-3 consumers need sub itself to be
// derivative-free.
ExprPtr ex_deriv(ExprPtr sub, int var);

// Parse with the given coordinate names (variable i is coords[i]).
ExprPtr parse_expr(std::string_view src, const std::vector<std::string>& coords);

// Canonical form; minimal parentheses. Internal nodes print as diagnostics.
std::string print_expr(const ExprPtr& e, const std::vector<std::string>& coords);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Highest variable index referenced, or -1 for a closed expression.
int expr_max_var(const ExprPtr& e);

// Order-k jet of the expression at a point with n coordinates. Every
// referenced variable index must be < n.
Jet eval_jet(const ExprPtr& e, int n, int k, const double* point);

double eval_value(const ExprPtr& e, int n, const double* point);

}  // namespace grs
