#pragma once

#include <array>
#include <cstdint>

#include "grs/errors.hpp"

// Truncated multivariate Taylor arithmetic ("jets") in 1..4 variables at
// orders 0..3. A Jet stores the Taylor COEFFICIENTS of a function at a point,
// c_alpha = (d^alpha f)(p) / alpha!, laid out in graded lexicographic order:
// multi-indices sorted by total degree, and within a degree by descending
// exponent tuple, so for n = 2, k = 2 the layout is
//   (0,0) (1,0) (0,1) (2,0) (1,1) (0,2).
// The order-k table is a prefix of the order-3 table for the same n. This
// layout is part of the type's contract and is frozen by tests.

namespace grs {

inline constexpr int kJetMaxVars = 4;
inline constexpr int kJetMaxOrder = 3;
inline constexpr int kJetMaxCoeffs = 35;  // C(4+3,3)

// Number of coefficients of an order-k jet in n variables, C(n+k, k).
int jet_coeff_count(int n, int k);

// Flat index of a multi-index in the graded-lex layout for n variables, or -1
// if the multi-index has total degree > 3 or a negative entry.
int jet_index_of(int n, const std::array<int, 4>& alpha);

// The multi-index at a given flat position.
const std::array<int, 4>& jet_multi_index(int n, int pos);

struct Jet {
  int n = 1;  // number of variables, 1..4
  int k = 0;  // truncation order, 0..3
  std::array<double, kJetMaxCoeffs> c{};

  static Jet make(int n, int k);  // zero jet
  static Jet constant(int n, int k, double v);
  // The coordinate function x_i at x_i = x: value x, first-order coefficient 1.
  static Jet variable(int n, int k, int i, double x);

  int size() const { return jet_coeff_count(n, k); }
  double value() const { return c[0]; }

  // Taylor coefficient for a multi-index (zero if above the truncation order).
  double coeff(const std::array<int, 4>& alpha) const;
  // Partial derivative d^alpha f = coeff * alpha!.
  double partial(const std::array<int, 4>& alpha) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);  // truncated product
Jet operator/(const Jet& a, const Jet& b);
Jet operator*(double s, const Jet& a);
Jet operator*(const Jet& a, double s);
Jet operator+(const Jet& a, double s);
Jet operator+(double s, const Jet& a);
Jet operator-(const Jet& a, double s);
Jet operator-(double s, const Jet& a);

// Copy truncated to a lower order (k <= a.k).
Jet truncated(const Jet& a, int k);

// d/dx_i as an order (k-1) jet; requires k >= 1.
Jet jet_derivative(const Jet& a, int i);

// Analytic functions via univariate composition on the nilpotent part.
// Domain errors: ln and sqrt need value > 0, reciprocal needs |value| >=
// 1e-300. pow with den == 1 is an exact integer power (any base, negative
// exponents through the reciprocal); den > 1 needs value > 0.
Jet jet_exp(const Jet& a);
Jet jet_ln(const Jet& a);
Jet jet_sqrt(const Jet& a);
Jet jet_reciprocal(const Jet& a);
Jet jet_pow(const Jet& a, long long num, long long den);

}  // namespace grs
