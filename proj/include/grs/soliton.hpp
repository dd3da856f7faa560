#pragma once

#include <array>
#include <vector>

#include "grs/frame.hpp"

// Gradient Ricci soliton checks for the equation Hes_f + ric = lambda g.
// lambda = 0 is the steady case, lambda > 0 shrinking, lambda < 0 expanding.

namespace grs {

struct SolitonResidual {
  double residual = 0.0;  // max |Hes_f + ric - lambda g| componentwise
  double scale = 1.0;     // max(1, |Hes_f|, |ric|, |lambda| |g|)
};

SolitonResidual soliton_residual(const CurvatureData& cd, const ExprPtr& f,
                                 double lambda);

enum class GradientClass { zero, isotropic, spacelike, timelike };

struct GradientInfo {
  GradientClass cls = GradientClass::zero;
  Vec grad;
  double norm2 = 0.0;          // g(grad f, grad f)
  double max_component = 0.0;  // largest |(grad f)^i|
};

// Causal character of grad f at the analyzed point. Zero means every
// component is below 1e-10 relative to the inverse metric scale; isotropic
// means |g(grad f, grad f)| is below 1e-8 relative to the pairing scale.
GradientInfo classify_gradient(const CurvatureData& cd, const ExprPtr& f);

// Residuals of the three pointwise identities every gradient soliton
// satisfies, maximized over the given points:
//   grad_tau:               d tau = 2 ric(grad f, .)
//   first_integral:         tau + |grad f|^2 - 2 lambda f is constant
//                           (compared against its value at pts[0])
//   curvature_contraction:  R4(x, y, z, grad f) = (nabla_y ric)(x, z)
//                                               - (nabla_x ric)(y, z)
struct SolitonIdentityResiduals {
  double grad_tau = 0.0;
  double first_integral = 0.0;
  double curvature_contraction = 0.0;
  double scale = 1.0;
};

SolitonIdentityResiduals soliton_identities(
    const MetricField& m, const ExprPtr& f, double lambda,
    const std::vector<std::array<double, 4>>& pts);

// Two-step nilpotency of the ricci operator Ric^i_j = g^{ik} ric_{kj}.
struct NilpotencyCheck {
  double op_norm = 0.0;     // max |Ric^i_j|
  double op_sq_norm = 0.0;  // max |(Ric^2)^i_j|
};

NilpotencyCheck ricci_nilpotent(const CurvatureData& cd);

// Null frame adapted to an isotropic potential gradient: the only nonzero
// pairings are g(grad f, v) = g(u, w) = 1. Exists when grad f is null and
// nonzero and its complement carries a second hyperbolic pair, so the metric
// must have neutral signature. Components of a vector y in this frame follow
// from the dual pairings:
//   y = g(y,v) grad f + g(y,w) u + g(y,grad f) v + g(y,u) w.
// Between the two null directions complementary to span{grad f, v}, u is the
// one on which the ricci operator is smaller; for the rank-two isotropic
// solitons this picks the direction the ricci tensor annihilates.
struct NullFrameB {
  int d = 0;
  double gradf[4] = {};
  double u[4] = {};
  double v[4] = {};
  double w[4] = {};
};

NullFrameB null_frame_b(const CurvatureData& cd, const ExprPtr& f);

// Ricci components in the frame (grad f, u, v, w). For the isotropic
// extension solitons the grad f and u rows and columns vanish and the
// nontrivial block is a = ric(v,v), b = ric(w,w), c = ric(v,w).
struct NullFrameRicciShape {
  double rho[4][4] = {};  // index order: grad f, u, v, w
  double residual = 0.0;  // max |entry| in the grad f and u rows/columns
  double a = 0.0, b = 0.0, c = 0.0;
};

NullFrameRicciShape nullframe_ricci_shape(const CurvatureData& cd,
                                          const NullFrameB& nf);

// Orthonormal frame whose first vector is grad f / sqrt|g(grad f, grad f)|,
// with the hessian of f and the ricci tensor expressed in it. Requires a
// spacelike or timelike gradient.
struct EigenFrame {
  Frame frame;
  double hes_frame[4][4] = {};
  double ric_frame[4][4] = {};
};

EigenFrame nonisotropic_eigenstructure(const CurvatureData& cd,
                                       const ExprPtr& f);

}  // namespace grs
