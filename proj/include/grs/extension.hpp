#pragma once

#include "grs/affine.hpp"
#include "grs/frame.hpp"
#include "grs/soliton.hpp"

// Deformed Riemannian extensions: neutral-signature metrics on the cotangent
// bundle of an affine surface. Coordinates are ordered (x1, x2, x1p, x2p);
// indices 2 and 3 are the fiber directions and x_{ip} pairs with dx^i, so the
// metric blocks are g = [[C, I], [I, 0]] with
// C_ij = Phi_ij - 2 (x1p Gamma^1_ij + x2p Gamma^2_ij). The signature is
// always (2, 2).

namespace grs {

using SymTensor2 = std::array<std::array<ExprPtr, 2>, 2>;

// Symmetric deformation tensor on the base from component strings in
// (x1, x2).
SymTensor2 sym_tensor2(const std::string& t11, const std::string& t12,
                       const std::string& t22);
SymTensor2 zero_tensor2();

MetricField riemannian_extension(const AffineConnection2& D,
                                 const SymTensor2& Phi);
MetricField riemannian_extension(const AffineConnection2& D);

// f = x1p X1(x1,x2) + x2p X2(x1,x2) + h(x1,x2); every gradient soliton on an
// extension has a potential of this shape. X1, X2, h are base functions.
ExprPtr extension_potential(const ExprPtr& X1, const ExprPtr& X2,
                            const ExprPtr& h);

// Levi-Civita christoffels of the extension assembled in closed form from
// base data alone:
//   Gamma^k_ij          = D-Gamma^k_ij,
//   Gamma^{kp}_{ip, j}  = -D-Gamma^i_jk,     Gamma^{kp}_{i, jp} = -D-Gamma^j_ik,
//   Gamma^{kp}_{ij}     = sum_r x_{rp} (d_k G^r_ij - d_i G^r_jk - d_j G^r_ik
//                           + 2 sum_l G^r_kl G^l_ij)
//                         + (d_i Phi_jk + d_j Phi_ik - d_k Phi_ij) / 2
//                         - sum_l Phi_kl G^l_ij,
// every other component zero. Used as an oracle against the jet pipeline.
Ten3 extension_christoffel_formula(const AffineConnection2& D,
                                   const SymTensor2& Phi, const double* p);

// Ricci tensor of the extension in closed form: the base block equals
// ric^D + transpose(ric^D) expanded in base christoffels, every component
// touching a fiber index vanishes, and Phi drops out entirely.
Mat extension_ricci_formula(const AffineConnection2& D, const double* p);

// Nullity and parallelism of the fiber span {d_x1p, d_x2p} and the flatness
// of the curvature operator on it, for any analyzed 4d metric point. All
// residuals are relative.
struct WalkerReport {
  double null_residual = 0.0;       // g restricted to the span
  double parallel_residual = 0.0;   // christoffel components leaving it
  double curvature_residual = 0.0;  // R(., span) span
};

WalkerReport walker_check(const CurvatureData& cd);

// The standing structural facts about one analyzed extension point, cheap
// enough for large random batteries. Every residual is relative to the
// natural scale of the quantities entering it.
struct ExtensionBattery {
  double tau = 0.0;            // scalar curvature
  double ric_sq = 0.0;         // square of the ricci operator
  double ric_rows = 0.0;       // base rows of the ricci operator (image must
                               // be vertical)
  WalkerReport walker;
  double inverse_block = 0.0;  // ginv against [[0, I], [I, -C]]
  double dual_null = 0.0;      // vanishing duality block, mixed block folded in
  double dual_live = 0.0;      // surviving block sup-norm, for the record
  int dual_side = 0;           // +1 minus block vanishes, -1 plus block, 0 W=0
};

ExtensionBattery extension_battery(const CurvatureData& cd);

// The extension with potential pulled back from the base is a steady
// gradient soliton exactly when (D, h) solves the affine equation; the two
// residual tensors agree component by component whether or not they vanish.
struct EquivalenceReport {
  double metric_residual = 0.0;  // max |Hes_f + ric| over all 4d components
  double affine_residual = 0.0;  // max |Hes^D_h + ric^D + ric^D T| on the base
  double block_mismatch = 0.0;   // base block against the affine tensor
  double offblock = 0.0;         // 4d components outside the base block
  double scale = 1.0;
};

EquivalenceReport affine_extension_equivalence(const AffineConnection2& D,
                                               const SymTensor2& Phi,
                                               const ExprPtr& h,
                                               const double* p);

// How the weyl tensor of an extension sees the fiber: at a fixed base point
// W(d1,d2,d1,d2) is an affine function of (x1p, x2p) whose slopes are
// covariant-derivative combinations of the base ricci,
//   slope_x1p = (nabla_1 ric)(d2,d2) - (nabla_2 ric)(d2,d1),
//   slope_x2p = (nabla_2 ric)(d1,d1) - (nabla_1 ric)(d1,d2),
// and W(d1,d2,d1,d1p) = W(d1,d2,d2,d2p) = (ric_12 - ric_21)/2. The fit runs
// over seven fiber samples; fit_residual is their worst deviation from the
// fitted affine function.
struct WeylStructureReport {
  double antisym_residual = 0.0;
  double slope_x1p = 0.0, slope_x1p_want = 0.0;
  double slope_x2p = 0.0, slope_x2p_want = 0.0;
  double intercept = 0.0;  // the Phi-dependent part, reported not checked
  double fit_residual = 0.0;
  double scale = 1.0;
};

WeylStructureReport extension_weyl_structure(const AffineConnection2& D,
                                             const SymTensor2& Phi,
                                             const double* pbase);

// Soliton analysis for the potential f = x1p + pi*h. The mixed hessian block
// is Hes(d_i, d_jp) = Gamma^j_{i1}; matching it against lambda g(d_i, d_jp)
// pins Gamma^1_11 = Gamma^2_12 = lambda and Gamma^2_11 = Gamma^1_12 = 0.
// lambda is read off the connection at the base point and the full equation
// is then evaluated at that lambda.
struct PotentialConstraints {
  double lambda = 0.0;
  double mixed_identity = 0.0;       // Hes(d_i, d_jp) against Gamma^j_{i1}
  double constraint_residual = 0.0;  // |G^2_11|, |G^1_12|, |G^1_11 - G^2_12|
  double soliton_residual = 0.0;     // max |Hes_f + ric - lambda g|
  double scale = 1.0;
};

PotentialConstraints steady_potential_constraints(const AffineConnection2& D,
                                                  const SymTensor2& Phi,
                                                  const ExprPtr& h,
                                                  const double* p);

}  // namespace grs
