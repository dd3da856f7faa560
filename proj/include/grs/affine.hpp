#pragma once

#include <array>
#include <string>
#include <vector>

#include "grs/curvature.hpp"

// Torsion-free affine connections on 2-dimensional charts and the affine
// gradient soliton equation Hes_h + 2 sym(ric) = 0. The ricci tensor of a
// connection uses the same trace convention as the metric stack,
//   ric_{jk} = d_i Gamma^i_{jk} - d_j Gamma^i_{ik}
//            + Gamma^i_{il} Gamma^l_{jk} - Gamma^i_{jl} Gamma^l_{ik},
// and is not symmetric in general.

namespace grs {

struct AffineConnection2 {
  std::vector<std::string> coords;
  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> Gam{};  // Gam[k][i][j]
};

// Sparse constructor: unlisted components are zero and the (j, i) mirror of
// every listed (i, j) is filled automatically.
struct GammaEntry {
  int k = 0, i = 0, j = 0;
  std::string expr;
};

AffineConnection2 make_affine(std::vector<std::string> coords,
                              const std::vector<GammaEntry>& entries);

// Same, with ready-made component expressions (symmetry in (i,j) required).
AffineConnection2 make_affine(
    std::vector<std::string> coords,
    const std::array<std::array<std::array<ExprPtr, 2>, 2>, 2>& comps);

struct AffineData {
  double p[2] = {};
  Jet gamj[2][2][2];             // order 2
  double Gam[2][2][2] = {};
  double dGam[2][2][2][2] = {};  // dGam[m][k][i][j]
  Jet ricj[2][2];                // order 1
  double Ric[2][2] = {};
  double dRic[2][2][2] = {};     // coordinate derivative
  double NRic[2][2][2] = {};     // covariant derivative (nabla_m ric)_{jk}
  double R[2][2][2][2] = {};     // R^l_{ijk}
};

AffineData affine_analyze(const AffineConnection2& D, const double* p);

// Hes_h(i,j) = d2 h / dx_i dx_j - Gamma^k_{ij} d h / dx_k, returned in a
// 2-dimensional Mat.
Mat affine_hessian(const AffineConnection2& D, const ExprPtr& h,
                   const double* p);

struct AffineSolitonResidual {
  double residual = 0.0;  // max |Hes_h + ric + ric^T|
  double scale = 1.0;
};

AffineSolitonResidual affine_soliton_residual(const AffineConnection2& D,
                                              const ExprPtr& h,
                                              const double* p);

struct RicciRankInfo {
  int rank = 0;
  double det = 0.0;
  double max_entry = 0.0;
};

// Rank with relative thresholds: 0 when max_entry < 1e-10, otherwise 2 when
// |det| > 1e-8 max_entry^2, otherwise 1.
RicciRankInfo ricci_rank(const AffineData& ad);

// Least-squares fit of (nabla_k ric) = omega_k ric at one point. A recurrent
// ricci tensor gives residual 0 and the recurrence 1-form omega.
struct RecurrenceFit {
  double omega[2] = {};
  double residual = 0.0;  // max |(nabla_k ric)_{ij} - omega_k ric_{ij}|
  double scale = 1.0;
};

RecurrenceFit recurrence_fit(const AffineData& ad);

// A surface connection is projectively flat iff its ricci tensor is
// symmetric and (nabla_x ric)(y,z) = (nabla_y ric)(x,z); both residuals.
struct ProjectiveFlatness {
  double ricci_antisym = 0.0;
  double nabla_sym = 0.0;
  double scale = 1.0;
};

ProjectiveFlatness projective_flatness_residuals(const AffineData& ad);

// ---- soliton example builders ----

struct AffineSolitonExample {
  AffineConnection2 D;
  ExprPtr h;
};

// Constant christoffels in the rank-one normal form gamma^1_{12} =
// gamma^1_{22} = 0. Ricci is diag(g111 g212 + g211 g222 - g212^2, 0); the
// potential solves h'' - g111 h' = -2 ric_11 in x1 alone.
AffineSolitonExample type_a_soliton(double g111, double g211, double g212,
                                    double g222);

// Constant christoffels with gamma^1_{..} = 0: parallel ricci tensor,
// h = -ric_11 x1^2.
AffineSolitonExample type_a_locally_symmetric(double g211, double g212,
                                              double g222);

// Gamma^1_11 = g111/x1, Gamma^2_12 = g212/x1 on x1 > 0. Ricci is
// diag(K, 0)/x1^2 with K = g212 (1 + g111 - g212), recurrent with
// omega = -(2/x1)(1 + g111) dx1, and h = (2K/(1+g111)) ln x1.
// Requires g111 != -1.
AffineSolitonExample type_b_case_i(double g111, double g212);

// The projectively flat branch with degenerate symmetric ricci
//   ric = -(2/x1^2) [[g112^2/g122, g112], [g112, g122]],
// where g112 = sqrt(g122 (g111 + 3)), g212 = -g111 - 5, g222 = -g112,
// g211 = -g112^3/g122^2 - g112/g122. No soliton potential exists; the
// equation forces grad h = 0 and then contradicts its (2,2) component.
AffineConnection2 type_b_case_ii(double g111, double g122);

// Pointwise linear solve of the closed soliton system for grad h on the
// case (ii) connection: unknowns (d1 h, d2 h, d1 d2 h, d2 d2 h), equations
// the (1,2) and (2,2) soliton components, the ricci-degeneracy relation
// g122 d1 h = g112 d2 h, and its x2-derivative. The solve forces
// grad_h = 0; inconsistency is the d2 d2 h the (2,2) component would then
// still demand, which a vanishing gradient cannot supply.
struct CaseIIForcedGradient {
  double grad_h[2] = {};
  double inconsistency = 0.0;
};

CaseIIForcedGradient type_b_case_ii_forced_gradient(double g111, double g122,
                                                    const double* p);

// Gamma^1_11 = -1/x1, Gamma^1_22 = g122/x1: ricci = diag(0, -2 g122)/x1^2 is
// symmetric and recurrent with omega = -(2/x1) dx1, the potential is
// h = -4 ln x1 + x2, and the connection is not projectively flat.
AffineSolitonExample type_b_nonprojflat(double g122);

// Gamma^1_11 = a/x1, Gamma^2_12 = b/x1, Gamma^1_22 = c/x1 with
// a = b + sign sqrt(1+2b): ricci = diag(b(1+a-b), c(a-b-1))/x1^2 has rank
// two and h = 2(a-b-1) ln x1. ricci_metric is the closed-form ricci read as
// a 2-dimensional metric; its scalar curvature is (1 - sign sqrt(1+2b))/b^2.
struct RankTwoExample {
  AffineConnection2 D;
  ExprPtr h;
  double a = 0.0, b = 0.0, c = 0.0;
  MetricField ricci_metric;
  double tau_expected = 0.0;
};

RankTwoExample rank_two_family(double b, double c, int sign);

// Family with parallel kernel span{d1}: Gamma^1_12 = G(x2),
// Gamma^1_22 = (2 alpha/kappa) exp(kappa x1 e^Xi / 2 - Xi) + beta
//              + x1 (G^2 + G'), where Xi' = G, Xi(0) = 0. The potential is
// h = t(x2) + x1 kappa e^Xi with t'' = beta kappa e^Xi, t(0) = t'(0) = 0.
// G must depend on x2 only; [x2lo, x2hi] bounds the chart in x2.
AffineSolitonExample opozda_family(const ExprPtr& g112_of_x2, double alpha,
                                   double beta, double kappa, double x2lo,
                                   double x2hi);

}  // namespace grs
