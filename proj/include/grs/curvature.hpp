#pragma once

#include "grs/metric.hpp"

// The curvature stack. Everything is produced from order-3 jets of the metric
// components at a point; no finite differences anywhere.
//
// Sign conventions, fixed once for the whole library:
//   * curvature operator R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z
//     - nabla_[x,y] z, components R^l_{ijk} = d_i Gamma^l_{jk}
//     - d_j Gamma^l_{ik} + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik};
//   * ricci(y,z) = trace(x -> R(x,y)z), which is POSITIVE on round spheres;
//   * scalar curvature tau = g^{jk} rho_{jk} (a round 2-sphere of radius 1
//     has tau = 2);
//   * riemann() returns the (0,4) tensor R4(x,y,z,v) = -g(R(x,y)z, v). The
//     flip makes the Weyl formula below annihilate constant-curvature metrics
//     and gives the soliton identities integer coefficients;
//   * weyl (dim 4 only):
//       W = R4 + tau/6 (g(x,z)g(y,v) - g(y,z)g(x,v))
//              - 1/2 (rho(x,z)g(y,v) - rho(y,z)g(x,v)
//                     + rho(y,v)g(x,z) - rho(x,v)g(y,z));
//   * cotton C(x,y,z) = (nabla_x rho)(y,z) - (nabla_y rho)(x,z)
//              - 1/6 (x(tau) g(y,z) - y(tau) g(x,z)).
//
// With these signs g^{lm} (nabla_l W)_{ijkm} = -1/2 C_{ijk}; the R4 flip
// moves the usual +1/2 to -1/2 because the cotton tensor does not see it.

namespace grs {

struct CurvatureData {
  int d = 0;
  double p[4] = {};

  Jet gj[4][4];      // metric, order 3
  Jet gi[4][4];      // inverse metric, order 2
  Jet gam[4][4][4];  // Gamma^k_{ij} as gam[k][i][j], order 2
  Jet ricj[4][4];    // ricci, order 1
  Jet tauj;          // scalar curvature, order 1

  double g[4][4] = {};
  double ginv[4][4] = {};
  double det = 0.0;
  double Gam[4][4][4] = {};       // values
  double dGam[4][4][4][4] = {};   // dGam[m][k][i][j] = d_m Gamma^k_{ij}
  double R[4][4][4][4] = {};      // R^l_{ijk} as R[l][i][j][k]
  double R4[4][4][4][4] = {};     // (0,4), R4[i][j][k][l]
  double Ric[4][4] = {};
  double tau = 0.0;
  double dRic[4][4][4] = {};      // d_m rho_{jk}
  double NRic[4][4][4] = {};      // (nabla_m rho)_{jk}
  double dtau[4] = {};
  double W[4][4][4][4] = {};      // Weyl, dim 4 only (zero otherwise)
};

// Evaluates the full stack. Throws degenerate_error if |det g| at the point
// is below 1e-12 * max|g_ij|^d.
CurvatureData analyze(const MetricField& m, const double* p);

struct MetricValue {
  Mat g;
  Mat ginv;
  double det = 0.0;
  double inverse_residual = 0.0;  // max |g.ginv - id|
};

MetricValue metric_at(const MetricField& m, const double* p);
Ten3 christoffel(const MetricField& m, const double* p);  // t[k][i][j]
Ten4 riemann(const MetricField& m, const double* p);      // (0,4)
Mat ricci(const MetricField& m, const double* p);
Mat ricci_operator(const MetricField& m, const double* p);  // m[i][j] = Ric^i_j
double scalar_curvature(const MetricField& m, const double* p);
Ten4 weyl(const MetricField& m, const double* p);
Ten3 cotton(const MetricField& m, const double* p);

// Scalar-field helpers against a fixed metric.
Vec gradient(const CurvatureData& cd, const ExprPtr& f);
double grad_norm2(const CurvatureData& cd, const ExprPtr& f);
Mat hessian(const CurvatureData& cd, const ExprPtr& f);

// Pointwise pairing g(x, y) of two coordinate-component vectors.
double pair_g(const CurvatureData& cd, const double* x, const double* y);

// Largest |entry| helpers used for relative tolerances.
double max_abs(const Mat& a);
double max_abs(const Ten3& a);
double max_abs(const Ten4& a);

}  // namespace grs
