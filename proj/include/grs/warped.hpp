#pragma once

#include <vector>

#include "grs/curvature.hpp"

// Warped products g = eps dt^2 + phi(t)^2 g_N over a 3d Einstein fiber with
// ric_N = 2c g_N, carrying a potential f(t). The soliton equation reduces to
//   f'' = eps lambda + 3 phi''/phi,
//   phi phi' f' = eps lambda phi^2 - 2 eps c + phi phi'' + 2 phi'^2,
// and their compatibility condition, solved for phi''':
//   phi''' = (2 phi'^4 - 2 c eps (phi'^2 + phi phi'') + phi phi'^2 phi''
//             + eps lambda phi^3 phi'' + (phi phi'')^2) / (phi^2 phi').

namespace grs {

// Fiber of constant sectional curvature c: diagonal components
// s_a / (1 + (c/4) sum_e s_e y_e^2)^2 with s_a = +-1, so the signature is
// given by the signs and ric = 2c g holds in every signature.
struct FiberModel {
  int s[3] = {1, 1, 1};
  double c = 0.0;
};

FiberModel fiber_model(int s1, int s2, int s3, double c);

// Standalone 3d chart (y1, y2, y3) for direct curvature checks.
MetricField fiber_metric(const FiberModel& fm);

// One integration node. res9 is the drift between the integrated slope f'
// and its algebraic value from the first order equation; res10 is the
// relative imbalance of that equation evaluated with the integrated slope.
struct WarpSample {
  double t = 0.0;
  double phi = 0.0, dphi = 0.0, ddphi = 0.0;
  double f = 0.0;
  double res9 = 0.0, res10 = 0.0;
};

struct WarpTrajectory {
  double eps = 1.0, lambda = 0.0, c = 0.0;
  double step = 0.0;
  std::vector<WarpSample> rows;
};

// Classical RK4 on (phi, phi', phi'', f, f'); the slope equation supplies
// f' algebraically at every stage and f'' integrates the trace equation
// from f'(t0) = f'_alg(t0), so res9 contracts at fourth order in the step.
// Throws degenerate_error when phi or phi' vanishes along the way or the
// state stops being finite, and domain_error on bad eps, step, or interval.
WarpTrajectory integrate_phi(double eps, double lambda, double c, double phi0,
                             double dphi0, double ddphi0, double t0, double t1,
                             double step);

// Keeps the first row, then every row at least spacing after the last kept
// one, and always the final row. Spline knots a few hundredths apart keep
// the interpolant's second and third derivatives clean; knots at the raw
// integration step lose them to roundoff amplified by 1/step^2 and 1/step^3.
WarpTrajectory thin_trajectory(const WarpTrajectory& traj, double spacing);

// Quintic Hermite interpolation of the trajectory: exact values and first
// two derivatives at every node for both phi and f.
MetricField assemble_warped_metric(const WarpTrajectory& traj,
                                   const FiberModel& fm);
ExprPtr warped_potential(const WarpTrajectory& traj);

// g = 2 du dv + a(u) (x1^2 + x2^2) du^2 + dx1^2 + dx2^2 in (u, v, x1, x2).
// Lorentzian, ric_uu = -2a the only curvature component, weyl flat. The
// soliton equation with f = f(u) forces lambda = 0 and f'' = 2a; f is the
// double antiderivative of 2a anchored at f(u0) = f'(u0) = 0.
struct PlaneWave {
  MetricField g;
  ExprPtr f;
  double lambda = 0.0;
};

PlaneWave plane_wave(const ExprPtr& a, double u0, double ulo, double uhi);

}  // namespace grs
