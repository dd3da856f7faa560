#include "grs/warped.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "grs/errors.hpp"

namespace grs {

namespace {

// Diagonal fiber component as an expression, with the fiber coordinates
// starting at variable index offset.
ExprPtr fiber_comp(const FiberModel& fm, int a, int offset) {
  ExprPtr q = ex_const(0.0);
  for (int e = 0; e < 3; ++e) {
    ExprPtr ye = ex_var(offset + e);
    q = ex_add(std::move(q),
               ex_mul(ex_const(static_cast<double>(fm.s[e])),
                      ex_mul(ye, ex_var(offset + e))));
  }
  ExprPtr den = ex_add(ex_const(1.0), ex_mul(ex_const(fm.c / 4.0), std::move(q)));
  return ex_mul(ex_const(static_cast<double>(fm.s[a])),
                ex_pow(std::move(den), -2, 1));
}

struct WarpState {
  double phi, dphi, ddphi, f, slope;
};

double slope_alg(double eps, double lambda, double c, double phi, double dphi,
                 double ddphi) {
  return (eps * lambda * phi * phi - 2.0 * eps * c + phi * ddphi +
          2.0 * dphi * dphi) /
         (phi * dphi);
}

WarpState derive(double eps, double lambda, double c, const WarpState& y) {
  if (std::fabs(y.phi) < 1e-12 || std::fabs(y.dphi) < 1e-12)
    throw degenerate_error(
        "warping function or its derivative vanishes along the trajectory");
  double p = y.phi, q = y.dphi, r = y.ddphi;
  double dddphi = (2.0 * q * q * q * q - 2.0 * c * eps * (q * q + p * r) +
                   p * q * q * r + eps * lambda * p * p * p * r +
                   (p * r) * (p * r)) /
                  (p * p * q);
  WarpState d;
  d.phi = q;
  d.dphi = r;
  d.ddphi = dddphi;
  d.f = slope_alg(eps, lambda, c, p, q, r);
  d.slope = eps * lambda + 3.0 * r / p;
  return d;
}

WarpState axpy(const WarpState& y, double a, const WarpState& d) {
  return {y.phi + a * d.phi, y.dphi + a * d.dphi, y.ddphi + a * d.ddphi,
          y.f + a * d.f, y.slope + a * d.slope};
}

WarpSample record(double eps, double lambda, double c, double t,
                  const WarpState& y) {
  WarpSample s;
  s.t = t;
  s.phi = y.phi;
  s.dphi = y.dphi;
  s.ddphi = y.ddphi;
  s.f = y.f;
  double alg = slope_alg(eps, lambda, c, y.phi, y.dphi, y.ddphi);
  s.res9 = std::fabs(y.slope - alg);
  double tq[4] = {eps * lambda * y.phi * y.phi, -2.0 * eps * c,
                  y.phi * y.ddphi, 2.0 * y.dphi * y.dphi};
  double bal = y.phi * y.dphi * y.slope - tq[0] - tq[1] - tq[2] - tq[3];
  double sc = 1.0;
  for (double v : tq) sc = std::max(sc, std::fabs(v));
  s.res10 = std::fabs(bal) / sc;
  return s;
}

}  // namespace

FiberModel fiber_model(int s1, int s2, int s3, double c) {
  FiberModel fm;
  fm.s[0] = s1;
  fm.s[1] = s2;
  fm.s[2] = s3;
  fm.c = c;
  for (int a = 0; a < 3; ++a)
    if (fm.s[a] != 1 && fm.s[a] != -1)
      throw domain_error("fiber signs must be +1 or -1");
  return fm;
}

MetricField fiber_metric(const FiberModel& fm) {
  std::vector<std::vector<ExprPtr>> comps(3, std::vector<ExprPtr>(3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      comps[a][b] = (a == b) ? fiber_comp(fm, a, 0) : ex_const(0.0);
  return make_metric({"y1", "y2", "y3"}, comps);
}

WarpTrajectory integrate_phi(double eps, double lambda, double c, double phi0,
                             double dphi0, double ddphi0, double t0, double t1,
                             double step) {
  if (eps != 1.0 && eps != -1.0) throw domain_error("eps must be +1 or -1");
  if (!(step > 0.0)) throw domain_error("step must be positive");
  if (!(t1 > t0)) throw domain_error("empty integration interval");
  if (std::fabs(phi0) < 1e-12 || std::fabs(dphi0) < 1e-12)
    throw degenerate_error(
        "warping function or its derivative vanishes along the trajectory");

  WarpTrajectory out;
  out.eps = eps;
  out.lambda = lambda;
  out.c = c;
  out.step = step;

  WarpState y{phi0, dphi0, ddphi0, 0.0,
              slope_alg(eps, lambda, c, phi0, dphi0, ddphi0)};
  double t = t0;
  out.rows.push_back(record(eps, lambda, c, t, y));
  while (t < t1 - 1e-12) {
    double h = std::min(step, t1 - t);
    WarpState k1 = derive(eps, lambda, c, y);
    WarpState k2 = derive(eps, lambda, c, axpy(y, 0.5 * h, k1));
    WarpState k3 = derive(eps, lambda, c, axpy(y, 0.5 * h, k2));
    WarpState k4 = derive(eps, lambda, c, axpy(y, h, k3));
    WarpState sum = axpy(axpy(axpy(k1, 2.0, k2), 2.0, k3), 1.0, k4);
    y = axpy(y, h / 6.0, sum);
    t += h;
    if (!std::isfinite(y.phi) || !std::isfinite(y.dphi) ||
        !std::isfinite(y.ddphi) || !std::isfinite(y.f) ||
        !std::isfinite(y.slope))
      throw degenerate_error("warping trajectory diverged inside the interval");
    out.rows.push_back(record(eps, lambda, c, t, y));
  }
  return out;
}

WarpTrajectory thin_trajectory(const WarpTrajectory& traj, double spacing) {
  if (!(spacing > 0.0)) throw domain_error("spacing must be positive");
  if (traj.rows.size() < 2)
    throw shape_error("trajectory must carry at least two nodes");
  WarpTrajectory out;
  out.eps = traj.eps;
  out.lambda = traj.lambda;
  out.c = traj.c;
  out.step = traj.step;
  double last = traj.rows.front().t;
  out.rows.push_back(traj.rows.front());
  for (size_t i = 1; i + 1 < traj.rows.size(); ++i)
    if (traj.rows[i].t >= last + spacing - 1e-12) {
      out.rows.push_back(traj.rows[i]);
      last = traj.rows[i].t;
    }
  out.rows.push_back(traj.rows.back());
  return out;
}

MetricField assemble_warped_metric(const WarpTrajectory& traj,
                                   const FiberModel& fm) {
  if (traj.rows.size() < 2)
    throw shape_error("trajectory must carry at least two nodes");
  size_t n = traj.rows.size();
  std::vector<double> t(n), v(n), d1(n), d2(n);
  for (size_t i = 0; i < n; ++i) {
    t[i] = traj.rows[i].t;
    v[i] = traj.rows[i].phi;
    d1[i] = traj.rows[i].dphi;
    d2[i] = traj.rows[i].ddphi;
  }
  auto curve = std::make_shared<const HermiteCurve>(
      make_hermite_curve(std::move(t), std::move(v), std::move(d1),
                         std::move(d2)));
  ExprPtr phi = ex_spline(curve, 0);
  ExprPtr phi2 = ex_mul(phi, ex_spline(curve, 0));

  std::vector<std::vector<ExprPtr>> comps(4, std::vector<ExprPtr>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) comps[i][j] = ex_const(0.0);
  comps[0][0] = ex_const(traj.eps);
  for (int a = 0; a < 3; ++a)
    comps[1 + a][1 + a] = ex_mul(phi2, fiber_comp(fm, a, 1));
  return make_metric({"t", "y1", "y2", "y3"}, comps);
}

ExprPtr warped_potential(const WarpTrajectory& traj) {
  if (traj.rows.size() < 2)
    throw shape_error("trajectory must carry at least two nodes");
  size_t n = traj.rows.size();
  std::vector<double> t(n), v(n), d1(n), d2(n);
  for (size_t i = 0; i < n; ++i) {
    const WarpSample& r = traj.rows[i];
    t[i] = r.t;
    v[i] = r.f;
    d1[i] = slope_alg(traj.eps, traj.lambda, traj.c, r.phi, r.dphi, r.ddphi);
    d2[i] = traj.eps * traj.lambda + 3.0 * r.ddphi / r.phi;
  }
  auto curve = std::make_shared<const HermiteCurve>(
      make_hermite_curve(std::move(t), std::move(v), std::move(d1),
                         std::move(d2)));
  return ex_spline(curve, 0);
}

PlaneWave plane_wave(const ExprPtr& a, double u0, double ulo, double uhi) {
  if (!a) throw shape_error("null wave profile");
  if (expr_max_var(a) >= 1)
    throw shape_error("wave profile must depend on u alone");

  ExprPtr r2 = ex_add(ex_mul(ex_var(2), ex_var(2)), ex_mul(ex_var(3), ex_var(3)));
  std::vector<std::vector<ExprPtr>> comps(4, std::vector<ExprPtr>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) comps[i][j] = ex_const(0.0);
  comps[0][0] = ex_mul(a, std::move(r2));
  comps[0][1] = comps[1][0] = ex_const(1.0);
  comps[2][2] = ex_const(1.0);
  comps[3][3] = ex_const(1.0);

  PlaneWave out;
  out.g = make_metric({"u", "v", "x1", "x2"}, comps);
  ExprPtr fp =
      ex_antideriv(ex_mul(ex_const(2.0), a), 0, u0, ulo, uhi);
  out.f = ex_antideriv(std::move(fp), 0, u0, ulo, uhi);
  out.lambda = 0.0;
  return out;
}

}  // namespace grs
