#include "grs/extension.hpp"

#include <algorithm>
#include <cmath>

namespace grs {

namespace {

const std::vector<std::string> kExtCoords = {"x1", "x2", "x1p", "x2p"};

void check_phi(const SymTensor2& Phi) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (!Phi[i][j]) throw shape_error("null deformation component");
      if (expr_max_var(Phi[i][j]) >= 2)
        throw shape_error("deformation tensor must live on the base");
    }
  if (!expr_equal(Phi[0][1], Phi[1][0]))
    throw shape_error("deformation tensor must be symmetric");
}

void check_base_fn(const ExprPtr& e, const char* what) {
  if (!e) throw shape_error(std::string("null ") + what);
  if (expr_max_var(e) >= 2)
    throw shape_error(std::string(what) + " must be a base function");
}

// Values and first derivatives of the base christoffels and Phi.
struct BaseJets {
  double gam[2][2][2] = {};
  double dgam[2][2][2][2] = {};  // dgam[m][k][i][j]
  double phi[2][2] = {};
  double dphi[2][2][2] = {};  // dphi[m][i][j]
};

BaseJets base_jets(const AffineConnection2& D, const SymTensor2* Phi,
                   const double* p) {
  BaseJets b;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        Jet jj = eval_jet(D.Gam[k][i][j], 2, 1, p);
        b.gam[k][i][j] = b.gam[k][j][i] = jj.value();
        for (int m = 0; m < 2; ++m) {
          std::array<int, 4> e{};
          e[m] = 1;
          b.dgam[m][k][i][j] = b.dgam[m][k][j][i] = jj.coeff(e);
        }
      }
  if (Phi) {
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        Jet jj = eval_jet((*Phi)[i][j], 2, 1, p);
        b.phi[i][j] = b.phi[j][i] = jj.value();
        for (int m = 0; m < 2; ++m) {
          std::array<int, 4> e{};
          e[m] = 1;
          b.dphi[m][i][j] = b.dphi[m][j][i] = jj.coeff(e);
        }
      }
  }
  return b;
}

// Least squares fit of y ~ a0 + a1 u + a2 v over n samples.
void fit_affine(const double* u, const double* v, const double* y, int n,
                double out[3]) {
  double A[3][4] = {};
  for (int s = 0; s < n; ++s) {
    double row[3] = {1.0, u[s], v[s]};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) A[i][j] += row[i] * row[j];
      A[i][3] += row[i] * y[s];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (std::fabs(A[piv][col]) < 1e-14)
      throw degenerate_error("degenerate sample set for the affine fit");
    if (piv != col)
      for (int c = 0; c < 4; ++c) std::swap(A[piv][c], A[col][c]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      double fmul = A[r][col] / A[col][col];
      for (int c = 0; c < 4; ++c) A[r][c] -= fmul * A[col][c];
    }
  }
  for (int i = 0; i < 3; ++i) out[i] = A[i][3] / A[i][i];
}

}  // namespace

SymTensor2 sym_tensor2(const std::string& t11, const std::string& t12,
                       const std::string& t22) {
  std::vector<std::string> coords = {"x1", "x2"};
  SymTensor2 out;
  out[0][0] = parse_expr(t11, coords);
  out[0][1] = out[1][0] = parse_expr(t12, coords);
  out[1][1] = parse_expr(t22, coords);
  return out;
}

SymTensor2 zero_tensor2() {
  SymTensor2 out;
  out[0][0] = ex_const(0.0);
  out[0][1] = out[1][0] = ex_const(0.0);
  out[1][1] = ex_const(0.0);
  return out;
}

MetricField riemannian_extension(const AffineConnection2& D,
                                 const SymTensor2& Phi) {
  check_phi(Phi);
  std::vector<std::vector<ExprPtr>> comps(4, std::vector<ExprPtr>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) comps[i][j] = ex_const(0.0);
  comps[0][2] = comps[2][0] = ex_const(1.0);
  comps[1][3] = comps[3][1] = ex_const(1.0);
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      ExprPtr c = Phi[i][j];
      for (int k = 0; k < 2; ++k)
        c = ex_sub(c, ex_mul(ex_const(2.0),
                             ex_mul(ex_var(2 + k), D.Gam[k][i][j])));
      comps[i][j] = c;
      comps[j][i] = c;
    }
  return make_metric(kExtCoords, comps);
}

MetricField riemannian_extension(const AffineConnection2& D) {
  return riemannian_extension(D, zero_tensor2());
}

ExprPtr extension_potential(const ExprPtr& X1, const ExprPtr& X2,
                            const ExprPtr& h) {
  check_base_fn(X1, "vector component");
  check_base_fn(X2, "vector component");
  check_base_fn(h, "potential");
  return ex_add(ex_add(ex_mul(ex_var(2), X1), ex_mul(ex_var(3), X2)), h);
}

Ten3 extension_christoffel_formula(const AffineConnection2& D,
                                   const SymTensor2& Phi, const double* p) {
  check_phi(Phi);
  BaseJets b = base_jets(D, &Phi, p);
  Ten3 out;
  out.d = 4;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        out.t[k][i][j] = b.gam[k][i][j];
        out.t[2 + k][2 + i][j] = -b.gam[i][j][k];
        out.t[2 + k][j][2 + i] = -b.gam[i][j][k];
      }
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        double acc = 0.0;
        for (int r = 0; r < 2; ++r) {
          double para = b.dgam[k][r][i][j] - b.dgam[i][r][j][k] -
                        b.dgam[j][r][i][k];
          for (int l = 0; l < 2; ++l) para += 2.0 * b.gam[r][k][l] * b.gam[l][i][j];
          acc += p[2 + r] * para;
        }
        acc += 0.5 * (b.dphi[i][j][k] + b.dphi[j][i][k] - b.dphi[k][i][j]);
        for (int l = 0; l < 2; ++l) acc -= b.phi[k][l] * b.gam[l][i][j];
        out.t[2 + k][i][j] = acc;
        out.t[2 + k][j][i] = acc;
      }
  return out;
}

Mat extension_ricci_formula(const AffineConnection2& D, const double* p) {
  BaseJets b = base_jets(D, nullptr, p);
  const double G111 = b.gam[0][0][0], G112 = b.gam[0][0][1],
               G122 = b.gam[0][1][1], G211 = b.gam[1][0][0],
               G212 = b.gam[1][0][1], G222 = b.gam[1][1][1];
  Mat out;
  out.d = 4;
  out.m[0][0] = 2.0 * (G111 * G212 - G212 * G212 + G211 * (G222 - G112) +
                       b.dgam[1][1][0][0] - b.dgam[0][1][0][1]);
  out.m[0][1] = 2.0 * (G112 * G212 - G211 * G122) -
                (b.dgam[1][0][0][0] - b.dgam[1][1][0][1]) +
                (b.dgam[0][0][0][1] - b.dgam[0][1][1][1]);
  out.m[1][0] = out.m[0][1];
  out.m[1][1] = 2.0 * ((G111 - G212) * G122 + G112 * G222 - G112 * G112 -
                       b.dgam[1][0][0][1] + b.dgam[0][0][1][1]);
  return out;
}

WalkerReport walker_check(const CurvatureData& cd) {
  if (cd.d != 4) throw shape_error("walker check needs a 4-dimensional chart");
  double maxg = 0.0, maxgam = 0.0, maxr = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      maxg = std::max(maxg, std::fabs(cd.g[i][j]));
      for (int k = 0; k < 4; ++k) {
        maxgam = std::max(maxgam, std::fabs(cd.Gam[k][i][j]));
        for (int l = 0; l < 4; ++l)
          maxr = std::max(maxr, std::fabs(cd.R4[i][j][k][l]));
      }
    }
  WalkerReport out;
  for (int a = 2; a < 4; ++a)
    for (int b = 2; b < 4; ++b)
      out.null_residual = std::max(out.null_residual, std::fabs(cd.g[a][b]));
  out.null_residual /= std::max(1.0, maxg);
  for (int c = 0; c < 2; ++c)
    for (int mu = 0; mu < 4; ++mu)
      for (int a = 2; a < 4; ++a)
        out.parallel_residual =
            std::max(out.parallel_residual, std::fabs(cd.Gam[c][mu][a]));
  out.parallel_residual /= std::max(1.0, maxgam);
  for (int i = 0; i < 4; ++i)
    for (int a = 2; a < 4; ++a)
      for (int b = 2; b < 4; ++b)
        for (int l = 0; l < 4; ++l)
          out.curvature_residual =
              std::max(out.curvature_residual, std::fabs(cd.R4[i][a][b][l]));
  out.curvature_residual /= std::max(1.0, maxr);
  return out;
}

ExtensionBattery extension_battery(const CurvatureData& cd) {
  if (cd.d != 4)
    throw shape_error("extension battery needs a 4-dimensional chart");
  ExtensionBattery out;

  double maxg = 0.0, maxginv = 0.0, maxric = 0.0, maxr4 = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      maxg = std::max(maxg, std::fabs(cd.g[i][j]));
      maxginv = std::max(maxginv, std::fabs(cd.ginv[i][j]));
      maxric = std::max(maxric, std::fabs(cd.Ric[i][j]));
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          maxr4 = std::max(maxr4, std::fabs(cd.R4[i][j][k][l]));
    }

  out.tau = std::fabs(cd.tau) / std::max(1.0, maxginv * maxric);

  double op[4][4] = {};
  double maxop = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) op[i][j] += cd.ginv[i][k] * cd.Ric[k][j];
      maxop = std::max(maxop, std::fabs(op[i][j]));
    }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double sq = 0.0;
      for (int k = 0; k < 4; ++k) sq += op[i][k] * op[k][j];
      out.ric_sq = std::max(out.ric_sq, std::fabs(sq));
    }
  out.ric_sq /= std::max(1.0, maxop * maxop);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j)
      out.ric_rows = std::max(out.ric_rows, std::fabs(op[i][j]));
  out.ric_rows /= std::max(1.0, maxop);

  out.walker = walker_check(cd);

  double ib = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ib = std::max(ib, std::fabs(cd.ginv[i][j]));
      double id = (i == j) ? 1.0 : 0.0;
      ib = std::max(ib, std::fabs(cd.ginv[i][2 + j] - id));
      ib = std::max(ib, std::fabs(cd.ginv[2 + i][2 + j] + cd.g[i][j]));
    }
  out.inverse_block = ib / std::max(1.0, maxg);

  DualitySplit ds = duality_split(cd);
  double wscale = std::max(
      {ds.residual_plus, ds.residual_minus, ds.residual_mixed});
  if (wscale < 1e-11 * std::max(1.0, maxr4)) {
    out.dual_side = 0;
    out.dual_null = wscale / std::max(1.0, maxr4);
    out.dual_live = wscale;
  } else if (ds.residual_minus <= ds.residual_plus) {
    out.dual_side = +1;
    out.dual_null = std::max(ds.residual_minus, ds.residual_mixed) / wscale;
    out.dual_live = ds.residual_plus;
  } else {
    out.dual_side = -1;
    out.dual_null = std::max(ds.residual_plus, ds.residual_mixed) / wscale;
    out.dual_live = ds.residual_minus;
  }
  return out;
}

EquivalenceReport affine_extension_equivalence(const AffineConnection2& D,
                                               const SymTensor2& Phi,
                                               const ExprPtr& h,
                                               const double* p) {
  check_base_fn(h, "potential");
  MetricField ext = riemannian_extension(D, Phi);
  CurvatureData cd = analyze(ext, p);
  Mat hes = hessian(cd, h);

  EquivalenceReport out;
  double res4[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      res4[i][j] = hes.m[i][j] + cd.Ric[i][j];
      out.metric_residual = std::max(out.metric_residual, std::fabs(res4[i][j]));
      out.scale = std::max({out.scale, std::fabs(hes.m[i][j]),
                            std::fabs(cd.Ric[i][j])});
      if (i >= 2 || j >= 2)
        out.offblock = std::max(out.offblock, std::fabs(res4[i][j]));
    }

  double pb[2] = {p[0], p[1]};
  AffineData ad = affine_analyze(D, pb);
  Mat ahes = affine_hessian(D, h, pb);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double ares = ahes.m[i][j] + ad.Ric[i][j] + ad.Ric[j][i];
      out.affine_residual = std::max(out.affine_residual, std::fabs(ares));
      out.block_mismatch =
          std::max(out.block_mismatch, std::fabs(res4[i][j] - ares));
      out.scale = std::max({out.scale, std::fabs(ahes.m[i][j]),
                            std::fabs(ad.Ric[i][j])});
    }
  return out;
}

WeylStructureReport extension_weyl_structure(const AffineConnection2& D,
                                             const SymTensor2& Phi,
                                             const double* pbase) {
  MetricField ext = riemannian_extension(D, Phi);
  static const double fib[7][2] = {{0.0, 0.0},  {1.0, 0.0},  {0.0, 1.0},
                                   {1.0, 1.0},  {-1.0, 0.5}, {0.7, -0.3},
                                   {-0.4, -0.9}};
  double u[7], v[7], w0101[7];

  double pb[2] = {pbase[0], pbase[1]};
  AffineData ad = affine_analyze(D, pb);
  double want_anti = 0.5 * (ad.Ric[0][1] - ad.Ric[1][0]);

  WeylStructureReport out;
  for (int s = 0; s < 7; ++s) {
    double q[4] = {pbase[0], pbase[1], fib[s][0], fib[s][1]};
    CurvatureData cd = analyze(ext, q);
    u[s] = fib[s][0];
    v[s] = fib[s][1];
    w0101[s] = cd.W[0][1][0][1];
    out.antisym_residual = std::max(
        out.antisym_residual, std::fabs(cd.W[0][1][0][2] - want_anti));
    out.antisym_residual = std::max(
        out.antisym_residual, std::fabs(cd.W[0][1][1][3] - want_anti));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            out.scale = std::max(out.scale, std::fabs(cd.W[i][j][k][l]));
  }

  double coef[3];
  fit_affine(u, v, w0101, 7, coef);
  out.intercept = coef[0];
  out.slope_x1p = coef[1];
  out.slope_x2p = coef[2];
  out.slope_x1p_want = ad.NRic[0][1][1] - ad.NRic[1][1][0];
  out.slope_x2p_want = ad.NRic[1][0][0] - ad.NRic[0][0][1];
  for (int s = 0; s < 7; ++s) {
    double fitted = coef[0] + coef[1] * u[s] + coef[2] * v[s];
    out.fit_residual = std::max(out.fit_residual, std::fabs(w0101[s] - fitted));
  }
  return out;
}

PotentialConstraints steady_potential_constraints(const AffineConnection2& D,
                                                  const SymTensor2& Phi,
                                                  const ExprPtr& h,
                                                  const double* p) {
  MetricField ext = riemannian_extension(D, Phi);
  ExprPtr f = extension_potential(ex_const(1.0), ex_const(0.0), h);
  CurvatureData cd = analyze(ext, p);
  Mat hes = hessian(cd, f);

  double pb[2] = {p[0], p[1]};
  BaseJets b = base_jets(D, nullptr, pb);

  PotentialConstraints out;
  out.lambda = b.gam[0][0][0];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out.mixed_identity = std::max(
          out.mixed_identity, std::fabs(hes.m[i][2 + j] - b.gam[j][i][0]));
      out.scale = std::max(out.scale, std::fabs(b.gam[j][i][0]));
    }
  out.constraint_residual =
      std::max({std::fabs(b.gam[1][0][0]), std::fabs(b.gam[0][0][1]),
                std::fabs(b.gam[0][0][0] - b.gam[1][0][1])});
  SolitonResidual sr = soliton_residual(cd, f, out.lambda);
  out.soliton_residual = sr.residual;
  out.scale = std::max(out.scale, sr.scale);
  return out;
}

}  // namespace grs
