#include "grs/soliton.hpp"

#include <algorithm>
#include <cmath>

namespace grs {

namespace {

double vec_pair(const CurvatureData& cd, const double* x, const double* y) {
  double acc = 0.0;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) acc += cd.g[i][j] * x[i] * y[j];
  return acc;
}

double vec_pair_scale(const CurvatureData& cd, const double* x,
                      const double* y) {
  double acc = 0.0;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j)
      acc += std::fabs(cd.g[i][j] * x[i] * y[j]);
  return acc;
}

}  // namespace

SolitonResidual soliton_residual(const CurvatureData& cd, const ExprPtr& f,
                                 double lambda) {
  Mat hes = hessian(cd, f);
  SolitonResidual out;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) {
      double r = hes.m[i][j] + cd.Ric[i][j] - lambda * cd.g[i][j];
      out.residual = std::max(out.residual, std::fabs(r));
      out.scale = std::max({out.scale, std::fabs(hes.m[i][j]),
                            std::fabs(cd.Ric[i][j]),
                            std::fabs(lambda * cd.g[i][j])});
    }
  return out;
}

GradientInfo classify_gradient(const CurvatureData& cd, const ExprPtr& f) {
  GradientInfo out;
  out.grad = gradient(cd, f);
  double gin = 0.0;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j)
      gin = std::max(gin, std::fabs(cd.ginv[i][j]));
  for (int i = 0; i < cd.d; ++i)
    out.max_component = std::max(out.max_component, std::fabs(out.grad.v[i]));
  out.norm2 = vec_pair(cd, out.grad.v, out.grad.v);
  if (out.max_component < 1e-10 * std::max(1.0, gin)) {
    out.cls = GradientClass::zero;
  } else if (std::fabs(out.norm2) <
             1e-8 * std::max(vec_pair_scale(cd, out.grad.v, out.grad.v),
                             1e-12)) {
    out.cls = GradientClass::isotropic;
  } else {
    out.cls = out.norm2 > 0.0 ? GradientClass::spacelike
                              : GradientClass::timelike;
  }
  return out;
}

SolitonIdentityResiduals soliton_identities(
    const MetricField& m, const ExprPtr& f, double lambda,
    const std::vector<std::array<double, 4>>& pts) {
  if (pts.empty()) throw shape_error("soliton identities need sample points");
  SolitonIdentityResiduals out;
  double F0 = 0.0;
  bool first = true;
  for (const auto& pt : pts) {
    CurvatureData cd = analyze(m, pt.data());
    Vec grad = gradient(cd, f);
    double fval = eval_value(f, cd.d, pt.data());

    for (int k = 0; k < cd.d; ++k) {
      double r = cd.dtau[k];
      for (int l = 0; l < cd.d; ++l) r -= 2.0 * cd.Ric[k][l] * grad.v[l];
      out.grad_tau = std::max(out.grad_tau, std::fabs(r));
    }

    double F = cd.tau + vec_pair(cd, grad.v, grad.v) - 2.0 * lambda * fval;
    if (first) {
      F0 = F;
      first = false;
    } else {
      out.first_integral = std::max(out.first_integral, std::fabs(F - F0));
    }

    for (int i = 0; i < cd.d; ++i)
      for (int j = 0; j < cd.d; ++j)
        for (int k = 0; k < cd.d; ++k) {
          double r = cd.NRic[i][j][k] - cd.NRic[j][i][k];
          for (int l = 0; l < cd.d; ++l) r += cd.R4[i][j][k][l] * grad.v[l];
          out.curvature_contraction =
              std::max(out.curvature_contraction, std::fabs(r));
        }

    out.scale = std::max({out.scale, std::fabs(cd.tau), std::fabs(F),
                          std::fabs(2.0 * lambda * fval)});
    for (int i = 0; i < cd.d; ++i) {
      out.scale = std::max(out.scale, std::fabs(cd.dtau[i]));
      for (int j = 0; j < cd.d; ++j)
        out.scale = std::max(out.scale, std::fabs(cd.Ric[i][j]));
    }
  }
  return out;
}

NilpotencyCheck ricci_nilpotent(const CurvatureData& cd) {
  double op[4][4];
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < cd.d; ++k) acc += cd.ginv[i][k] * cd.Ric[k][j];
      op[i][j] = acc;
    }
  NilpotencyCheck out;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) {
      out.op_norm = std::max(out.op_norm, std::fabs(op[i][j]));
      double acc = 0.0;
      for (int k = 0; k < cd.d; ++k) acc += op[i][k] * op[k][j];
      out.op_sq_norm = std::max(out.op_sq_norm, std::fabs(acc));
    }
  return out;
}

NullFrameB null_frame_b(const CurvatureData& cd, const ExprPtr& f) {
  if (cd.d != 4) throw shape_error("null frame requires a 4-dimensional chart");
  GradientInfo gi = classify_gradient(cd, f);
  if (gi.cls != GradientClass::isotropic)
    throw domain_error("potential gradient is not null at this point");
  NullFrameB nf;
  nf.d = 4;
  for (int i = 0; i < 4; ++i) nf.gradf[i] = gi.grad.v[i];

  // v: first coordinate direction not g-orthogonal to grad f, rescaled to
  // pairing 1, then shifted along grad f to make it null.
  int y = -1;
  double pscale = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      pscale = std::max(pscale, std::fabs(cd.g[i][j] * nf.gradf[j]));
  for (int c = 0; c < 4 && y < 0; ++c) {
    double pc = 0.0;
    for (int j = 0; j < 4; ++j) pc += cd.g[c][j] * nf.gradf[j];
    if (std::fabs(pc) > 1e-8 * std::max(pscale, 1e-12)) y = c;
  }
  if (y < 0)
    throw degenerate_error("grad f pairs to zero with every coordinate");
  double pc = 0.0;
  for (int j = 0; j < 4; ++j) pc += cd.g[y][j] * nf.gradf[j];
  double v0[4] = {};
  v0[y] = 1.0 / pc;
  double q = vec_pair(cd, v0, v0);
  for (int i = 0; i < 4; ++i) nf.v[i] = v0[i] - 0.5 * q * nf.gradf[i];

  // Basis of the complement of span{grad f, v}: project the coordinate
  // directions and keep the two most independent ones.
  double proj[4][4];
  for (int c = 0; c < 4; ++c) {
    double z[4] = {};
    z[c] = 1.0;
    double zv = vec_pair(cd, z, nf.v);
    double zg = vec_pair(cd, z, nf.gradf);
    for (int i = 0; i < 4; ++i)
      proj[c][i] = z[i] - zv * nf.gradf[i] - zg * nf.v[i];
  }
  int a1 = 0;
  double best = -1.0;
  for (int c = 0; c < 4; ++c) {
    double n2 = 0.0;
    for (int i = 0; i < 4; ++i) n2 += proj[c][i] * proj[c][i];
    if (n2 > best) {
      best = n2;
      a1 = c;
    }
  }
  double n1 = std::sqrt(best);
  double e1[4];
  for (int i = 0; i < 4; ++i) e1[i] = proj[a1][i] / n1;
  int a2 = -1;
  best = -1.0;
  double cand2[4][4];
  for (int c = 0; c < 4; ++c) {
    if (c == a1) continue;
    double dot = 0.0;
    for (int i = 0; i < 4; ++i) dot += proj[c][i] * e1[i];
    double n2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      cand2[c][i] = proj[c][i] - dot * e1[i];
      n2 += cand2[c][i] * cand2[c][i];
    }
    if (n2 > best) {
      best = n2;
      a2 = c;
    }
  }
  if (a2 < 0 || best < 1e-20)
    throw degenerate_error("complement of the null pair is not 2-dimensional");
  double e2[4];
  for (int i = 0; i < 4; ++i) e2[i] = cand2[a2][i] / std::sqrt(best);

  // Null directions of the complement: x e1 + e2 with
  // g11 x^2 + 2 g12 x + g22 = 0. The complement is a hyperbolic plane for
  // neutral signature, so the discriminant is positive.
  double g11 = vec_pair(cd, e1, e1);
  double g12 = vec_pair(cd, e1, e2);
  double g22 = vec_pair(cd, e2, e2);
  double sc = std::max({std::fabs(g11), std::fabs(g12), std::fabs(g22), 1e-12});
  double dir1[4], dir2[4];
  if (std::fabs(g11) < 1e-10 * sc) {
    if (std::fabs(g12) < 1e-10 * sc)
      throw domain_error(
          "complement carries no hyperbolic pair; neutral signature required");
    for (int i = 0; i < 4; ++i) dir1[i] = e1[i];
    double x = -g22 / (2.0 * g12);
    for (int i = 0; i < 4; ++i) dir2[i] = x * e1[i] + e2[i];
  } else {
    double disc = g12 * g12 - g11 * g22;
    if (disc <= 1e-10 * sc * sc)
      throw domain_error(
          "complement carries no hyperbolic pair; neutral signature required");
    double rt = std::sqrt(disc);
    double x1 = (-g12 + rt) / g11;
    double x2 = (-g12 - rt) / g11;
    for (int i = 0; i < 4; ++i) {
      dir1[i] = x1 * e1[i] + e2[i];
      dir2[i] = x2 * e1[i] + e2[i];
    }
  }
  auto normalize_max = [](double* z) {
    double mx = 0.0;
    for (int i = 0; i < 4; ++i) mx = std::max(mx, std::fabs(z[i]));
    for (int i = 0; i < 4; ++i) z[i] /= mx;
  };
  normalize_max(dir1);
  normalize_max(dir2);
  auto ric_size = [&](const double* z) {
    double mx = 0.0;
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += cd.Ric[j][k] * z[k];
      mx = std::max(mx, std::fabs(acc));
    }
    return mx;
  };
  const double* usrc = ric_size(dir1) <= ric_size(dir2) ? dir1 : dir2;
  const double* wsrc = usrc == dir1 ? dir2 : dir1;
  double s = vec_pair(cd, usrc, wsrc);
  if (std::fabs(s) < 1e-12)
    throw degenerate_error("null complement directions pair to zero");
  for (int i = 0; i < 4; ++i) {
    nf.u[i] = usrc[i];
    nf.w[i] = wsrc[i] / s;
  }
  return nf;
}

NullFrameRicciShape nullframe_ricci_shape(const CurvatureData& cd,
                                          const NullFrameB& nf) {
  const double* e[4] = {nf.gradf, nf.u, nf.v, nf.w};
  NullFrameRicciShape out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double acc = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) acc += cd.Ric[i][j] * e[a][i] * e[b][j];
      out.rho[a][b] = acc;
      if (a <= 1 || b <= 1)
        out.residual = std::max(out.residual, std::fabs(acc));
    }
  out.a = out.rho[2][2];
  out.b = out.rho[3][3];
  out.c = out.rho[2][3];
  return out;
}

EigenFrame nonisotropic_eigenstructure(const CurvatureData& cd,
                                       const ExprPtr& f) {
  GradientInfo gi = classify_gradient(cd, f);
  if (gi.cls != GradientClass::spacelike && gi.cls != GradientClass::timelike)
    throw domain_error(
        "potential gradient is null or zero; no unit gradient direction");
  double seed[1][4];
  double nrm = std::sqrt(std::fabs(gi.norm2));
  for (int i = 0; i < cd.d; ++i) seed[0][i] = gi.grad.v[i] / nrm;
  double eps0 = gi.norm2 > 0.0 ? 1.0 : -1.0;
  EigenFrame out;
  out.frame = complete_frame(cd, seed, &eps0, 1);
  Mat hes = hessian(cd, f);
  for (int a = 0; a < cd.d; ++a)
    for (int b = 0; b < cd.d; ++b) {
      double hacc = 0.0, racc = 0.0;
      for (int i = 0; i < cd.d; ++i)
        for (int j = 0; j < cd.d; ++j) {
          hacc += hes.m[i][j] * out.frame.e[a][i] * out.frame.e[b][j];
          racc += cd.Ric[i][j] * out.frame.e[a][i] * out.frame.e[b][j];
        }
      out.hes_frame[a][b] = hacc;
      out.ric_frame[a][b] = racc;
    }
  return out;
}

}  // namespace grs
