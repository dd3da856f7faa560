#include "grs/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace grs {

namespace {

double det_small(const double m[4][4], int d) {
  switch (d) {
    case 1:
      return m[0][0];
    case 2:
      return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    case 3:
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    case 4: {
      double det = 0.0;
      for (int c = 0; c < 4; ++c) {
        double sub[4][4] = {};
        for (int r = 1; r < 4; ++r) {
          int cc = 0;
          for (int c2 = 0; c2 < 4; ++c2) {
            if (c2 == c) continue;
            sub[r - 1][cc++] = m[r][c2];
          }
        }
        double minor = det_small(sub, 3);
        det += ((c % 2 == 0) ? 1.0 : -1.0) * m[0][c] * minor;
      }
      return det;
    }
    default:
      throw shape_error("determinant only for dimensions 1..4");
  }
}

// Gauss-Jordan at the jets' common order, pivoting on |value|.
void jet_mat_inverse(const Jet in[4][4], int d, Jet out[4][4]) {
  Jet a[4][4];
  int n = in[0][0].n, k = in[0][0].k;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      a[i][j] = in[i][j];
      out[i][j] = Jet::constant(n, k, i == j ? 1.0 : 0.0);
    }
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::fabs(a[r][col].value()) > std::fabs(a[piv][col].value()))
        piv = r;
    if (std::fabs(a[piv][col].value()) < 1e-300)
      throw degenerate_error("metric is singular at the evaluation point");
    if (piv != col)
      for (int j = 0; j < d; ++j) {
        std::swap(a[piv][j], a[col][j]);
        std::swap(out[piv][j], out[col][j]);
      }
    Jet inv = jet_reciprocal(a[col][col]);
    for (int j = 0; j < d; ++j) {
      a[col][j] = a[col][j] * inv;
      out[col][j] = out[col][j] * inv;
    }
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      Jet f = a[r][col];
      if (f.value() == 0.0) {
        bool zero = true;
        for (int t = 0; t < f.size(); ++t)
          if (f.c[t] != 0.0) {
            zero = false;
            break;
          }
        if (zero) continue;
      }
      for (int j = 0; j < d; ++j) {
        a[r][j] -= f * a[col][j];
        out[r][j] -= f * out[col][j];
      }
    }
  }
}

}  // namespace

MetricField make_metric(std::vector<std::string> coords,
                        const std::vector<std::vector<ExprPtr>>& comps) {
  int d = static_cast<int>(coords.size());
  if (d < 1 || d > 4) throw shape_error("metric dimension must be 1..4");
  if (static_cast<int>(comps.size()) != d)
    throw shape_error("metric component matrix has the wrong number of rows");
  for (const auto& row : comps)
    if (static_cast<int>(row.size()) != d)
      throw shape_error("metric component matrix is not square");
  MetricField m;
  m.coords = std::move(coords);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (!comps[i][j]) throw shape_error("null metric component");
      if (expr_max_var(comps[i][j]) >= d)
        throw shape_error("metric component references a variable beyond the chart");
      if (j < i && !expr_equal(comps[i][j], comps[j][i]))
        throw shape_error("metric components are not symmetric");
      m.g[i][j] = comps[i][j];
    }
  return m;
}

MetricField make_metric(std::vector<std::string> coords,
                        const std::vector<std::vector<std::string>>& comps) {
  std::vector<std::vector<ExprPtr>> parsed(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (const auto& s : comps[i]) parsed[i].push_back(parse_expr(s, coords));
  return make_metric(std::move(coords), parsed);
}

Box Box::cube(int d, double lo, double hi) {
  Box b;
  b.d = d;
  for (int i = 0; i < d; ++i) {
    b.lo[i] = lo;
    b.hi[i] = hi;
  }
  return b;
}

CurvatureData analyze(const MetricField& m, const double* p) {
  CurvatureData cd;
  int d = cd.d = m.dim();
  for (int i = 0; i < d; ++i) cd.p[i] = p[i];

  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      cd.gj[i][j] = eval_jet(m.g[i][j], d, 3, p);
      if (j != i) cd.gj[j][i] = cd.gj[i][j];
    }
  double scale = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cd.g[i][j] = cd.gj[i][j].value();
      scale = std::max(scale, std::fabs(cd.g[i][j]));
    }
  cd.det = det_small(cd.g, d);
  double dtol = 1e-12;
  for (int i = 0; i < d; ++i) dtol *= std::max(scale, 1e-30);
  if (std::fabs(cd.det) < dtol)
    throw degenerate_error("metric is singular at the evaluation point");

  Jet g2[4][4];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g2[i][j] = truncated(cd.gj[i][j], 2);
  jet_mat_inverse(g2, d, cd.gi);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) cd.ginv[i][j] = cd.gi[i][j].value();

  // Christoffel symbols: Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{lj} + d_j g_{li}
  // - d_l g_{ij}), assembled at jet order 2.
  Jet dg[4][4][4];  // dg[l][i][j] = d_l g_{ij}, order 2
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        dg[l][i][j] = jet_derivative(cd.gj[i][j], l);
        if (j != i) dg[l][j][i] = dg[l][i][j];
      }
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        Jet acc = Jet::make(d, 2);
        for (int l = 0; l < d; ++l)
          acc += cd.gi[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
        acc *= 0.5;
        cd.gam[k][i][j] = acc;
        if (j != i) cd.gam[k][j][i] = acc;
      }
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        cd.Gam[k][i][j] = cd.gam[k][i][j].value();
        for (int mm = 0; mm < d; ++mm) {
          std::array<int, 4> e{};
          e[mm] = 1;
          cd.dGam[mm][k][i][j] = cd.gam[k][i][j].coeff(e);
        }
      }

  // Curvature values R^l_{ijk}.
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double acc = cd.dGam[i][l][j][k] - cd.dGam[j][l][i][k];
          for (int mm = 0; mm < d; ++mm)
            acc += cd.Gam[l][i][mm] * cd.Gam[mm][j][k] -
                   cd.Gam[l][j][mm] * cd.Gam[mm][i][k];
          cd.R[l][i][j][k] = acc;
        }

  // Ricci as order-1 jets: rho_{jk} = sum_i d_i Gamma^i_{jk} - d_j tr_k
  // + sum_m tr_m Gamma^m_{jk} - sum_{i,m} Gamma^i_{jm} Gamma^m_{ik},
  // tr_m = sum_i Gamma^i_{im}.
  Jet tr[4];
  for (int mm = 0; mm < d; ++mm) {
    tr[mm] = Jet::make(d, 2);
    for (int i = 0; i < d; ++i) tr[mm] += cd.gam[i][i][mm];
  }
  Jet gam1[4][4][4], tr1[4];
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) gam1[k][i][j] = truncated(cd.gam[k][i][j], 1);
  for (int mm = 0; mm < d; ++mm) tr1[mm] = truncated(tr[mm], 1);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      Jet acc = Jet::make(d, 1);
      for (int i = 0; i < d; ++i) acc += jet_derivative(cd.gam[i][j][k], i);
      acc -= jet_derivative(tr[k], j);
      for (int mm = 0; mm < d; ++mm) acc += tr1[mm] * gam1[mm][j][k];
      for (int i = 0; i < d; ++i)
        for (int mm = 0; mm < d; ++mm) acc -= gam1[i][j][mm] * gam1[mm][i][k];
      cd.ricj[j][k] = acc;
    }
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      cd.Ric[j][k] = cd.ricj[j][k].value();
      for (int mm = 0; mm < d; ++mm) {
        std::array<int, 4> e{};
        e[mm] = 1;
        cd.dRic[mm][j][k] = cd.ricj[j][k].coeff(e);
      }
    }
  for (int mm = 0; mm < d; ++mm)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double acc = cd.dRic[mm][j][k];
        for (int l = 0; l < d; ++l)
          acc -= cd.Gam[l][mm][j] * cd.Ric[l][k] + cd.Gam[l][mm][k] * cd.Ric[j][l];
        cd.NRic[mm][j][k] = acc;
      }

  cd.tauj = Jet::make(d, 1);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      cd.tauj += truncated(cd.gi[j][k], 1) * cd.ricj[j][k];
  cd.tau = cd.tauj.value();
  for (int mm = 0; mm < d; ++mm) {
    std::array<int, 4> e{};
    e[mm] = 1;
    cd.dtau[mm] = cd.tauj.coeff(e);
  }

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double acc = 0.0;
          for (int mm = 0; mm < d; ++mm) acc += cd.R[mm][i][j][k] * cd.g[mm][l];
          cd.R4[i][j][k][l] = -acc;
        }

  if (d == 4) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            cd.W[i][j][k][l] =
                cd.R4[i][j][k][l] +
                cd.tau / 6.0 *
                    (cd.g[i][k] * cd.g[j][l] - cd.g[j][k] * cd.g[i][l]) -
                0.5 * (cd.Ric[i][k] * cd.g[j][l] - cd.Ric[j][k] * cd.g[i][l] +
                       cd.Ric[j][l] * cd.g[i][k] - cd.Ric[i][l] * cd.g[j][k]);
  }
  return cd;
}

MetricValue metric_at(const MetricField& m, const double* p) {
  CurvatureData cd = analyze(m, p);
  MetricValue mv;
  mv.g.d = mv.ginv.d = cd.d;
  mv.det = cd.det;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) {
      mv.g.m[i][j] = cd.g[i][j];
      mv.ginv.m[i][j] = cd.ginv[i][j];
    }
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < cd.d; ++k) acc += cd.g[i][k] * cd.ginv[k][j];
      mv.inverse_residual =
          std::max(mv.inverse_residual, std::fabs(acc - (i == j ? 1.0 : 0.0)));
    }
  return mv;
}

Ten3 christoffel(const MetricField& m, const double* p) {
  CurvatureData cd = analyze(m, p);
  Ten3 t;
  t.d = cd.d;
  for (int k = 0; k < cd.d; ++k)
    for (int i = 0; i < cd.d; ++i)
      for (int j = 0; j < cd.d; ++j) t.t[k][i][j] = cd.Gam[k][i][j];
  return t;
}

Ten4 riemann(const MetricField& m, const double* p) {
  CurvatureData cd = analyze(m, p);
  Ten4 t;
  t.d = cd.d;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j)
      for (int k = 0; k < cd.d; ++k)
        for (int l = 0; l < cd.d; ++l) t.t[i][j][k][l] = cd.R4[i][j][k][l];
  return t;
}

Mat ricci(const MetricField& m, const double* p) {
  CurvatureData cd = analyze(m, p);
  Mat r;
  r.d = cd.d;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) r.m[i][j] = cd.Ric[i][j];
  return r;
}

Mat ricci_operator(const MetricField& m, const double* p) {
  CurvatureData cd = analyze(m, p);
  Mat r;
  r.d = cd.d;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) {
      double acc = 0.0;
      for (int l = 0; l < cd.d; ++l) acc += cd.ginv[i][l] * cd.Ric[l][j];
      r.m[i][j] = acc;
    }
  return r;
}

double scalar_curvature(const MetricField& m, const double* p) {
  return analyze(m, p).tau;
}

Ten4 weyl(const MetricField& m, const double* p) {
  CurvatureData cd = analyze(m, p);
  if (cd.d != 4) throw shape_error("weyl tensor requires a 4-dimensional chart");
  Ten4 t;
  t.d = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) t.t[i][j][k][l] = cd.W[i][j][k][l];
  return t;
}

Ten3 cotton(const MetricField& m, const double* p) {
  CurvatureData cd = analyze(m, p);
  Ten3 t;
  t.d = cd.d;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j)
      for (int k = 0; k < cd.d; ++k)
        t.t[i][j][k] = cd.NRic[i][j][k] - cd.NRic[j][i][k] -
                       (cd.dtau[i] * cd.g[j][k] - cd.dtau[j] * cd.g[i][k]) / 6.0;
  return t;
}

Vec gradient(const CurvatureData& cd, const ExprPtr& f) {
  Jet fj = eval_jet(f, cd.d, 1, cd.p);
  Vec v;
  v.d = cd.d;
  for (int i = 0; i < cd.d; ++i) {
    double acc = 0.0;
    for (int j = 0; j < cd.d; ++j) {
      std::array<int, 4> e{};
      e[j] = 1;
      acc += cd.ginv[i][j] * fj.coeff(e);
    }
    v.v[i] = acc;
  }
  return v;
}

double grad_norm2(const CurvatureData& cd, const ExprPtr& f) {
  Jet fj = eval_jet(f, cd.d, 1, cd.p);
  double df[4];
  for (int j = 0; j < cd.d; ++j) {
    std::array<int, 4> e{};
    e[j] = 1;
    df[j] = fj.coeff(e);
  }
  double acc = 0.0;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) acc += cd.ginv[i][j] * df[i] * df[j];
  return acc;
}

Mat hessian(const CurvatureData& cd, const ExprPtr& f) {
  Jet fj = eval_jet(f, cd.d, 2, cd.p);
  double df[4];
  for (int j = 0; j < cd.d; ++j) {
    std::array<int, 4> e{};
    e[j] = 1;
    df[j] = fj.coeff(e);
  }
  Mat h;
  h.d = cd.d;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) {
      std::array<int, 4> e{};
      e[i] += 1;
      e[j] += 1;
      double acc = fj.partial(e);
      for (int k = 0; k < cd.d; ++k) acc -= cd.Gam[k][i][j] * df[k];
      h.m[i][j] = acc;
    }
  return h;
}

double pair_g(const CurvatureData& cd, const double* x, const double* y) {
  double acc = 0.0;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) acc += cd.g[i][j] * x[i] * y[j];
  return acc;
}

double max_abs(const Mat& a) {
  double r = 0.0;
  for (int i = 0; i < a.d; ++i)
    for (int j = 0; j < a.d; ++j) r = std::max(r, std::fabs(a.m[i][j]));
  return r;
}

double max_abs(const Ten3& a) {
  double r = 0.0;
  for (int i = 0; i < a.d; ++i)
    for (int j = 0; j < a.d; ++j)
      for (int k = 0; k < a.d; ++k) r = std::max(r, std::fabs(a.t[i][j][k]));
  return r;
}

double max_abs(const Ten4& a) {
  double r = 0.0;
  for (int i = 0; i < a.d; ++i)
    for (int j = 0; j < a.d; ++j)
      for (int k = 0; k < a.d; ++k)
        for (int l = 0; l < a.d; ++l) r = std::max(r, std::fabs(a.t[i][j][k][l]));
  return r;
}

}  // namespace grs
