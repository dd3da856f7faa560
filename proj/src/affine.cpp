#include "grs/affine.hpp"

#include <algorithm>
#include <cmath>

namespace grs {

namespace {

ExprPtr over_x1(double c) {
  return ex_mul(ex_const(c), ex_pow(ex_var(0), -1, 1));
}

}  // namespace

AffineConnection2 make_affine(
    std::vector<std::string> coords,
    const std::array<std::array<std::array<ExprPtr, 2>, 2>, 2>& comps) {
  if (coords.size() != 2)
    throw shape_error("affine connection needs a 2-dimensional chart");
  AffineConnection2 D;
  D.coords = std::move(coords);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const ExprPtr& e = comps[k][i][j];
        if (!e) throw shape_error("null christoffel component");
        if (expr_max_var(e) >= 2)
          throw shape_error("christoffel component references a variable beyond the chart");
        if (j < i && !expr_equal(e, comps[k][j][i]))
          throw shape_error("christoffel components are not symmetric in the lower indices");
        D.Gam[k][i][j] = e;
      }
  return D;
}

AffineConnection2 make_affine(std::vector<std::string> coords,
                              const std::vector<GammaEntry>& entries) {
  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comps[k][i][j] = ex_const(0.0);
  for (const auto& en : entries) {
    if (en.k < 0 || en.k > 1 || en.i < 0 || en.i > 1 || en.j < 0 || en.j > 1)
      throw shape_error("christoffel index out of range");
    ExprPtr e = parse_expr(en.expr, coords);
    comps[en.k][en.i][en.j] = e;
    comps[en.k][en.j][en.i] = e;
  }
  return make_affine(std::move(coords), comps);
}

AffineData affine_analyze(const AffineConnection2& D, const double* p) {
  AffineData ad;
  ad.p[0] = p[0];
  ad.p[1] = p[1];
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        ad.gamj[k][i][j] = eval_jet(D.Gam[k][i][j], 2, 2, p);
        if (j != i) ad.gamj[k][j][i] = ad.gamj[k][i][j];
      }
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        ad.Gam[k][i][j] = ad.gamj[k][i][j].value();
        for (int m = 0; m < 2; ++m) {
          std::array<int, 4> e{};
          e[m] = 1;
          ad.dGam[m][k][i][j] = ad.gamj[k][i][j].coeff(e);
        }
      }

  Jet tr[2];
  for (int m = 0; m < 2; ++m) {
    tr[m] = Jet::make(2, 2);
    for (int i = 0; i < 2; ++i) tr[m] += ad.gamj[i][i][m];
  }
  Jet gam1[2][2][2], tr1[2];
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) gam1[k][i][j] = truncated(ad.gamj[k][i][j], 1);
  for (int m = 0; m < 2; ++m) tr1[m] = truncated(tr[m], 1);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      Jet acc = Jet::make(2, 1);
      for (int i = 0; i < 2; ++i) acc += jet_derivative(ad.gamj[i][j][k], i);
      acc -= jet_derivative(tr[k], j);
      for (int m = 0; m < 2; ++m) acc += tr1[m] * gam1[m][j][k];
      for (int i = 0; i < 2; ++i)
        for (int m = 0; m < 2; ++m) acc -= gam1[i][j][m] * gam1[m][i][k];
      ad.ricj[j][k] = acc;
    }
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      ad.Ric[j][k] = ad.ricj[j][k].value();
      for (int m = 0; m < 2; ++m) {
        std::array<int, 4> e{};
        e[m] = 1;
        ad.dRic[m][j][k] = ad.ricj[j][k].coeff(e);
      }
    }
  for (int m = 0; m < 2; ++m)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double acc = ad.dRic[m][j][k];
        for (int l = 0; l < 2; ++l)
          acc -= ad.Gam[l][m][j] * ad.Ric[l][k] + ad.Gam[l][m][k] * ad.Ric[j][l];
        ad.NRic[m][j][k] = acc;
      }
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double acc = ad.dGam[i][l][j][k] - ad.dGam[j][l][i][k];
          for (int m = 0; m < 2; ++m)
            acc += ad.Gam[l][i][m] * ad.Gam[m][j][k] -
                   ad.Gam[l][j][m] * ad.Gam[m][i][k];
          ad.R[l][i][j][k] = acc;
        }
  return ad;
}

Mat affine_hessian(const AffineConnection2& D, const ExprPtr& h,
                   const double* p) {
  AffineData ad = affine_analyze(D, p);
  Jet hj = eval_jet(h, 2, 2, p);
  double dh[2];
  for (int k = 0; k < 2; ++k) {
    std::array<int, 4> e{};
    e[k] = 1;
    dh[k] = hj.coeff(e);
  }
  Mat out;
  out.d = 2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::array<int, 4> e{};
      e[i] += 1;
      e[j] += 1;
      double acc = hj.partial(e);
      for (int k = 0; k < 2; ++k) acc -= ad.Gam[k][i][j] * dh[k];
      out.m[i][j] = acc;
    }
  return out;
}

AffineSolitonResidual affine_soliton_residual(const AffineConnection2& D,
                                              const ExprPtr& h,
                                              const double* p) {
  AffineData ad = affine_analyze(D, p);
  Mat hes = affine_hessian(D, h, p);
  AffineSolitonResidual out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double r = hes.m[i][j] + ad.Ric[i][j] + ad.Ric[j][i];
      out.residual = std::max(out.residual, std::fabs(r));
      out.scale = std::max({out.scale, std::fabs(hes.m[i][j]),
                            std::fabs(ad.Ric[i][j])});
    }
  return out;
}

RicciRankInfo ricci_rank(const AffineData& ad) {
  RicciRankInfo out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.max_entry = std::max(out.max_entry, std::fabs(ad.Ric[i][j]));
  out.det = ad.Ric[0][0] * ad.Ric[1][1] - ad.Ric[0][1] * ad.Ric[1][0];
  if (out.max_entry < 1e-10)
    out.rank = 0;
  else if (std::fabs(out.det) > 1e-8 * out.max_entry * out.max_entry)
    out.rank = 2;
  else
    out.rank = 1;
  return out;
}

RecurrenceFit recurrence_fit(const AffineData& ad) {
  RecurrenceFit out;
  double den = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) den += ad.Ric[i][j] * ad.Ric[i][j];
  if (den < 1e-24)
    throw degenerate_error("ricci tensor vanishes; recurrence fit undefined");
  for (int k = 0; k < 2; ++k) {
    double num = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) num += ad.NRic[k][i][j] * ad.Ric[i][j];
    out.omega[k] = num / den;
  }
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double r = ad.NRic[k][i][j] - out.omega[k] * ad.Ric[i][j];
        out.residual = std::max(out.residual, std::fabs(r));
        out.scale = std::max(out.scale, std::fabs(ad.NRic[k][i][j]));
      }
  return out;
}

ProjectiveFlatness projective_flatness_residuals(const AffineData& ad) {
  ProjectiveFlatness out;
  out.ricci_antisym = std::fabs(ad.Ric[0][1] - ad.Ric[1][0]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      out.scale = std::max(out.scale, std::fabs(ad.Ric[i][j]));
      for (int k = 0; k < 2; ++k) {
        out.nabla_sym = std::max(
            out.nabla_sym, std::fabs(ad.NRic[i][j][k] - ad.NRic[j][i][k]));
        out.scale = std::max(out.scale, std::fabs(ad.NRic[i][j][k]));
      }
    }
  return out;
}

AffineSolitonExample type_a_soliton(double g111, double g211, double g212,
                                    double g222) {
  AffineSolitonExample ex;
  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comps[k][i][j] = ex_const(0.0);
  comps[0][0][0] = ex_const(g111);
  comps[1][0][0] = ex_const(g211);
  comps[1][0][1] = comps[1][1][0] = ex_const(g212);
  comps[1][1][1] = ex_const(g222);
  ex.D = make_affine({"x1", "x2"}, comps);
  double ric11 = g111 * g212 + g211 * g222 - g212 * g212;
  double r = -2.0 * ric11;
  if (g111 != 0.0)
    ex.h = ex_mul(ex_const(-r / g111), ex_var(0));
  else
    ex.h = ex_mul(ex_const(r / 2.0), ex_pow(ex_var(0), 2, 1));
  return ex;
}

AffineSolitonExample type_a_locally_symmetric(double g211, double g212,
                                              double g222) {
  AffineSolitonExample ex = type_a_soliton(0.0, g211, g212, g222);
  return ex;
}

AffineSolitonExample type_b_case_i(double g111, double g212) {
  if (g111 == -1.0)
    throw domain_error("type B case (i) requires gamma^1_11 != -1");
  AffineSolitonExample ex;
  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comps[k][i][j] = ex_const(0.0);
  comps[0][0][0] = over_x1(g111);
  comps[1][0][1] = comps[1][1][0] = over_x1(g212);
  ex.D = make_affine({"x1", "x2"}, comps);
  double K = g212 * (1.0 + g111 - g212);
  double M = 2.0 * K / (1.0 + g111);
  ex.h = ex_mul(ex_const(M), ex_ln(ex_var(0)));
  return ex;
}

AffineConnection2 type_b_case_ii(double g111, double g122) {
  if (g122 == 0.0)
    throw domain_error("type B case (ii) requires gamma^1_22 != 0");
  double s = g122 * (g111 + 3.0);
  if (s < 0.0)
    throw domain_error(
        "type B case (ii) degenerate branch needs gamma^1_22 (gamma^1_11 + 3) >= 0");
  double g112 = std::sqrt(s);
  double g212 = -g111 - 5.0;
  double g222 = -g112;
  double g211 = -g112 * g112 * g112 / (g122 * g122) - g112 / g122;
  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  comps[0][0][0] = over_x1(g111);
  comps[0][0][1] = comps[0][1][0] = over_x1(g112);
  comps[0][1][1] = over_x1(g122);
  comps[1][0][0] = over_x1(g211);
  comps[1][0][1] = comps[1][1][0] = over_x1(g212);
  comps[1][1][1] = over_x1(g222);
  return make_affine({"x1", "x2"}, comps);
}

CaseIIForcedGradient type_b_case_ii_forced_gradient(double g111, double g122,
                                                    const double* p) {
  if (g122 == 0.0)
    throw domain_error("type B case (ii) requires gamma^1_22 != 0");
  double s = g122 * (g111 + 3.0);
  if (s < 0.0)
    throw domain_error(
        "type B case (ii) degenerate branch needs gamma^1_22 (gamma^1_11 + 3) >= 0");
  double g112 = std::sqrt(s);
  double x1 = p[0];
  // Unknowns (d1 h, d2 h, d1 d2 h, d2 d2 h).
  double A[4][5] = {
      {g122, -g112, 0.0, 0.0, 0.0},             // degeneracy relation
      {0.0, 0.0, g122, -g112, 0.0},             // its x2-derivative
      {0.0, 2.0 / x1, 1.0, 0.0, 4.0 * g112 / (x1 * x1)},  // (1,2) component
      {0.0, 0.0, 0.0, 1.0, 4.0 * g122 / (x1 * x1)},       // (2,2) component
  };
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (std::fabs(A[piv][col]) < 1e-14)
      throw degenerate_error("case (ii) closure system is singular");
    if (piv != col)
      for (int c = 0; c < 5; ++c) std::swap(A[piv][c], A[col][c]);
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (int c = 0; c < 5; ++c) A[r][c] -= f * A[col][c];
    }
  }
  double x[4];
  for (int i = 0; i < 4; ++i) x[i] = A[i][4] / A[i][i];
  CaseIIForcedGradient out;
  out.grad_h[0] = x[0];
  out.grad_h[1] = x[1];
  // grad h is forced to vanish identically, so every true solution would
  // have d2 d2 h = 0; the solved value is what the (2,2) equation demands.
  out.inconsistency = std::fabs(x[3]);
  return out;
}

AffineSolitonExample type_b_nonprojflat(double g122) {
  AffineSolitonExample ex;
  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comps[k][i][j] = ex_const(0.0);
  comps[0][0][0] = over_x1(-1.0);
  comps[0][1][1] = over_x1(g122);
  ex.D = make_affine({"x1", "x2"}, comps);
  ex.h = ex_add(ex_mul(ex_const(-4.0), ex_ln(ex_var(0))), ex_var(1));
  return ex;
}

RankTwoExample rank_two_family(double b, double c, int sign) {
  if (sign != 1 && sign != -1)
    throw domain_error("rank-two family sign must be +1 or -1");
  if (1.0 + 2.0 * b <= 0.0)
    throw domain_error("rank-two family needs 1 + 2b > 0");
  if (b == 0.0 || c == 0.0)
    throw domain_error("rank-two family needs b != 0 and c != 0");
  RankTwoExample ex;
  ex.b = b;
  ex.c = c;
  ex.a = b + sign * std::sqrt(1.0 + 2.0 * b);
  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comps[k][i][j] = ex_const(0.0);
  comps[0][0][0] = over_x1(ex.a);
  comps[1][0][1] = comps[1][1][0] = over_x1(b);
  comps[0][1][1] = over_x1(c);
  ex.D = make_affine({"x1", "x2"}, comps);
  double M = 2.0 * (ex.a - b - 1.0);
  ex.h = ex_mul(ex_const(M), ex_ln(ex_var(0)));
  double r11 = b * (1.0 + ex.a - b);
  double r22 = c * (ex.a - b - 1.0);
  ExprPtr inv2 = ex_pow(ex_var(0), -2, 1);
  ex.ricci_metric = make_metric(
      {"x1", "x2"},
      std::vector<std::vector<ExprPtr>>{
          {ex_mul(ex_const(r11), inv2), ex_const(0.0)},
          {ex_const(0.0), ex_mul(ex_const(r22), inv2)}});
  ex.tau_expected = (1.0 - sign * std::sqrt(1.0 + 2.0 * b)) / (b * b);
  return ex;
}

AffineSolitonExample opozda_family(const ExprPtr& g112_of_x2, double alpha,
                                   double beta, double kappa, double x2lo,
                                   double x2hi) {
  if (kappa == 0.0) throw domain_error("opozda family needs kappa != 0");
  if (!g112_of_x2) throw shape_error("null Gamma^1_12 expression");
  // The construction needs Gamma^1_12 to be a function of x2 alone.
  for (double t : {x2lo, 0.5 * (x2lo + x2hi), x2hi}) {
    double pt[2] = {0.7, t};
    Jet j = eval_jet(g112_of_x2, 2, 1, pt);
    std::array<int, 4> e1{1, 0, 0, 0};
    if (std::fabs(j.coeff(e1)) > 1e-12 * std::max(1.0, std::fabs(j.value())))
      throw domain_error("Gamma^1_12 must depend on x2 only");
  }

  ExprPtr Xi = ex_antideriv(g112_of_x2, 1, 0.0, x2lo, x2hi);
  ExprPtr hhat = ex_mul(ex_const(kappa), ex_exp(Xi));

  // Gamma^1_22 = (2 alpha / kappa) exp(x1 hhat / 2 - Xi) + beta
  //              + x1 (G^2 + G').
  ExprPtr expo = ex_sub(ex_mul(ex_mul(ex_var(0), hhat), ex_const(0.5)), Xi);
  ExprPtr g122 = ex_add(
      ex_add(ex_mul(ex_const(2.0 * alpha / kappa), ex_exp(expo)),
             ex_const(beta)),
      ex_mul(ex_var(0), ex_add(ex_mul(g112_of_x2, g112_of_x2),
                               ex_deriv(g112_of_x2, 1))));

  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comps[k][i][j] = ex_const(0.0);
  comps[0][0][1] = comps[0][1][0] = g112_of_x2;
  comps[0][1][1] = g122;

  AffineSolitonExample ex;
  ex.D = make_affine({"x1", "x2"}, comps);
  ExprPtr ttilde;
  if (beta == 0.0) {
    ttilde = ex_const(0.0);
  } else {
    ExprPtr tp = ex_antideriv(ex_mul(ex_const(beta), hhat), 1, 0.0, x2lo, x2hi);
    ttilde = ex_antideriv(tp, 1, 0.0, x2lo, x2hi);
  }
  ex.h = ex_add(ttilde, ex_mul(ex_var(0), hhat));
  return ex;
}

}  // namespace grs
