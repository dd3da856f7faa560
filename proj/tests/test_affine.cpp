#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "grs/affine.hpp"
#include "grs/curvature.hpp"
#include "oracles.hpp"

using namespace grs;

namespace {

ExprPtr poly_expr2(oracle::Rng& rng, int max_deg, int nterms, double amp) {
  ExprPtr acc = ex_const(0.0);
  for (int t = 0; t < nterms; ++t) {
    ExprPtr term = ex_const(rng.uniform(-amp, amp));
    int deg = rng.integer(0, max_deg);
    for (int k = 0; k < deg; ++k)
      term = ex_mul(std::move(term), ex_var(rng.integer(0, 1)));
    acc = ex_add(std::move(acc), std::move(term));
  }
  return acc;
}

AffineConnection2 random_connection(oracle::Rng& rng) {
  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        ExprPtr e = poly_expr2(rng, 3, 4, 0.7);
        comps[k][i][j] = e;
        comps[k][j][i] = e;
      }
  return make_affine({"x1", "x2"}, comps);
}

double max_abs2(const double a[2][2]) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m = std::max(m, std::fabs(a[i][j]));
  return m;
}

}  // namespace

TEST_CASE("affine curvature matches a finite difference oracle") {
  oracle::Rng rng(45210);
  for (int trial = 0; trial < 6; ++trial) {
    AffineConnection2 D = random_connection(rng);
    double p[2] = {rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9)};
    AffineData ad = affine_analyze(D, p);

    double gam[2][2][2];
    double dgam[2][2][2][2];
    std::array<double, 4> P{p[0], p[1], 0.0, 0.0};
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          oracle::Fn fn = [&D, k, i, j](const std::array<double, 4>& q) {
            return eval_value(D.Gam[k][i][j], 2, q.data());
          };
          gam[k][i][j] = fn(P);
          for (int m = 0; m < 2; ++m)
            dgam[m][k][i][j] = oracle::fd_first(fn, P, m, 0.02);
        }

    double R[2][2][2][2];
    double scale = 1.0;
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) {
            double acc = dgam[i][l][j][k] - dgam[j][l][i][k];
            for (int m = 0; m < 2; ++m)
              acc += gam[l][i][m] * gam[m][j][k] -
                     gam[l][j][m] * gam[m][i][k];
            R[l][i][j][k] = acc;
            scale = std::max(scale, std::fabs(acc));
          }
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            CHECK(std::fabs(ad.R[l][i][j][k] - R[l][i][j][k]) < 1e-8 * scale);

    // ricci is the trace on the first pair of R^i_{ijk}
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double tr = R[0][0][j][k] + R[1][1][j][k];
        CHECK(std::fabs(ad.Ric[j][k] - tr) < 1e-8 * scale);
      }

    // covariant derivative of ricci against differences of Ric itself
    for (int m = 0; m < 2; ++m)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          oracle::Fn fn = [&D, j, k](const std::array<double, 4>& q) {
            double qq[2] = {q[0], q[1]};
            return affine_analyze(D, qq).Ric[j][k];
          };
          double want = oracle::fd_first(fn, P, m, 0.02);
          CHECK(std::fabs(ad.dRic[m][j][k] - want) < 1e-7 * scale);
          for (int l = 0; l < 2; ++l)
            want -= gam[l][m][j] * ad.Ric[l][k] + gam[l][m][k] * ad.Ric[j][l];
          CHECK(std::fabs(ad.NRic[m][j][k] - want) < 1e-7 * scale);
        }
  }
}

TEST_CASE("surface curvature is determined by ricci") {
  // R^l_{ijk} = delta^l_i ric_{jk} - delta^l_j ric_{ik} for every
  // torsion-free connection on a surface.
  oracle::Rng rng(45211);
  for (int trial = 0; trial < 8; ++trial) {
    AffineConnection2 D = random_connection(rng);
    double p[2] = {rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    AffineData ad = affine_analyze(D, p);
    double scale = std::max(1.0, max_abs2(ad.Ric));
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) {
            double want = (l == i ? ad.Ric[j][k] : 0.0) -
                          (l == j ? ad.Ric[i][k] : 0.0);
            CHECK(std::fabs(ad.R[l][i][j][k] - want) < 1e-12 * scale);
          }
  }
}

TEST_CASE("affine hessian against hand values and differences") {
  // Gamma^1_22 = -x1 and h = x1^2: Hes = diag(2, 2 x1^2).
  AffineConnection2 D = make_affine({"x1", "x2"}, {{0, 1, 1, "-x1"}});
  ExprPtr h = parse_expr("x1^2", {"x1", "x2"});
  double p[2] = {0.8, 0.3};
  Mat hes = affine_hessian(D, h, p);
  CHECK(hes.m[0][0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(hes.m[0][1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hes.m[1][0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hes.m[1][1] == doctest::Approx(2.0 * 0.8 * 0.8).epsilon(1e-12));

  oracle::Rng rng(45212);
  for (int trial = 0; trial < 4; ++trial) {
    AffineConnection2 Dr = random_connection(rng);
    ExprPtr hr = poly_expr2(rng, 3, 5, 1.0);
    double q[2] = {rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
    std::array<double, 4> Q{q[0], q[1], 0.0, 0.0};
    oracle::Fn fh = [&hr](const std::array<double, 4>& z) {
      return eval_value(hr, 2, z.data());
    };
    Mat got = affine_hessian(Dr, hr, q);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        std::array<int, 4> alpha{};
        alpha[i] += 1;
        alpha[j] += 1;
        double want = oracle::fd_partial(fh, Q, alpha, 0.02);
        for (int k = 0; k < 2; ++k) {
          std::array<int, 4> e1{};
          e1[k] = 1;
          want -= eval_value(Dr.Gam[k][i][j], 2, q) *
                  oracle::fd_partial(fh, Q, e1, 0.02);
        }
        CHECK(std::fabs(got.m[i][j] - want) < 1e-6);
      }
  }
}

TEST_CASE("constant christoffel solitons in the rank-one normal form") {
  // (g111, g211, g212, g222) = (2, 0, 1, 0): ricci = diag(1, 0), h = x1.
  AffineSolitonExample ex = type_a_soliton(2.0, 0.0, 1.0, 0.0);
  double p[2] = {0.4, -0.7};
  AffineData ad = affine_analyze(ex.D, p);
  CHECK(ad.Ric[0][0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::fabs(ad.Ric[0][1]) < 1e-13);
  CHECK(std::fabs(ad.Ric[1][0]) < 1e-13);
  CHECK(std::fabs(ad.Ric[1][1]) < 1e-13);
  CHECK(eval_value(ex.h, 2, p) == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(ricci_rank(ad).rank == 1);

  oracle::Rng rng(45213);
  for (int trial = 0; trial < 12; ++trial) {
    double g111 = rng.uniform(-1.5, 1.5);
    if (trial % 3 == 0) g111 = 0.0;  // exercise the quadratic branch
    AffineSolitonExample e2 = type_a_soliton(g111, rng.uniform(-1.5, 1.5),
                                             rng.uniform(-1.5, 1.5),
                                             rng.uniform(-1.5, 1.5));
    double q[2] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    AffineSolitonResidual r = affine_soliton_residual(e2.D, e2.h, q);
    CHECK(r.residual < 1e-12 * std::max(1.0, r.scale));
    AffineData a2 = affine_analyze(e2.D, q);
    CHECK(ricci_rank(a2).rank <= 1);
  }
}

TEST_CASE("parallel ricci variant of the rank-one form") {
  AffineSolitonExample ex = type_a_locally_symmetric(1.0, 0.0, 1.0);
  double p[2] = {0.6, 0.2};
  AffineData ad = affine_analyze(ex.D, p);
  CHECK(ad.Ric[0][0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::fabs(ad.Ric[1][1]) < 1e-13);
  double nmax = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) nmax = std::max(nmax, std::fabs(ad.NRic[m][i][j]));
  CHECK(nmax < 1e-13);
  CHECK(eval_value(ex.h, 2, p) == doctest::Approx(-0.36).epsilon(1e-12));
  AffineSolitonResidual r = affine_soliton_residual(ex.D, ex.h, p);
  CHECK(r.residual < 1e-13);
}

TEST_CASE("homogeneous rank-one soliton with recurrent ricci") {
  CHECK_THROWS_AS(type_b_case_i(-1.0, 1.0), domain_error);

  AffineSolitonExample ex = type_b_case_i(1.0, 1.0);
  oracle::Rng rng(45214);
  for (int trial = 0; trial < 6; ++trial) {
    double p[2] = {rng.uniform(0.2, 1.8), rng.uniform(-1.0, 1.0)};
    double x1 = p[0];
    AffineData ad = affine_analyze(ex.D, p);
    CHECK(ad.Ric[0][0] == doctest::Approx(1.0 / (x1 * x1)).epsilon(1e-12));
    CHECK(std::fabs(ad.Ric[0][1]) < 1e-12);
    CHECK(std::fabs(ad.Ric[1][0]) < 1e-12);
    CHECK(std::fabs(ad.Ric[1][1]) < 1e-12);
    CHECK(eval_value(ex.h, 2, p) == doctest::Approx(std::log(x1)).epsilon(1e-12));

    AffineSolitonResidual r = affine_soliton_residual(ex.D, ex.h, p);
    CHECK(r.residual < 1e-12 * std::max(1.0, r.scale));

    RecurrenceFit fit = recurrence_fit(ad);
    CHECK(fit.omega[0] == doctest::Approx(-4.0 / x1).epsilon(1e-10));
    CHECK(std::fabs(fit.omega[1]) < 1e-12 * std::max(1.0, fit.scale));
    CHECK(fit.residual < 1e-12 * std::max(1.0, fit.scale));

    ProjectiveFlatness pf = projective_flatness_residuals(ad);
    CHECK(pf.ricci_antisym < 1e-12 * pf.scale);
    CHECK(pf.nabla_sym < 1e-12 * pf.scale);
  }
}

TEST_CASE("degenerate projectively flat branch admits no potential") {
  CHECK_THROWS_AS(type_b_case_ii(1.0, 0.0), domain_error);
  CHECK_THROWS_AS(type_b_case_ii(-4.0, 1.0), domain_error);

  double g111 = 1.0, g122 = 1.0;
  AffineConnection2 D = type_b_case_ii(g111, g122);
  // coefficient table for the defaults
  double unit[2] = {1.0, 0.0};
  CHECK(eval_value(D.Gam[0][0][1], 2, unit) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(eval_value(D.Gam[1][0][1], 2, unit) == doctest::Approx(-6.0).epsilon(1e-13));
  CHECK(eval_value(D.Gam[1][1][1], 2, unit) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(eval_value(D.Gam[1][0][0], 2, unit) == doctest::Approx(-10.0).epsilon(1e-13));

  oracle::Rng rng(45215);
  for (int trial = 0; trial < 6; ++trial) {
    double p[2] = {rng.uniform(0.2, 1.8), rng.uniform(-1.0, 1.0)};
    double s = p[0] * p[0];
    AffineData ad = affine_analyze(D, p);
    CHECK(ad.Ric[0][0] * s == doctest::Approx(-8.0).epsilon(1e-11));
    CHECK(ad.Ric[0][1] * s == doctest::Approx(-4.0).epsilon(1e-11));
    CHECK(ad.Ric[1][0] * s == doctest::Approx(-4.0).epsilon(1e-11));
    CHECK(ad.Ric[1][1] * s == doctest::Approx(-2.0).epsilon(1e-11));
    CHECK(ricci_rank(ad).rank == 1);

    ProjectiveFlatness pf = projective_flatness_residuals(ad);
    CHECK(pf.ricci_antisym < 1e-11 * pf.scale);
    CHECK(pf.nabla_sym < 1e-11 * pf.scale);

    CaseIIForcedGradient fg = type_b_case_ii_forced_gradient(g111, g122, p);
    CHECK(std::fabs(fg.grad_h[0]) < 1e-12);
    CHECK(std::fabs(fg.grad_h[1]) < 1e-12);
    CHECK(fg.inconsistency == doctest::Approx(4.0 / s).epsilon(1e-10));
  }

  // the same conclusion off the default parameters
  for (int trial = 0; trial < 4; ++trial) {
    double a = oracle::Rng(900 + trial).uniform(-2.0, 2.0);
    double c = oracle::Rng(950 + trial).uniform(0.3, 2.0);
    double p[2] = {0.7, 0.4};
    CaseIIForcedGradient fg = type_b_case_ii_forced_gradient(a, c, p);
    CHECK(std::fabs(fg.grad_h[0]) < 1e-12);
    CHECK(std::fabs(fg.grad_h[1]) < 1e-12);
    CHECK(fg.inconsistency == doctest::Approx(4.0 * c / 0.49).epsilon(1e-10));
  }
}

TEST_CASE("projective flatness detected through the polynomial criterion") {
  // For homogeneous coefficients gamma/x1 the two polynomial obstructions
  //   P1 = 2 g112 g212 - 3 g211 g122 + (2 + g111) g222
  //   P2 = g112^2 - 2 g112 g222 + g122 (1 - g111 + 2 g212)
  // vanish exactly when the connection is projectively flat. Cross-check
  // the measured residuals against the polynomials on all three families.
  auto polys = [](double g111, double g112, double g122, double g211,
                  double g212, double g222, double& P1, double& P2) {
    P1 = 2.0 * g112 * g212 - 3.0 * g211 * g122 + (2.0 + g111) * g222;
    P2 = g112 * g112 - 2.0 * g112 * g222 + g122 * (1.0 - g111 + 2.0 * g212);
  };
  double p[2] = {0.9, 0.5};

  double P1, P2;
  // case (i): gamma^1_11 = 1, gamma^2_12 = 1
  polys(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, P1, P2);
  CHECK(P1 == 0.0);
  CHECK(P2 == 0.0);

  // case (ii) defaults
  polys(1.0, 2.0, 1.0, -10.0, -6.0, -2.0, P1, P2);
  CHECK(std::fabs(P1) < 1e-13);
  CHECK(std::fabs(P2) < 1e-13);

  // the non projectively flat example has P2 = 2 g122
  polys(-1.0, 0.0, 1.0, 0.0, 0.0, 0.0, P1, P2);
  CHECK(P1 == 0.0);
  CHECK(P2 == doctest::Approx(2.0).epsilon(1e-13));
  AffineSolitonExample ex = type_b_nonprojflat(1.0);
  ProjectiveFlatness pf = projective_flatness_residuals(affine_analyze(ex.D, p));
  CHECK(pf.nabla_sym > 1e-3);
}

TEST_CASE("recurrent ricci soliton outside the projectively flat class") {
  AffineSolitonExample ex = type_b_nonprojflat(1.0);
  oracle::Rng rng(45216);
  for (int trial = 0; trial < 6; ++trial) {
    double p[2] = {rng.uniform(0.2, 1.8), rng.uniform(-1.0, 1.0)};
    double x1 = p[0];
    AffineData ad = affine_analyze(ex.D, p);
    CHECK(std::fabs(ad.Ric[0][0]) < 1e-12);
    CHECK(std::fabs(ad.Ric[0][1]) < 1e-12);
    CHECK(std::fabs(ad.Ric[1][0]) < 1e-12);
    CHECK(ad.Ric[1][1] == doctest::Approx(-2.0 / (x1 * x1)).epsilon(1e-12));

    double want_h = -4.0 * std::log(x1) + p[1];
    CHECK(eval_value(ex.h, 2, p) == doctest::Approx(want_h).epsilon(1e-12));
    AffineSolitonResidual r = affine_soliton_residual(ex.D, ex.h, p);
    CHECK(r.residual < 1e-12 * std::max(1.0, r.scale));

    RecurrenceFit fit = recurrence_fit(ad);
    CHECK(fit.omega[0] == doctest::Approx(-2.0 / x1).epsilon(1e-10));
    CHECK(std::fabs(fit.omega[1]) < 1e-12 * std::max(1.0, fit.scale));
    CHECK(fit.residual < 1e-12 * std::max(1.0, fit.scale));

    ProjectiveFlatness pf = projective_flatness_residuals(ad);
    CHECK(pf.ricci_antisym < 1e-12 * pf.scale);
    CHECK(pf.nabla_sym > 1e-3);
  }
}

TEST_CASE("rank-two homogeneous family") {
  CHECK_THROWS_AS(rank_two_family(1.0, 1.0, 2), domain_error);
  CHECK_THROWS_AS(rank_two_family(-0.5, 1.0, 1), domain_error);
  CHECK_THROWS_AS(rank_two_family(0.0, 1.0, 1), domain_error);
  CHECK_THROWS_AS(rank_two_family(1.0, 0.0, 1), domain_error);

  double s3 = std::sqrt(3.0);
  RankTwoExample plus = rank_two_family(1.0, 1.0, +1);
  RankTwoExample minus = rank_two_family(1.0, 1.0, -1);
  CHECK(plus.a == doctest::Approx(1.0 + s3).epsilon(1e-14));
  CHECK(plus.tau_expected == doctest::Approx(1.0 - s3).epsilon(1e-14));
  CHECK(minus.tau_expected == doctest::Approx(1.0 + s3).epsilon(1e-14));

  oracle::Rng rng(45217);
  for (int trial = 0; trial < 5; ++trial) {
    double p[2] = {rng.uniform(0.2, 1.8), rng.uniform(-1.0, 1.0)};
    double x1 = p[0];
    AffineData ad = affine_analyze(plus.D, p);
    CHECK(ad.Ric[0][0] == doctest::Approx((1.0 + s3) / (x1 * x1)).epsilon(1e-10));
    CHECK(ad.Ric[1][1] == doctest::Approx((s3 - 1.0) / (x1 * x1)).epsilon(1e-10));
    CHECK(std::fabs(ad.Ric[0][1]) < 1e-12);
    CHECK(std::fabs(ad.Ric[1][0]) < 1e-12);
    CHECK(ricci_rank(ad).rank == 2);

    AffineSolitonResidual r = affine_soliton_residual(plus.D, plus.h, p);
    CHECK(r.residual < 1e-11 * std::max(1.0, r.scale));
    r = affine_soliton_residual(minus.D, minus.h, p);
    CHECK(r.residual < 1e-11 * std::max(1.0, r.scale));

    // the potentials do not transfer between the two branches
    r = affine_soliton_residual(plus.D, minus.h, p);
    CHECK(r.residual > 0.1);
    r = affine_soliton_residual(minus.D, plus.h, p);
    CHECK(r.residual > 0.1);

    // scalar curvature of ricci read as a metric matches the closed form
    CHECK(scalar_curvature(plus.ricci_metric, p) ==
          doctest::Approx(1.0 - s3).epsilon(1e-8));
    CHECK(scalar_curvature(minus.ricci_metric, p) ==
          doctest::Approx(1.0 + s3).epsilon(1e-8));
  }

  // a second parameter point, scalar curvature still matches the closed form
  RankTwoExample other = rank_two_family(0.7, -1.3, -1);
  double q[2] = {1.1, 0.3};
  CHECK(scalar_curvature(other.ricci_metric, q) ==
        doctest::Approx(other.tau_expected).epsilon(1e-8));
  AffineSolitonResidual r2 = affine_soliton_residual(other.D, other.h, q);
  CHECK(r2.residual < 1e-11 * std::max(1.0, r2.scale));
}

TEST_CASE("parallel kernel family") {
  CHECK_THROWS_AS(opozda_family(ex_const(0.0), 1.0, 0.0, 0.0, -1.0, 2.0),
                  domain_error);
  CHECK_THROWS_AS(opozda_family(ex_var(0), 1.0, 0.0, 1.0, -1.0, 2.0),
                  domain_error);

  // alpha = 1, beta = 0, kappa = 1, G = 0: Gamma^1_22 = 2 e^{x1/2}, h = x1.
  AffineSolitonExample ex = opozda_family(ex_const(0.0), 1.0, 0.0, 1.0, -1.0, 2.0);
  oracle::Rng rng(45218);
  for (int trial = 0; trial < 5; ++trial) {
    double p[2] = {rng.uniform(0.2, 1.8), rng.uniform(-0.8, 1.8)};
    CHECK(eval_value(ex.D.Gam[0][1][1], 2, p) ==
          doctest::Approx(2.0 * std::exp(p[0] / 2.0)).epsilon(1e-12));
    CHECK(eval_value(ex.h, 2, p) == doctest::Approx(p[0]).epsilon(1e-12));
    AffineData ad = affine_analyze(ex.D, p);
    CHECK(ad.Ric[1][1] == doctest::Approx(std::exp(p[0] / 2.0)).epsilon(1e-10));
    AffineSolitonResidual r = affine_soliton_residual(ex.D, ex.h, p);
    CHECK(r.residual < 1e-10 * std::max(1.0, r.scale));
    // the kernel direction d1 is parallel
    for (int i = 0; i < 2; ++i) CHECK(ad.Gam[1][i][0] == 0.0);
  }

  // generic parameters exercise the quadrature-backed expressions
  ExprPtr G = parse_expr("0.3*x2", {"x1", "x2"});
  AffineSolitonExample gen = opozda_family(G, 0.5, 0.7, 1.3, -1.0, 2.0);
  for (int trial = 0; trial < 4; ++trial) {
    double p[2] = {rng.uniform(0.2, 1.5), rng.uniform(-0.8, 1.8)};
    AffineSolitonResidual r = affine_soliton_residual(gen.D, gen.h, p);
    CHECK(r.residual < 1e-8 * std::max(1.0, r.scale));
    AffineData ad = affine_analyze(gen.D, p);
    for (int i = 0; i < 2; ++i) CHECK(ad.Gam[1][i][0] == 0.0);
    CHECK(std::fabs(ad.Ric[0][0]) < 1e-10);
    CHECK(std::fabs(ad.Ric[0][1]) < 1e-10);
    CHECK(std::fabs(ad.Ric[1][0]) < 1e-10);
  }
}

TEST_CASE("parallel ricci within the parallel kernel shape") {
  // Gamma^1_12 = c, Gamma^1_22 = x2: ricci = diag(0, -c^2) is parallel.
  double c = 0.8;
  AffineConnection2 D = make_affine(
      {"x1", "x2"}, {{0, 0, 1, "0.8"}, {0, 1, 1, "x2"}});
  double p[2] = {0.5, 1.1};
  AffineData ad = affine_analyze(D, p);
  CHECK(ad.Ric[1][1] == doctest::Approx(-c * c).epsilon(1e-13));
  CHECK(std::fabs(ad.Ric[0][0]) < 1e-13);
  double nmax = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) nmax = std::max(nmax, std::fabs(ad.NRic[m][i][j]));
  CHECK(nmax < 1e-12);

  // Gamma^1_22 = x1 x2 breaks parallelism: ric_22 = x2 - c^2 varies.
  AffineConnection2 D2 = make_affine(
      {"x1", "x2"}, {{0, 0, 1, "0.8"}, {0, 1, 1, "x1*x2"}});
  AffineData ad2 = affine_analyze(D2, p);
  CHECK(ad2.Ric[1][1] == doctest::Approx(p[1] - c * c).epsilon(1e-13));
  double nmax2 = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        nmax2 = std::max(nmax2, std::fabs(ad2.NRic[m][i][j]));
  CHECK(nmax2 > 0.5);
}

TEST_CASE("constructor validation and degenerate fits") {
  CHECK_THROWS_AS(make_affine({"x1"}, std::vector<GammaEntry>{}), shape_error);
  CHECK_THROWS_AS(make_affine({"x1", "x2"}, {{2, 0, 0, "1"}}), shape_error);

  std::array<std::array<std::array<ExprPtr, 2>, 2>, 2> comps;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) comps[k][i][j] = ex_const(0.0);
  comps[0][0][1] = ex_const(1.0);  // mirror left at zero
  CHECK_THROWS_AS(make_affine({"x1", "x2"}, comps), shape_error);
  comps[0][0][1] = ex_const(0.0);
  comps[1][1][1] = ex_var(3);  // beyond the chart
  CHECK_THROWS_AS(make_affine({"x1", "x2"}, comps), shape_error);
  comps[1][1][1] = nullptr;
  CHECK_THROWS_AS(make_affine({"x1", "x2"}, comps), shape_error);

  // flat connection: ricci vanishes, no recurrence fit
  AffineConnection2 flat = make_affine({"x1", "x2"}, std::vector<GammaEntry>{});
  double p[2] = {0.3, 0.4};
  AffineData ad = affine_analyze(flat, p);
  CHECK(ricci_rank(ad).rank == 0);
  CHECK_THROWS_AS(recurrence_fit(ad), degenerate_error);
}
