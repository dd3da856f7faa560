#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "grs/soliton.hpp"
#include "oracles.hpp"

using namespace grs;

namespace {

// Cigar surface: g = (dx^2 + dy^2)/(1 + x^2 + y^2), f = -ln(1 + x^2 + y^2)
// is a steady soliton; tau = 4/(1+r^2) and tau + |grad f|^2 = 4 everywhere.
MetricField cigar() {
  return make_metric({"x1", "x2"},
                     std::vector<std::vector<std::string>>{
                         {"1/(1+x1^2+x2^2)", "0"}, {"0", "1/(1+x1^2+x2^2)"}});
}

ExprPtr cigar_potential() {
  return parse_expr("-ln(1+x1^2+x2^2)", {"x1", "x2"});
}

// Flat neutral pairing in coordinates (x1, x2, x3, x4): g(d1,d3)=g(d2,d4)=1.
MetricField flat_neutral() {
  std::vector<std::vector<std::string>> comps(4, std::vector<std::string>(4, "0"));
  comps[0][2] = comps[2][0] = "1";
  comps[1][3] = comps[3][1] = "1";
  return make_metric({"x1", "x2", "x3", "x4"}, comps);
}

// Lorentzian pp-wave 2 du dv + a(u)(y1^2 + y2^2) du^2 + dy1^2 + dy2^2 with
// a(u) = u. Hand values: rho_uu = -2a, tau = 0, W = 0, and f with f'' = 2a
// solves the steady soliton equation with null gradient f' d_v.
MetricField ppwave() {
  std::vector<std::vector<std::string>> comps(4, std::vector<std::string>(4, "0"));
  comps[0][0] = "u*(y1^2+y2^2)";
  comps[0][1] = comps[1][0] = "1";
  comps[2][2] = comps[3][3] = "1";
  return make_metric({"u", "v", "y1", "y2"}, comps);
}

}  // namespace

TEST_CASE("cigar surface solves the steady soliton equation") {
  MetricField m = cigar();
  ExprPtr f = cigar_potential();
  oracle::Rng rng(90001);
  std::vector<std::array<double, 4>> pts;
  for (int t = 0; t < 6; ++t)
    pts.push_back({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), 0, 0});
  for (const auto& pt : pts) {
    CurvatureData cd = analyze(m, pt.data());
    SolitonResidual sr = soliton_residual(cd, f, 0.0);
    CHECK(sr.residual < 1e-12 * sr.scale);
    double r2 = pt[0] * pt[0] + pt[1] * pt[1];
    CHECK(cd.tau == doctest::Approx(4.0 / (1.0 + r2)).epsilon(1e-12));
    CHECK(cd.tau + grad_norm2(cd, f) == doctest::Approx(4.0).epsilon(1e-12));
  }
  SolitonIdentityResiduals ir = soliton_identities(m, f, 0.0, pts);
  CHECK(ir.grad_tau < 1e-10 * ir.scale);
  CHECK(ir.first_integral < 1e-10 * ir.scale);
  CHECK(ir.curvature_contraction < 1e-10 * ir.scale);

  // The equation fails for a wrong soliton constant.
  double pt[2] = {0.5, 0.3};
  CurvatureData cd = analyze(m, pt);
  CHECK(soliton_residual(cd, f, 0.4).residual > 0.1);
}

TEST_CASE("gradient classification on the neutral gaussian soliton") {
  std::vector<std::vector<std::string>> comps(4, std::vector<std::string>(4, "0"));
  comps[0][0] = comps[1][1] = "1";
  comps[2][2] = comps[3][3] = "-1";
  MetricField m = make_metric({"x1", "x2", "x3", "x4"}, comps);
  double lam = 0.7;
  ExprPtr f = parse_expr("0.35*(x1^2+x2^2-x3^2-x4^2)", {"x1", "x2", "x3", "x4"});

  std::vector<std::array<double, 4>> pts = {{1.0, 0.2, 0.4, 0.1},
                                            {0.3, -0.7, 1.1, 0.5},
                                            {-0.6, 0.6, 0.2, -0.9}};
  for (const auto& pt : pts) {
    CurvatureData cd = analyze(m, pt.data());
    CHECK(soliton_residual(cd, f, lam).residual < 1e-13);
  }
  SolitonIdentityResiduals ir = soliton_identities(m, f, lam, pts);
  CHECK(ir.grad_tau < 1e-12);
  CHECK(ir.first_integral < 1e-12);
  CHECK(ir.curvature_contraction < 1e-12);

  auto cls_at = [&](double a, double b, double c, double d) {
    double pt[4] = {a, b, c, d};
    CurvatureData cd = analyze(m, pt);
    return classify_gradient(cd, f);
  };
  CHECK(cls_at(1, 0, 0, 0).cls == GradientClass::spacelike);
  CHECK(cls_at(0, 0, 1, 0).cls == GradientClass::timelike);
  CHECK(cls_at(1, 0, 1, 0).cls == GradientClass::isotropic);
  CHECK(cls_at(0, 0, 0, 0).cls == GradientClass::zero);
  CHECK(cls_at(1, 0, 0, 0).norm2 == doctest::Approx(lam * lam).epsilon(1e-12));
}

TEST_CASE("pp-wave hand values: ricci, nilpotency, steady soliton") {
  MetricField m = ppwave();
  ExprPtr f = parse_expr("u^3/3", {"u", "v", "y1", "y2"});
  oracle::Rng rng(90002);
  std::vector<std::array<double, 4>> pts;
  for (int t = 0; t < 5; ++t)
    pts.push_back({rng.uniform(0.3, 1.2), rng.uniform(-1.0, 1.0),
                   rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});

  for (const auto& pt : pts) {
    CurvatureData cd = analyze(m, pt.data());
    Mat r = ricci(m, pt.data());
    CHECK(r.m[0][0] == doctest::Approx(-2.0 * pt[0]).epsilon(1e-12));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i + j > 0) CHECK(std::fabs(r.m[i][j]) < 1e-13);
    CHECK(std::fabs(cd.tau) < 1e-13);
    double wmax = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            wmax = std::max(wmax, std::fabs(cd.W[i][j][k][l]));
    CHECK(wmax < 1e-12);

    NilpotencyCheck nc = ricci_nilpotent(cd);
    CHECK(nc.op_norm == doctest::Approx(2.0 * pt[0]).epsilon(1e-12));
    CHECK(nc.op_sq_norm < 1e-13);

    CHECK(soliton_residual(cd, f, 0.0).residual < 1e-12);
    CHECK(classify_gradient(cd, f).cls == GradientClass::isotropic);

    // Lorentzian signature: the complement of the null pair is definite, so
    // the adapted null frame cannot exist.
    CHECK_THROWS_AS(null_frame_b(cd, f), domain_error);
  }
  SolitonIdentityResiduals ir = soliton_identities(m, f, 0.0, pts);
  CHECK(ir.grad_tau < 1e-11 * ir.scale);
  CHECK(ir.first_integral < 1e-11 * ir.scale);
  CHECK(ir.curvature_contraction < 1e-11 * ir.scale);
}

TEST_CASE("ricci operator on the round 4-sphere is 3 id, not nilpotent") {
  std::vector<std::vector<std::string>> comps(4, std::vector<std::string>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      comps[i][j] = i == j ? "1/(1+(x1^2+x2^2+x3^2+x4^2)/4)^2" : "0";
  MetricField s4 = make_metric({"x1", "x2", "x3", "x4"}, comps);
  double p[4] = {0.2, -0.5, 0.7, 0.1};
  CurvatureData cd = analyze(s4, p);
  NilpotencyCheck nc = ricci_nilpotent(cd);
  CHECK(nc.op_norm == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(nc.op_sq_norm == doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("adapted null frame on the flat neutral pairing") {
  MetricField m = flat_neutral();
  ExprPtr f = parse_expr("x1", {"x1", "x2", "x3", "x4"});
  double p[4] = {0.3, 0.1, -0.2, 0.5};
  CurvatureData cd = analyze(m, p);
  CHECK(classify_gradient(cd, f).cls == GradientClass::isotropic);
  NullFrameB nf = null_frame_b(cd, f);
  const double* e[4] = {nf.gradf, nf.u, nf.v, nf.w};
  double want[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(pair_g(cd, e[a], e[b]) == doctest::Approx(want[a][b]).epsilon(1e-12));
  NullFrameRicciShape sh = nullframe_ricci_shape(cd, nf);
  CHECK(sh.residual < 1e-13);
  CHECK(std::fabs(sh.a) < 1e-13);
  CHECK(std::fabs(sh.b) < 1e-13);
  CHECK(std::fabs(sh.c) < 1e-13);

  // Non-null gradient is rejected.
  ExprPtr f2 = parse_expr("x1+x3", {"x1", "x2", "x3", "x4"});
  CHECK_THROWS_AS(null_frame_b(cd, f2), domain_error);
}

TEST_CASE("unit gradient eigenframe on the neutral gaussian") {
  std::vector<std::vector<std::string>> comps(4, std::vector<std::string>(4, "0"));
  comps[0][0] = comps[1][1] = "1";
  comps[2][2] = comps[3][3] = "-1";
  MetricField m = make_metric({"x1", "x2", "x3", "x4"}, comps);
  double lam = -0.4;
  ExprPtr f = parse_expr("-0.2*(x1^2+x2^2-x3^2-x4^2)", {"x1", "x2", "x3", "x4"});
  double p[4] = {0.9, 0.1, 0.2, -0.3};  // spacelike gradient here
  CurvatureData cd = analyze(m, p);
  EigenFrame ef = nonisotropic_eigenstructure(cd, f);
  // First frame vector is the normalized gradient.
  Vec gr = gradient(cd, f);
  double nrm = std::sqrt(std::fabs(grad_norm2(cd, f)));
  for (int i = 0; i < 4; ++i)
    CHECK(ef.frame.e[0][i] == doctest::Approx(gr.v[i] / nrm).epsilon(1e-12));
  // Hes f = lambda g turns into lambda eps_a on the diagonal.
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double want = (a == b) ? lam * ef.frame.eps[a] : 0.0;
      CHECK(ef.hes_frame[a][b] == doctest::Approx(want).epsilon(1e-12));
      CHECK(std::fabs(ef.ric_frame[a][b]) < 1e-13);
    }
  double q[4] = {1.0, 0.0, 1.0, 0.0};  // isotropic gradient here
  CurvatureData cdq = analyze(m, q);
  CHECK_THROWS_AS(nonisotropic_eigenstructure(cdq, f), domain_error);
}
