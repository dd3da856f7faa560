#include "grs/frame.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace grs {

namespace {

double pair_val(const CurvatureData& cd, const double* x, const double* y) {
  double acc = 0.0;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j) acc += cd.g[i][j] * x[i] * y[j];
  return acc;
}

// Coefficient scale for the relative null test of w.
double pair_scale(const CurvatureData& cd, const double* w) {
  double acc = 0.0;
  for (int i = 0; i < cd.d; ++i)
    for (int j = 0; j < cd.d; ++j)
      acc += std::fabs(cd.g[i][j]) * std::fabs(w[i]) * std::fabs(w[j]);
  return acc;
}

bool is_null(double q, double scale) {
  return std::fabs(q) < 1e-8 * std::max(scale, 1e-12);
}

void frame_weyl(const CurvatureData& cd, const Frame& fr,
                double out[4][4][4][4]) {
  double t1[4][4][4][4], t2[4][4][4][4], t3[4][4][4][4];
  for (int a = 0; a < 4; ++a)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double acc = 0.0;
          for (int i = 0; i < 4; ++i) acc += fr.e[a][i] * cd.W[i][j][k][l];
          t1[a][j][k][l] = acc;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double acc = 0.0;
          for (int j = 0; j < 4; ++j) acc += fr.e[b][j] * t1[a][j][k][l];
          t2[a][b][k][l] = acc;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int l = 0; l < 4; ++l) {
          double acc = 0.0;
          for (int k = 0; k < 4; ++k) acc += fr.e[c][k] * t2[a][b][k][l];
          t3[a][b][c][l] = acc;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int e = 0; e < 4; ++e) {
          double acc = 0.0;
          for (int l = 0; l < 4; ++l) acc += fr.e[e][l] * t3[a][b][c][l];
          out[a][b][c][e] = acc;
        }
}

}  // namespace

Frame complete_frame(const CurvatureData& cd, const double (*seeds)[4],
                     const double* seed_eps, int nseed) {
  int d = cd.d;
  double u[4][4] = {};
  double eps[4] = {};
  for (int a = 0; a < nseed; ++a) {
    for (int i = 0; i < d; ++i) u[a][i] = seeds[a][i];
    eps[a] = seed_eps[a];
  }
  std::vector<std::array<double, 4>> rem(d);
  for (int c = 0; c < d; ++c) {
    rem[c] = {};
    rem[c][c] = 1.0;
    for (int a = 0; a < nseed; ++a) {
      double coef = pair_val(cd, rem[c].data(), u[a]);
      for (int i = 0; i < d; ++i) rem[c][i] -= eps[a] * coef * u[a][i];
    }
  }
  for (int a = nseed; a < d; ++a) {
    int best = -1;
    double bestq = 0.0;
    for (std::size_t c = 0; c < rem.size(); ++c) {
      double q = pair_val(cd, rem[c].data(), rem[c].data());
      if (is_null(q, pair_scale(cd, rem[c].data()))) continue;
      if (best < 0 || std::fabs(q) > std::fabs(bestq)) {
        best = static_cast<int>(c);
        bestq = q;
      }
    }
    if (best < 0) {
      // Every single candidate is null; some pair sum cannot be, or the
      // remaining span would be totally isotropic against nondegeneracy.
      int bi = -1, bj = -1;
      double bq = 0.0;
      for (std::size_t i = 0; i + 1 < rem.size(); ++i)
        for (std::size_t j = i + 1; j < rem.size(); ++j) {
          std::array<double, 4> s{};
          for (int t = 0; t < d; ++t) s[t] = rem[i][t] + rem[j][t];
          double q = pair_val(cd, s.data(), s.data());
          if (is_null(q, pair_scale(cd, s.data()))) continue;
          if (bi < 0 || std::fabs(q) > std::fabs(bq)) {
            bi = static_cast<int>(i);
            bj = static_cast<int>(j);
            bq = q;
          }
        }
      if (bi < 0)
        throw degenerate_error(
            "no non-null direction found while building an orthonormal frame");
      for (int t = 0; t < d; ++t) rem[bi][t] += rem[bj][t];
      best = bi;
      bestq = bq;
    }
    double nrm = std::sqrt(std::fabs(bestq));
    for (int i = 0; i < d; ++i) u[a][i] = rem[best][i] / nrm;
    eps[a] = bestq > 0.0 ? 1.0 : -1.0;
    rem.erase(rem.begin() + best);
    for (auto& w : rem) {
      double c = pair_val(cd, w.data(), u[a]);
      for (int i = 0; i < d; ++i) w[i] -= eps[a] * c * u[a][i];
    }
  }
  Frame fr;
  fr.d = d;
  for (int a = 0; a < d; ++a) {
    fr.eps[a] = eps[a];
    for (int i = 0; i < d; ++i) fr.e[a][i] = u[a][i];
  }
  return fr;
}

Frame orthonormal_frame(const CurvatureData& cd) {
  Frame un = complete_frame(cd, nullptr, nullptr, 0);
  int d = cd.d;
  Frame fr;
  fr.d = d;
  int order[4], n = 0;
  for (int a = 0; a < d; ++a)
    if (un.eps[a] > 0.0) order[n++] = a;
  for (int a = 0; a < d; ++a)
    if (un.eps[a] < 0.0) order[n++] = a;
  for (int a = 0; a < d; ++a) {
    fr.eps[a] = un.eps[order[a]];
    for (int i = 0; i < d; ++i) fr.e[a][i] = un.e[order[a]][i];
  }
  return fr;
}

DualitySplit duality_split(const CurvatureData& cd) {
  if (cd.d != 4)
    throw shape_error("duality split requires a 4-dimensional chart");
  DualitySplit ds;
  ds.frame = orthonormal_frame(cd);
  const Frame& fr = ds.frame;
  int nt = 0;
  for (int a = 0; a < 4; ++a)
    if (fr.eps[a] < 0.0) ++nt;
  if (nt % 2 != 0)
    throw shape_error(
        "duality split needs an even number of timelike directions");

  double Wf[4][4][4][4];
  frame_weyl(cd, fr, Wf);

  // Index pairs of the two wedge terms of each E_a, the plus-side sign of the
  // second term, and its eps coefficient.
  static const int P[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  static const double sgn[3] = {1.0, -1.0, 1.0};
  const double coef[3] = {fr.eps[2] * fr.eps[3], fr.eps[1] * fr.eps[3],
                          fr.eps[1] * fr.eps[2]};
  auto wbiv = [&](int a, double sa, int b, double sb) {
    double ca = sa * sgn[a] * coef[a];
    double cb = sb * sgn[b] * coef[b];
    return Wf[P[a][0]][P[a][1]][P[b][0]][P[b][1]] +
           cb * Wf[P[a][0]][P[a][1]][P[b][2]][P[b][3]] +
           ca * Wf[P[a][2]][P[a][3]][P[b][0]][P[b][1]] +
           ca * cb * Wf[P[a][2]][P[a][3]][P[b][2]][P[b][3]];
  };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      ds.plus[a][b] = wbiv(a, 1.0, b, 1.0);
      ds.minus[a][b] = wbiv(a, -1.0, b, -1.0);
      ds.mixed[a][b] = wbiv(a, 1.0, b, -1.0);
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      ds.norm2_plus += ds.plus[a][b] * ds.plus[a][b];
      ds.norm2_minus += ds.minus[a][b] * ds.minus[a][b];
      ds.norm2 += 2.0 * ds.mixed[a][b] * ds.mixed[a][b];
      ds.residual_plus = std::max(ds.residual_plus, std::fabs(ds.plus[a][b]));
      ds.residual_minus =
          std::max(ds.residual_minus, std::fabs(ds.minus[a][b]));
      ds.residual_mixed =
          std::max(ds.residual_mixed, std::fabs(ds.mixed[a][b]));
    }
  ds.norm2 += ds.norm2_plus + ds.norm2_minus;
  return ds;
}

SelfdualCharacterization selfdual_characterization(const CurvatureData& cd,
                                                   const Frame& fr) {
  if (cd.d != 4)
    throw shape_error("self-duality characterization requires dimension 4");
  double Wf[4][4][4][4];
  frame_weyl(cd, fr, Wf);
  SelfdualCharacterization sc;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int e = 0; e < 4; ++e)
          sc.scale = std::max(sc.scale, std::fabs(Wf[a][b][c][e]));
  static const int T[3][3] = {{1, 2, 3}, {2, 1, 3}, {3, 1, 2}};
  static const double sig[3] = {1.0, -1.0, 1.0};
  for (int t = 0; t < 3; ++t) {
    int i = T[t][0], j = T[t][1], k = T[t][2];
    for (int c = 0; c < 4; ++c)
      for (int e = 0; e < 4; ++e) {
        double lhs = Wf[0][i][c][e];
        double rhs = sig[t] * fr.eps[j] * fr.eps[k] * Wf[j][k][c][e];
        sc.residual_sign_plus =
            std::max(sc.residual_sign_plus, std::fabs(lhs - rhs));
        sc.residual_sign_minus =
            std::max(sc.residual_sign_minus, std::fabs(lhs + rhs));
      }
  }
  return sc;
}

}  // namespace grs
