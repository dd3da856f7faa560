#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "grs/jet.hpp"
#include "oracles.hpp"

using grs::Jet;

namespace {

// Build a jet of an exact polynomial through the oracle's analytic Taylor
// coefficients (no library arithmetic involved).
Jet jet_of_poly(const oracle::Poly& p, int n, int k,
                const std::array<double, 4>& pt) {
  Jet j = Jet::make(n, k);
  for (int pos = 0; pos < j.size(); ++pos)
    j.c[pos] = p.taylor_coeff(grs::jet_multi_index(n, pos), pt);
  return j;
}

void check_close(double a, double b, double tol) {
  CHECK(std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)));
}

}  // namespace

TEST_CASE("coefficient layout is graded lex with descending tuples") {
  // n = 2, order 3: the full frozen layout.
  const std::array<std::array<int, 4>, 10> want = {{{0, 0, 0, 0},
                                                    {1, 0, 0, 0},
                                                    {0, 1, 0, 0},
                                                    {2, 0, 0, 0},
                                                    {1, 1, 0, 0},
                                                    {0, 2, 0, 0},
                                                    {3, 0, 0, 0},
                                                    {2, 1, 0, 0},
                                                    {1, 2, 0, 0},
                                                    {0, 3, 0, 0}}};
  REQUIRE(grs::jet_coeff_count(2, 3) == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(grs::jet_multi_index(2, i) == want[i]);
    CHECK(grs::jet_index_of(2, want[i]) == i);
  }

  // n = 4, order 2 prefix.
  const std::array<std::array<int, 4>, 15> want4 = {{{0, 0, 0, 0},
                                                     {1, 0, 0, 0},
                                                     {0, 1, 0, 0},
                                                     {0, 0, 1, 0},
                                                     {0, 0, 0, 1},
                                                     {2, 0, 0, 0},
                                                     {1, 1, 0, 0},
                                                     {1, 0, 1, 0},
                                                     {1, 0, 0, 1},
                                                     {0, 2, 0, 0},
                                                     {0, 1, 1, 0},
                                                     {0, 1, 0, 1},
                                                     {0, 0, 2, 0},
                                                     {0, 0, 1, 1},
                                                     {0, 0, 0, 2}}};
  REQUIRE(grs::jet_coeff_count(4, 2) == 15);
  for (int i = 0; i < 15; ++i) CHECK(grs::jet_multi_index(4, i) == want4[i]);

  CHECK(grs::jet_coeff_count(4, 3) == 35);
  CHECK(grs::jet_coeff_count(1, 3) == 4);
  CHECK(grs::jet_coeff_count(3, 0) == 1);
}

TEST_CASE("variable and constant seeds") {
  Jet x = Jet::variable(3, 2, 1, 4.5);
  CHECK(x.value() == 4.5);
  CHECK(x.coeff({0, 1, 0, 0}) == 1.0);
  CHECK(x.coeff({1, 0, 0, 0}) == 0.0);
  CHECK(x.coeff({0, 2, 0, 0}) == 0.0);
  Jet c = Jet::constant(3, 2, -7.25);
  CHECK(c.value() == -7.25);
  CHECK(c.coeff({0, 0, 1, 0}) == 0.0);
}

TEST_CASE("product matches exact polynomial convolution") {
  // Frozen case first: (1 + 2x - y^2)(3 - x y) at (0.5, -1).
  oracle::Poly p = oracle::Poly::monomial({0, 0, 0, 0}, 1.0) +
                   oracle::Poly::monomial({1, 0, 0, 0}, 2.0) +
                   oracle::Poly::monomial({0, 2, 0, 0}, -1.0);
  oracle::Poly q = oracle::Poly::monomial({0, 0, 0, 0}, 3.0) +
                   oracle::Poly::monomial({1, 1, 0, 0}, -1.0);
  std::array<double, 4> pt{0.5, -1.0, 0.0, 0.0};
  Jet prod = jet_of_poly(p, 2, 3, pt) * jet_of_poly(q, 2, 3, pt);
  Jet want = jet_of_poly(p * q, 2, 3, pt);
  for (int i = 0; i < want.size(); ++i)
    CHECK(prod.c[i] == doctest::Approx(want.c[i]).epsilon(1e-14));

  // Randomized sweep across variable counts and orders.
  oracle::Rng rng(20240911);
  for (int round = 0; round < 40; ++round) {
    int n = rng.integer(1, 4);
    int k = rng.integer(0, 3);
    oracle::Poly a = oracle::random_poly(rng, n, 3, 5);
    oracle::Poly b = oracle::random_poly(rng, n, 3, 5);
    std::array<double, 4> at{};
    for (int v = 0; v < n; ++v) at[v] = rng.uniform(-1.5, 1.5);
    Jet ja = jet_of_poly(a, n, k, at);
    Jet jb = jet_of_poly(b, n, k, at);
    Jet jp = ja * jb;
    Jet jw = jet_of_poly(a * b, n, k, at);
    for (int i = 0; i < jw.size(); ++i)
      check_close(jp.c[i], jw.c[i], 1e-12);
  }
}

TEST_CASE("derivative extraction matches polynomial differentiation") {
  oracle::Rng rng(77);
  for (int round = 0; round < 20; ++round) {
    int n = rng.integer(2, 4);
    oracle::Poly a = oracle::random_poly(rng, n, 3, 6);
    std::array<double, 4> at{};
    for (int v = 0; v < n; ++v) at[v] = rng.uniform(-1.0, 1.0);
    Jet ja = jet_of_poly(a, n, 3, at);
    for (int i = 0; i < n; ++i) {
      Jet d = grs::jet_derivative(ja, i);
      REQUIRE(d.k == 2);
      for (int pos = 0; pos < d.size(); ++pos) {
        auto beta = grs::jet_multi_index(n, pos);
        auto src = beta;
        src[i] += 1;
        double want = (beta[i] + 1) * a.taylor_coeff(src, at);
        check_close(d.c[pos], want, 1e-12);
      }
    }
  }
}

TEST_CASE("composite transcendental jet matches finite differences") {
  // f(x,y,z) = exp(x y) / sqrt(z + 2) + ln(3 + x - y), order-3 jet in 3 vars.
  auto build = [](const std::array<double, 4>& p, int k) {
    Jet x = Jet::variable(3, k, 0, p[0]);
    Jet y = Jet::variable(3, k, 1, p[1]);
    Jet z = Jet::variable(3, k, 2, p[2]);
    return grs::jet_exp(x * y) / grs::jet_sqrt(z + 2.0) +
           grs::jet_ln(3.0 + x - y);
  };
  oracle::Fn f = [&](const std::array<double, 4>& p) {
    return std::exp(p[0] * p[1]) / std::sqrt(p[2] + 2.0) +
           std::log(3.0 + p[0] - p[1]);
  };
  const std::array<std::array<double, 4>, 3> pts = {
      {{0.3, -0.4, 0.5, 0.0}, {1.1, 0.7, -0.9, 0.0}, {-0.2, 0.9, 1.4, 0.0}}};
  for (const auto& p : pts) {
    Jet j = build(p, 3);
    for (int pos = 0; pos < j.size(); ++pos) {
      auto alpha = grs::jet_multi_index(3, pos);
      double want = oracle::fd_partial(f, p, alpha, 0.05);
      check_close(j.partial(alpha), want, 1e-6);
    }
  }
}

TEST_CASE("analytic function identities hold coefficientwise") {
  oracle::Rng rng(5150);
  for (int round = 0; round < 25; ++round) {
    int n = rng.integer(1, 4);
    // A jet with positive value and generic higher coefficients.
    Jet a = Jet::constant(n, 3, rng.uniform(0.5, 3.0));
    for (int i = 1; i < a.size(); ++i) a.c[i] = rng.uniform(-0.8, 0.8);

    Jet expln = grs::jet_exp(grs::jet_ln(a));
    Jet sq = grs::jet_sqrt(a) * grs::jet_sqrt(a);
    Jet unit = a * grs::jet_reciprocal(a);
    Jet p32 = grs::jet_pow(a, 3, 2) * grs::jet_pow(a, 3, 2);
    Jet cube = grs::jet_pow(a, 3, 1);
    for (int i = 0; i < a.size(); ++i) {
      check_close(expln.c[i], a.c[i], 1e-13);
      check_close(sq.c[i], a.c[i], 1e-13);
      check_close(unit.c[i], i == 0 ? 1.0 : 0.0, 1e-13);
      check_close(p32.c[i], cube.c[i], 1e-12);
    }
  }
}

TEST_CASE("rational power frozen values") {
  Jet x = Jet::variable(1, 3, 0, 2.0);
  Jet p = grs::jet_pow(x, 3, 2);  // x^(3/2)
  CHECK(p.partial({0, 0, 0, 0}) == doctest::Approx(2.8284271247461903));
  CHECK(p.partial({1, 0, 0, 0}) == doctest::Approx(2.1213203435596424));
  CHECK(p.partial({2, 0, 0, 0}) == doctest::Approx(0.5303300858899106));
  CHECK(p.partial({3, 0, 0, 0}) == doctest::Approx(-0.13258252147247767));
}

TEST_CASE("integer powers accept negative bases") {
  Jet x = Jet::variable(1, 2, 0, -2.0);
  Jet c = grs::jet_pow(x, 3, 1);
  CHECK(c.value() == doctest::Approx(-8.0));
  CHECK(c.partial({1, 0, 0, 0}) == doctest::Approx(12.0));  // 3x^2
  Jet m = grs::jet_pow(x, -2, 1);
  CHECK(m.value() == doctest::Approx(0.25));
  CHECK(m.partial({1, 0, 0, 0}) == doctest::Approx(0.25));   // -2x^-3
  CHECK(m.partial({2, 0, 0, 0}) == doctest::Approx(0.375));  // 6x^-4
  // Exponent normalization: den < 0 flips both signs.
  Jet q = grs::jet_pow(x, 2, -1);
  CHECK(q.value() == doctest::Approx(0.25));
}

TEST_CASE("domain violations throw grs::domain_error") {
  Jet bad = Jet::constant(2, 2, -1.0);
  Jet zero = Jet::constant(2, 2, 0.0);
  CHECK_THROWS_AS((void)grs::jet_ln(bad), grs::domain_error);
  CHECK_THROWS_AS((void)grs::jet_ln(zero), grs::domain_error);
  CHECK_THROWS_AS((void)grs::jet_sqrt(bad), grs::domain_error);
  CHECK_THROWS_AS((void)grs::jet_reciprocal(zero), grs::domain_error);
  CHECK_THROWS_AS((void)grs::jet_pow(bad, 1, 2), grs::domain_error);
  CHECK_THROWS_AS((void)grs::jet_pow(zero, -1, 1), grs::domain_error);
  Jet ok = Jet::constant(2, 2, 4.0);
  CHECK_NOTHROW((void)grs::jet_sqrt(ok));
}

TEST_CASE("shape mismatches throw grs::shape_error") {
  Jet a = Jet::make(2, 2);
  Jet b = Jet::make(2, 3);
  Jet c = Jet::make(3, 2);
  CHECK_THROWS_AS((void)(a + b), grs::shape_error);
  CHECK_THROWS_AS((void)(a * c), grs::shape_error);
  CHECK_THROWS_AS((void)grs::jet_derivative(Jet::make(2, 0), 0), grs::shape_error);
  CHECK_THROWS_AS((void)Jet::variable(2, 1, 2, 0.0), grs::shape_error);
  CHECK_THROWS_AS((void)Jet::make(5, 1), grs::shape_error);
  CHECK_THROWS_AS((void)Jet::make(2, 4), grs::shape_error);
  CHECK_THROWS_AS((void)grs::truncated(a, 3), grs::shape_error);
}

TEST_CASE("truncation keeps the coefficient prefix") {
  oracle::Rng rng(99);
  Jet a = Jet::make(3, 3);
  for (int i = 0; i < a.size(); ++i) a.c[i] = rng.uniform(-1.0, 1.0);
  Jet t = grs::truncated(a, 1);
  REQUIRE(t.size() == 4);
  for (int i = 0; i < t.size(); ++i) CHECK(t.c[i] == a.c[i]);
}
