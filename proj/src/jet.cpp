#include "grs/jet.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace grs {

namespace {

struct Tables {
  // One entry per variable count n = 1..4 (slot 0 unused).
  std::vector<std::array<int, 4>> idx[5];
  int count[5][kJetMaxOrder + 1] = {};
  // alpha encoded base 4 (entries are <= 3 because |alpha| <= 3) -> flat pos.
  std::array<int, 256> lookup[5];
  // For each flat target position: all (ia, ib) with alpha_a + alpha_b = target.
  std::vector<std::vector<std::pair<int, int>>> pairs[5];
};

int encode(const std::array<int, 4>& a) {
  return a[0] + 4 * a[1] + 16 * a[2] + 64 * a[3];
}

void enumerate_degree(int n, int d, int pos, std::array<int, 4>& cur,
                      std::vector<std::array<int, 4>>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int a = d; a >= 0; --a) {
    cur[pos] = a;
    enumerate_degree(n, d - a, pos + 1, cur, out);
  }
}

Tables build_tables() {
  Tables t;
  for (int n = 1; n <= kJetMaxVars; ++n) {
    t.lookup[n].fill(-1);
    std::array<int, 4> cur{};
    for (int d = 0; d <= kJetMaxOrder; ++d) {
      cur = {};
      enumerate_degree(n, d, 0, cur, t.idx[n]);
      t.count[n][d] = static_cast<int>(t.idx[n].size());
    }
    for (int p = 0; p < static_cast<int>(t.idx[n].size()); ++p)
      t.lookup[n][encode(t.idx[n][p])] = p;
    t.pairs[n].resize(t.idx[n].size());
    for (int tp = 0; tp < static_cast<int>(t.idx[n].size()); ++tp) {
      const auto& target = t.idx[n][tp];
      for (int ia = 0; ia < static_cast<int>(t.idx[n].size()); ++ia) {
        const auto& a = t.idx[n][ia];
        std::array<int, 4> b{};
        bool ok = true;
        for (int v = 0; v < 4; ++v) {
          b[v] = target[v] - a[v];
          if (b[v] < 0) ok = false;
        }
        if (!ok) continue;
        t.pairs[n][tp].emplace_back(ia, t.lookup[n][encode(b)]);
      }
    }
  }
  return t;
}

const Tables& tables() {
  static const Tables t = build_tables();
  return t;
}

void check_nk(int n, int k) {
  if (n < 1 || n > kJetMaxVars || k < 0 || k > kJetMaxOrder)
    throw shape_error("jet dimensions out of range: n=" + std::to_string(n) +
                      " k=" + std::to_string(k));
}

void check_match(const Jet& a, const Jet& b) {
  if (a.n != b.n || a.k != b.k)
    throw shape_error("jet mismatch: (" + std::to_string(a.n) + "," +
                      std::to_string(a.k) + ") vs (" + std::to_string(b.n) +
                      "," + std::to_string(b.k) + ")");
}

// Univariate composition on the nilpotent part: returns
// s0 + s1 z + s2 z^2 + s3 z^3 truncated at a.k, where z = a - a.value().
Jet compose(const Jet& a, const std::array<double, 4>& s) {
  Jet z = a;
  z.c[0] = 0.0;
  Jet r = Jet::constant(a.n, a.k, s[a.k]);
  for (int i = a.k - 1; i >= 0; --i) {
    r = r * z;
    r.c[0] += s[i];
  }
  return r;
}

Jet ipow(Jet a, long long e) {  // e >= 1
  Jet r = Jet::constant(a.n, a.k, 1.0);
  for (;;) {
    if (e & 1) r = r * a;
    e >>= 1;
    if (!e) break;
    a = a * a;
  }
  return r;
}

}  // namespace

int jet_coeff_count(int n, int k) {
  check_nk(n, k);
  return tables().count[n][k];
}

int jet_index_of(int n, const std::array<int, 4>& alpha) {
  check_nk(n, 0);
  int deg = 0;
  for (int v = 0; v < 4; ++v) {
    if (alpha[v] < 0) return -1;
    if (v >= n && alpha[v] != 0) return -1;
    deg += alpha[v];
  }
  if (deg > kJetMaxOrder) return -1;
  return tables().lookup[n][encode(alpha)];
}

const std::array<int, 4>& jet_multi_index(int n, int pos) {
  check_nk(n, 0);
  const auto& idx = tables().idx[n];
  if (pos < 0 || pos >= static_cast<int>(idx.size()))
    throw shape_error("jet multi-index position out of range");
  return idx[pos];
}

Jet Jet::make(int n, int k) {
  check_nk(n, k);
  Jet j;
  j.n = n;
  j.k = k;
  return j;
}

Jet Jet::constant(int n, int k, double v) {
  Jet j = make(n, k);
  j.c[0] = v;
  return j;
}

Jet Jet::variable(int n, int k, int i, double x) {
  Jet j = make(n, k);
  if (i < 0 || i >= n) throw shape_error("jet variable index out of range");
  j.c[0] = x;
  if (k >= 1) {
    std::array<int, 4> e{};
    e[i] = 1;
    j.c[tables().lookup[n][encode(e)]] = 1.0;
  }
  return j;
}

double Jet::coeff(const std::array<int, 4>& alpha) const {
  int pos = jet_index_of(n, alpha);
  if (pos < 0) throw shape_error("bad multi-index for jet coefficient");
  if (pos >= size()) return 0.0;
  return c[pos];
}

double Jet::partial(const std::array<int, 4>& alpha) const {
  static const double fact[4] = {1.0, 1.0, 2.0, 6.0};
  double f = 1.0;
  for (int v = 0; v < 4; ++v) f *= fact[alpha[v]];
  return coeff(alpha) * f;
}

Jet& Jet::operator+=(const Jet& o) {
  check_match(*this, o);
  for (int i = 0; i < size(); ++i) c[i] += o.c[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_match(*this, o);
  for (int i = 0; i < size(); ++i) c[i] -= o.c[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int i = 0; i < size(); ++i) c[i] *= s;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  r += b;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r -= b;
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (int i = 0; i < r.size(); ++i) r.c[i] = -r.c[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_match(a, b);
  Jet r = Jet::make(a.n, a.k);
  const auto& pr = tables().pairs[a.n];
  for (int t = 0; t < r.size(); ++t) {
    double acc = 0.0;
    for (const auto& [ia, ib] : pr[t]) acc += a.c[ia] * b.c[ib];
    r.c[t] = acc;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * jet_reciprocal(b); }

Jet operator*(double s, const Jet& a) {
  Jet r = a;
  r *= s;
  return r;
}

Jet operator*(const Jet& a, double s) { return s * a; }

Jet operator+(const Jet& a, double s) {
  Jet r = a;
  r.c[0] += s;
  return r;
}

Jet operator+(double s, const Jet& a) { return a + s; }

Jet operator-(const Jet& a, double s) { return a + (-s); }

Jet operator-(double s, const Jet& a) {
  Jet r = -a;
  r.c[0] += s;
  return r;
}

Jet truncated(const Jet& a, int k) {
  if (k > a.k) throw shape_error("cannot raise jet order by truncation");
  check_nk(a.n, k);
  Jet r = Jet::make(a.n, k);
  for (int i = 0; i < r.size(); ++i) r.c[i] = a.c[i];
  return r;
}

Jet jet_derivative(const Jet& a, int i) {
  if (a.k < 1) throw shape_error("derivative of an order-0 jet");
  if (i < 0 || i >= a.n) throw shape_error("jet derivative index out of range");
  Jet r = Jet::make(a.n, a.k - 1);
  for (int p = 0; p < r.size(); ++p) {
    std::array<int, 4> beta = jet_multi_index(a.n, p);
    beta[i] += 1;
    int src = tables().lookup[a.n][encode(beta)];
    r.c[p] = beta[i] * a.c[src];
  }
  return r;
}

Jet jet_exp(const Jet& a) {
  double e = std::exp(a.value());
  return compose(a, {e, e, e / 2.0, e / 6.0});
}

Jet jet_ln(const Jet& a) {
  double v = a.value();
  if (!(v > 0.0)) throw domain_error("ln of non-positive value");
  return compose(a, {std::log(v), 1.0 / v, -0.5 / (v * v),
                     1.0 / (3.0 * v * v * v)});
}

Jet jet_sqrt(const Jet& a) {
  double v = a.value();
  if (!(v > 0.0)) throw domain_error("sqrt of non-positive value");
  double s = std::sqrt(v);
  return compose(a, {s, 0.5 / s, -1.0 / (8.0 * s * v), 1.0 / (16.0 * s * v * v)});
}

Jet jet_reciprocal(const Jet& a) {
  double v = a.value();
  if (std::fabs(v) < 1e-300) throw domain_error("division by zero");
  double iv = 1.0 / v;
  return compose(a, {iv, -iv * iv, iv * iv * iv, -iv * iv * iv * iv});
}

Jet jet_pow(const Jet& a, long long num, long long den) {
  if (den == 0) throw domain_error("power with zero denominator");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  if (den == 1) {
    if (num == 0) return Jet::constant(a.n, a.k, 1.0);
    if (num > 0) return ipow(a, num);
    return jet_reciprocal(ipow(a, -num));
  }
  double v = a.value();
  if (!(v > 0.0))
    throw domain_error("fractional power of non-positive base");
  double r = static_cast<double>(num) / static_cast<double>(den);
  double p0 = std::pow(v, r);
  double p1 = r * p0 / v;
  double p2 = (r - 1.0) * p1 / (2.0 * v);
  double p3 = (r - 2.0) * p2 / (3.0 * v);
  // p2 = r(r-1)/2 v^{r-2}; p3 = r(r-1)(r-2)/6 v^{r-3}.
  return compose(a, {p0, p1, p2, p3});
}

}  // namespace grs
