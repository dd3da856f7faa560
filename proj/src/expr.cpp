#include "grs/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

namespace grs {

// ---------------------------------------------------------------------------
// Hermite curves

HermiteCurve make_hermite_curve(std::vector<double> t, std::vector<double> v,
                                std::vector<double> d1, std::vector<double> d2) {
  if (t.size() < 2 || v.size() != t.size() || d1.size() != t.size() ||
      d2.size() != t.size())
    throw shape_error("hermite curve needs >= 2 knots with matching columns");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw shape_error("hermite curve knots must be strictly increasing");
  HermiteCurve c;
  c.t = std::move(t);
  c.v = std::move(v);
  c.d1 = std::move(d1);
  c.d2 = std::move(d2);
  c.seg.resize(c.t.size() - 1);
  for (std::size_t i = 0; i + 1 < c.t.size(); ++i) {
    double h = c.t[i + 1] - c.t[i];
    double v0 = c.v[i], v1 = c.v[i + 1];
    double D0 = h * c.d1[i], D1 = h * c.d1[i + 1];
    double S0 = h * h * c.d2[i], S1 = h * h * c.d2[i + 1];
    auto& a = c.seg[i];
    a[0] = v0;
    a[1] = D0;
    a[2] = 0.5 * S0;
    a[3] = -10.0 * v0 - 6.0 * D0 - 1.5 * S0 + 10.0 * v1 - 4.0 * D1 + 0.5 * S1;
    a[4] = 15.0 * v0 + 8.0 * D0 + 1.5 * S0 - 15.0 * v1 + 7.0 * D1 - S1;
    a[5] = -6.0 * v0 - 3.0 * D0 - 0.5 * S0 + 6.0 * v1 - 3.0 * D1 + 0.5 * S1;
  }
  return c;
}

std::array<double, 4> HermiteCurve::eval(double x) const {
  const double slack = 1e-12 * (t.back() - t.front());
  if (x < t.front() - slack || x > t.back() + slack)
    throw domain_error("hermite curve evaluated outside its knot range");
  x = std::clamp(x, t.front(), t.back());
  std::size_t i =
      std::upper_bound(t.begin(), t.end(), x) - t.begin();
  i = (i == 0) ? 0 : i - 1;
  if (i + 1 >= t.size()) i = t.size() - 2;
  double h = t[i + 1] - t[i];
  double s = (x - t[i]) / h;
  const auto& a = seg[i];
  double p = ((((a[5] * s + a[4]) * s + a[3]) * s + a[2]) * s + a[1]) * s + a[0];
  double p1 = (((5.0 * a[5] * s + 4.0 * a[4]) * s + 3.0 * a[3]) * s +
               2.0 * a[2]) * s + a[1];
  double p2 = ((20.0 * a[5] * s + 12.0 * a[4]) * s + 6.0 * a[3]) * s +
              2.0 * a[2];
  double p3 = (60.0 * a[5] * s + 24.0 * a[4]) * s + 6.0 * a[3];
  return {p, p1 / h, p2 / (h * h), p3 / (h * h * h)};
}

// ---------------------------------------------------------------------------
// Numeric antiderivatives

namespace {

double integrand_at(const ExprPtr& f, int var, double s) {
  double pt[kJetMaxVars] = {0.0, 0.0, 0.0, 0.0};
  pt[var] = s;
  return eval_value(f, var + 1, pt);
}

double simpson_rec(const ExprPtr& f, int var, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = integrand_at(f, var, lm), frm = integrand_at(f, var, rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, var, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, var, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const ExprPtr& f, int var, double a, double b,
                        double tol) {
  if (a == b) return 0.0;
  double fa = integrand_at(f, var, a);
  double fb = integrand_at(f, var, b);
  double fm = integrand_at(f, var, 0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, var, a, b, fa, fm, fb, whole, tol, 40);
}

void collect_vars(const ExprPtr& e, std::set<int>& out) {
  if (!e) return;
  if (e->kind == ExprKind::kVariable || e->kind == ExprKind::kSpline ||
      e->kind == ExprKind::kAntideriv || e->kind == ExprKind::kDeriv)
    out.insert(e->var);
  collect_vars(e->a, out);
  collect_vars(e->b, out);
  if (e->kind == ExprKind::kAntideriv && e->quad)
    collect_vars(e->quad->integrand, out);
}

}  // namespace

double AntiderivCache::value_at(double x) const {
  std::size_t i = std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
  if (i == xs.size()) i = xs.size() - 1;
  if (i > 0 && std::fabs(x - xs[i - 1]) < std::fabs(x - xs[i])) i -= 1;
  return fs[i] + adaptive_simpson(integrand, var, xs[i], x, 1e-13);
}

// ---------------------------------------------------------------------------
// Builders

namespace {

ExprPtr node(ExprKind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}

bool is_const(const ExprPtr& e) { return e && e->kind == ExprKind::kConstant; }

ExprPtr folded(double v) {
  if (!std::isfinite(v))
    throw domain_error("constant folding produced a non-finite value");
  return ex_const(v);
}

void need(const ExprPtr& e) {
  if (!e) throw shape_error("null expression operand");
}

}  // namespace

ExprPtr ex_const(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kConstant;
  e->cval = v;
  return e;
}

ExprPtr ex_var(int i) {
  if (i < 0 || i >= kJetMaxVars) throw shape_error("variable index out of range");
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::kVariable;
  e->var = i;
  return e;
}

ExprPtr ex_add(ExprPtr a, ExprPtr b) {
  need(a);
  need(b);
  if (is_const(a) && is_const(b)) return folded(a->cval + b->cval);
  auto e = node(ExprKind::kAdd);
  auto m = std::const_pointer_cast<Expr>(e);
  m->a = std::move(a);
  m->b = std::move(b);
  return e;
}

ExprPtr ex_sub(ExprPtr a, ExprPtr b) {
  need(a);
  need(b);
  if (is_const(a) && is_const(b)) return folded(a->cval - b->cval);
  auto e = node(ExprKind::kSub);
  auto m = std::const_pointer_cast<Expr>(e);
  m->a = std::move(a);
  m->b = std::move(b);
  return e;
}

ExprPtr ex_mul(ExprPtr a, ExprPtr b) {
  need(a);
  need(b);
  if (is_const(a) && is_const(b)) return folded(a->cval * b->cval);
  auto e = node(ExprKind::kMul);
  auto m = std::const_pointer_cast<Expr>(e);
  m->a = std::move(a);
  m->b = std::move(b);
  return e;
}

ExprPtr ex_div(ExprPtr a, ExprPtr b) {
  need(a);
  need(b);
  if (is_const(a) && is_const(b)) {
    if (std::fabs(b->cval) < 1e-300) throw domain_error("division by zero");
    return folded(a->cval / b->cval);
  }
  auto e = node(ExprKind::kDiv);
  auto m = std::const_pointer_cast<Expr>(e);
  m->a = std::move(a);
  m->b = std::move(b);
  return e;
}

ExprPtr ex_neg(ExprPtr a) {
  need(a);
  if (is_const(a)) return folded(-a->cval);
  auto e = node(ExprKind::kNeg);
  std::const_pointer_cast<Expr>(e)->a = std::move(a);
  return e;
}

ExprPtr ex_pow(ExprPtr a, long long num, long long den) {
  need(a);
  if (den == 0) throw domain_error("zero denominator in exponent");
  if (den < 0) {
    den = -den;
    num = -num;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) return ex_const(1.0);
  if (num == 1 && den == 1) return a;
  if (is_const(a)) {
    Jet j = jet_pow(Jet::constant(1, 0, a->cval), num, den);
    return folded(j.value());
  }
  auto e = node(ExprKind::kPow);
  auto m = std::const_pointer_cast<Expr>(e);
  m->a = std::move(a);
  m->pnum = num;
  m->pden = den;
  return e;
}

ExprPtr ex_exp(ExprPtr a) {
  need(a);
  auto e = node(ExprKind::kExp);
  std::const_pointer_cast<Expr>(e)->a = std::move(a);
  return e;
}

ExprPtr ex_ln(ExprPtr a) {
  need(a);
  auto e = node(ExprKind::kLn);
  std::const_pointer_cast<Expr>(e)->a = std::move(a);
  return e;
}

ExprPtr ex_sqrt(ExprPtr a) {
  need(a);
  auto e = node(ExprKind::kSqrt);
  std::const_pointer_cast<Expr>(e)->a = std::move(a);
  return e;
}

ExprPtr ex_spline(std::shared_ptr<const HermiteCurve> c, int var) {
  if (!c) throw shape_error("null hermite curve");
  if (var < 0 || var >= kJetMaxVars)
    throw shape_error("spline variable index out of range");
  auto e = node(ExprKind::kSpline);
  auto m = std::const_pointer_cast<Expr>(e);
  m->var = var;
  m->curve = std::move(c);
  return e;
}

ExprPtr ex_antideriv(ExprPtr integrand, int var, double anchor, double lo,
                     double hi) {
  need(integrand);
  if (var < 0 || var >= kJetMaxVars)
    throw shape_error("antiderivative variable index out of range");
  if (!(hi > lo)) throw shape_error("antiderivative needs lo < hi");
  std::set<int> used;
  collect_vars(integrand, used);
  for (int u : used)
    if (u != var)
      throw shape_error("antiderivative integrand must be univariate in its variable");

  auto cache = std::make_shared<AntiderivCache>();
  cache->integrand = integrand;
  cache->var = var;
  cache->anchor = anchor;
  double a = std::min(lo, anchor), b = std::max(hi, anchor);
  const int n = 129;
  for (int i = 0; i < n; ++i)
    cache->xs.push_back(a + (b - a) * i / (n - 1));
  bool have_anchor = false;
  for (double x : cache->xs)
    if (x == anchor) have_anchor = true;
  if (!have_anchor) cache->xs.push_back(anchor);
  std::sort(cache->xs.begin(), cache->xs.end());
  cache->fs.assign(cache->xs.size(), 0.0);
  std::size_t ai =
      std::lower_bound(cache->xs.begin(), cache->xs.end(), anchor) -
      cache->xs.begin();
  for (std::size_t i = ai; i + 1 < cache->xs.size(); ++i)
    cache->fs[i + 1] = cache->fs[i] + adaptive_simpson(integrand, var,
                                                       cache->xs[i],
                                                       cache->xs[i + 1], 1e-13);
  for (std::size_t i = ai; i > 0; --i)
    cache->fs[i - 1] = cache->fs[i] + adaptive_simpson(integrand, var,
                                                       cache->xs[i],
                                                       cache->xs[i - 1], 1e-13);

  auto e = node(ExprKind::kAntideriv);
  auto m = std::const_pointer_cast<Expr>(e);
  m->var = var;
  m->a = std::move(integrand);
  m->quad = std::move(cache);
  return e;
}

namespace {

bool uses_var(const ExprPtr& e, int var) {
  if (!e) return false;
  if (e->var == var && (e->kind == ExprKind::kVariable ||
                        e->kind == ExprKind::kSpline ||
                        e->kind == ExprKind::kAntideriv))
    return true;
  return uses_var(e->a, var) || uses_var(e->b, var);
}

}  // namespace

ExprPtr ex_deriv(ExprPtr sub, int var) {
  need(sub);
  if (var < 0 || var >= kJetMaxVars)
    throw shape_error("derivative variable index out of range");
  if (!uses_var(sub, var)) return ex_const(0.0);
  auto e = node(ExprKind::kDeriv);
  auto m = std::const_pointer_cast<Expr>(e);
  m->var = var;
  m->a = std::move(sub);
  return e;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;
  const std::vector<std::string>& coords;

  explicit Parser(std::string_view src, const std::vector<std::string>& c)
      : s(src), coords(c) {}

  [[noreturn]] void fail(const std::string& msg, std::size_t off) {
    throw parse_error(msg, off);
  }

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos;
        lhs = ex_add(lhs, term());
      } else if (c == '-') {
        ++pos;
        lhs = ex_sub(lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos;
        lhs = ex_mul(lhs, unary());
      } else if (c == '/') {
        ++pos;
        lhs = ex_div(lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (peek() == '-') {
      ++pos;
      return ex_neg(unary());
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr base = atom();
    if (peek() == '^') {
      ++pos;
      auto [num, den] = exponent();
      base = ex_pow(base, num, den);
    }
    return base;
  }

  long long integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected an integer", pos);
    long long v = 0;
    auto res = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (res.ec != std::errc()) fail("integer out of range", start);
    pos = res.ptr - s.data();
    return v;
  }

  std::pair<long long, long long> exponent() {
    skip_ws();
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      return {integer(), 1};
    if (peek() != '(')
      fail("expected an integer or parenthesized rational exponent", pos);
    ++pos;
    long long sign = 1;
    if (peek() == '-') {
      ++pos;
      sign = -1;
    }
    long long num = sign * integer();
    long long den = 1;
    if (peek() == '/') {
      ++pos;
      std::size_t den_off = pos;
      den = integer();
      if (den == 0) fail("zero denominator in exponent", den_off);
    }
    if (peek() != ')') fail("expected ')' after exponent", pos);
    ++pos;
    return {num, den};
  }

  double number() {
    skip_ws();
    std::size_t start = pos;
    std::size_t end = pos;
    while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) ||
                              s[end] == '.'))
      ++end;
    if (end < s.size() && (s[end] == 'e' || s[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < s.size() && (s[e] == '+' || s[e] == '-')) ++e;
      if (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) {
        ++e;
        while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e])))
          ++e;
        end = e;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s.data() + start, s.data() + end, v);
    if (res.ec != std::errc() || res.ptr != s.data() + end)
      fail("malformed number", start);
    pos = end;
    return v;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return std::string(s.substr(start, pos - start));
  }

  ExprPtr atom() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input", pos);
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) return ex_const(number());
    if (c == '(') {
      ++pos;
      ExprPtr e = expr();
      if (peek() != ')') fail("expected ')'", pos);
      ++pos;
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      std::string name = ident();
      if (name == "exp" || name == "ln" || name == "sqrt") {
        if (peek() != '(') fail("expected '(' after function '" + name + "'", pos);
        ++pos;
        ExprPtr arg = expr();
        if (peek() != ')') fail("expected ')'", pos);
        ++pos;
        if (name == "exp") return ex_exp(arg);
        if (name == "ln") return ex_ln(arg);
        return ex_sqrt(arg);
      }
      for (std::size_t i = 0; i < coords.size(); ++i)
        if (coords[i] == name) return ex_var(static_cast<int>(i));
      if (peek() == '(') fail("unknown function '" + name + "'", start);
      fail("unknown name '" + name + "'", start);
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }
};

}  // namespace

ExprPtr parse_expr(std::string_view src, const std::vector<std::string>& coords) {
  if (coords.size() > kJetMaxVars)
    throw shape_error("at most 4 coordinates are supported");
  Parser p(src, coords);
  ExprPtr e = p.expr();
  if (!p.at_end())
    throw parse_error(std::string("unexpected character '") + p.s[p.pos] + "'",
                      p.pos);
  return e;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string num_to_string(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int prec_of(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::kAdd:
    case ExprKind::kSub:
      return 1;
    case ExprKind::kMul:
    case ExprKind::kDiv:
      return 2;
    case ExprKind::kNeg:
      return 3;
    case ExprKind::kPow:
      return 4;
    case ExprKind::kConstant:
      return e->cval < 0.0 ? 3 : 5;
    default:
      return 5;
  }
}

void pr(const ExprPtr& e, int min_prec, const std::vector<std::string>& coords,
        std::string& out) {
  auto name = [&](int v) -> std::string {
    if (v >= 0 && v < static_cast<int>(coords.size())) return coords[v];
    return "#" + std::to_string(v);
  };
  bool wrap = prec_of(e) < min_prec;
  if (wrap) out += '(';
  switch (e->kind) {
    case ExprKind::kConstant:
      out += num_to_string(e->cval);
      break;
    case ExprKind::kVariable:
      out += name(e->var);
      break;
    case ExprKind::kAdd:
      pr(e->a, 1, coords, out);
      out += '+';
      pr(e->b, 2, coords, out);
      break;
    case ExprKind::kSub:
      pr(e->a, 1, coords, out);
      out += '-';
      pr(e->b, 2, coords, out);
      break;
    case ExprKind::kMul:
      pr(e->a, 2, coords, out);
      out += '*';
      pr(e->b, 3, coords, out);
      break;
    case ExprKind::kDiv:
      pr(e->a, 2, coords, out);
      out += '/';
      pr(e->b, 3, coords, out);
      break;
    case ExprKind::kNeg:
      out += '-';
      pr(e->a, 3, coords, out);
      break;
    case ExprKind::kPow:
      pr(e->a, 5, coords, out);
      out += '^';
      if (e->pden == 1 && e->pnum >= 0) {
        out += std::to_string(e->pnum);
      } else {
        out += '(';
        out += std::to_string(e->pnum);
        if (e->pden != 1) {
          out += '/';
          out += std::to_string(e->pden);
        }
        out += ')';
      }
      break;
    case ExprKind::kExp:
    case ExprKind::kLn:
    case ExprKind::kSqrt:
      out += (e->kind == ExprKind::kExp) ? "exp("
             : (e->kind == ExprKind::kLn) ? "ln("
                                          : "sqrt(";
      pr(e->a, 0, coords, out);
      out += ')';
      break;
    case ExprKind::kSpline:
      out += "<spline(" + name(e->var) + ")>";
      break;
    case ExprKind::kAntideriv:
      out += "<antideriv(" + name(e->var) + "; ";
      pr(e->a, 0, coords, out);
      out += ")>";
      break;
    case ExprKind::kDeriv:
      out += "<d/d" + name(e->var) + " ";
      pr(e->a, 0, coords, out);
      out += '>';
      break;
  }
  if (wrap) out += ')';
}

}  // namespace

std::string print_expr(const ExprPtr& e, const std::vector<std::string>& coords) {
  if (!e) throw shape_error("null expression");
  std::string out;
  pr(e, 0, coords, out);
  return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::kConstant:
      return a->cval == b->cval;
    case ExprKind::kVariable:
      return a->var == b->var;
    case ExprKind::kPow:
      return a->pnum == b->pnum && a->pden == b->pden && expr_equal(a->a, b->a);
    case ExprKind::kSpline:
      return a->var == b->var && a->curve == b->curve;
    case ExprKind::kAntideriv:
      return a->var == b->var && a->quad == b->quad;
    case ExprKind::kDeriv:
      return a->var == b->var && expr_equal(a->a, b->a);
    case ExprKind::kNeg:
    case ExprKind::kExp:
    case ExprKind::kLn:
    case ExprKind::kSqrt:
      return expr_equal(a->a, b->a);
    default:
      return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
}

int expr_max_var(const ExprPtr& e) {
  if (!e) return -1;
  int m = -1;
  if (e->kind == ExprKind::kVariable || e->kind == ExprKind::kSpline ||
      e->kind == ExprKind::kAntideriv || e->kind == ExprKind::kDeriv)
    m = e->var;
  m = std::max(m, expr_max_var(e->a));
  m = std::max(m, expr_max_var(e->b));
  return m;
}

// ---------------------------------------------------------------------------
// Evaluation

Jet eval_jet(const ExprPtr& e, int n, int k, const double* point) {
  if (!e) throw shape_error("null expression");
  switch (e->kind) {
    case ExprKind::kConstant:
      return Jet::constant(n, k, e->cval);
    case ExprKind::kVariable:
      if (e->var >= n) throw shape_error("expression references a variable beyond the chart");
      return Jet::variable(n, k, e->var, point[e->var]);
    case ExprKind::kAdd:
      return eval_jet(e->a, n, k, point) + eval_jet(e->b, n, k, point);
    case ExprKind::kSub:
      return eval_jet(e->a, n, k, point) - eval_jet(e->b, n, k, point);
    case ExprKind::kMul:
      return eval_jet(e->a, n, k, point) * eval_jet(e->b, n, k, point);
    case ExprKind::kDiv:
      return eval_jet(e->a, n, k, point) / eval_jet(e->b, n, k, point);
    case ExprKind::kNeg:
      return -eval_jet(e->a, n, k, point);
    case ExprKind::kPow:
      return jet_pow(eval_jet(e->a, n, k, point), e->pnum, e->pden);
    case ExprKind::kExp:
      return jet_exp(eval_jet(e->a, n, k, point));
    case ExprKind::kLn:
      return jet_ln(eval_jet(e->a, n, k, point));
    case ExprKind::kSqrt:
      return jet_sqrt(eval_jet(e->a, n, k, point));
    case ExprKind::kSpline: {
      if (e->var >= n) throw shape_error("spline variable beyond the chart");
      auto d = e->curve->eval(point[e->var]);
      Jet j = Jet::make(n, k);
      j.c[0] = d[0];
      static const double inv_fact[4] = {1.0, 1.0, 0.5, 1.0 / 6.0};
      for (int m = 1; m <= k; ++m) {
        std::array<int, 4> alpha{};
        alpha[e->var] = m;
        j.c[jet_index_of(n, alpha)] = d[m] * inv_fact[m];
      }
      return j;
    }
    case ExprKind::kAntideriv: {
      if (e->var >= n) throw shape_error("antiderivative variable beyond the chart");
      Jet j = Jet::make(n, k);
      j.c[0] = e->quad->value_at(point[e->var]);
      if (k >= 1) {
        Jet ij = eval_jet(e->a, n, k - 1, point);
        for (int m = 1; m <= k; ++m) {
          std::array<int, 4> alpha{};
          alpha[e->var] = m - 1;
          double ci = ij.coeff(alpha);
          alpha[e->var] = m;
          j.c[jet_index_of(n, alpha)] = ci / m;
        }
      }
      return j;
    }
    case ExprKind::kDeriv: {
      if (k >= kJetMaxOrder)
        throw shape_error(
            "derivative node cannot supply an order-3 jet (child would need order 4)");
      Jet sub = eval_jet(e->a, n, k + 1, point);
      return jet_derivative(sub, e->var);
    }
  }
  throw shape_error("unhandled expression kind");
}

double eval_value(const ExprPtr& e, int n, const double* point) {
  return eval_jet(e, n, 0, point).value();
}

}  // namespace grs
