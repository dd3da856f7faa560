#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "grs/expr.hpp"

namespace grs {

// Small dense tensor values on charts of dimension <= 4. Component order is
// always the slot order of the covariant expression they came from.
struct Vec {
  int d = 0;
  double v[4] = {};
};

struct Mat {
  int d = 0;
  double m[4][4] = {};
};

struct Ten3 {
  int d = 0;
  double t[4][4][4] = {};
};

struct Ten4 {
  int d = 0;
  double t[4][4][4][4] = {};
};

// A pseudo-Riemannian metric given by symmetric Expr components on a named
// coordinate chart.
struct MetricField {
  std::vector<std::string> coords;
  std::array<std::array<ExprPtr, 4>, 4> g{};

  int dim() const { return static_cast<int>(coords.size()); }
};

// Components must form a symmetric dim x dim matrix (structural equality;
// passing the same ExprPtr for (i,j) and (j,i) is the usual way).
MetricField make_metric(std::vector<std::string> coords,
                        const std::vector<std::vector<ExprPtr>>& comps);

// Convenience: components parsed from strings in the chart's coordinates.
MetricField make_metric(std::vector<std::string> coords,
                        const std::vector<std::vector<std::string>>& comps);

// Axis-aligned sampling box.
struct Box {
  int d = 0;
  double lo[4] = {};
  double hi[4] = {};

  static Box cube(int d, double lo, double hi);
};

// Deterministic point sampler. The 53-bit mapping from raw engine words is
// spelled out here (instead of std::uniform_real_distribution, whose output
// is implementation-defined) so identical seeds give identical reports on
// every platform.
struct Sampler {
  std::mt19937_64 gen;

  explicit Sampler(std::uint64_t seed) : gen(seed) {}

  double unit() { return (gen() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }

  void point(const Box& b, double* out) {
    for (int i = 0; i < b.d; ++i) out[i] = uniform(b.lo[i], b.hi[i]);
  }
};

}  // namespace grs
