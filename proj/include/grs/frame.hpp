#pragma once

#include "grs/curvature.hpp"

namespace grs {

// Pseudo-orthonormal frame: g(e_a, e_b) = eps_a delta_ab with eps_a = +-1,
// spacelike vectors first. e[a][i] is the i-th coordinate component of e_a.
struct Frame {
  int d = 0;
  double e[4][4] = {};
  double eps[4] = {};
};

// Gram-Schmidt over the coordinate basis, at each step swapping in the
// remaining candidate whose projection has the largest |g(w,w)|. When every
// single candidate projects to a null vector (routine for neutral-signature
// metrics, where whole coordinate planes are isotropic) the sums of candidate
// pairs are tried as well; nondegeneracy guarantees one of them works. Throws
// degenerate_error otherwise; null test is |g(w,w)| < 1e-8 relative to the
// candidate's coefficient scale.
Frame orthonormal_frame(const CurvatureData& cd);

// Completes pseudo-orthonormal seed vectors (already normalized, with
// seed_eps[a] = g(seed_a, seed_a) = +-1) to a full frame by the same pivoted
// Gram-Schmidt. Seeds stay at the front in their given order and no
// spacelike-first sorting is applied afterwards.
Frame complete_frame(const CurvatureData& cd, const double (*seeds)[4],
                     const double* seed_eps, int nseed);

// Weyl bilinear form on the two-form eigenbasis
//   E1+- = e1^e2 +- eps3 eps4 e3^e4,
//   E2+- = e1^e3 -+ eps2 eps4 e2^e4,
//   E3+- = e1^e4 +- eps2 eps3 e2^e3
// of the duality operator. Defined for signatures with an even number of
// timelike directions (the operator squares to -1 otherwise).
struct DualitySplit {
  Frame frame;
  double plus[3][3] = {};   // W(E_a^+, E_b^+)
  double minus[3][3] = {};  // W(E_a^-, E_b^-)
  double mixed[3][3] = {};  // W(E_a^+, E_b^-)
  double norm2 = 0.0;       // sum of squares over the full 6x6 block matrix
  double norm2_plus = 0.0;
  double norm2_minus = 0.0;
  double residual_plus = 0.0;   // max |plus entry|
  double residual_minus = 0.0;  // max |minus entry|
  double residual_mixed = 0.0;  // max |mixed entry|; ~0 is a Weyl invariant
};

DualitySplit duality_split(const CurvatureData& cd);

// Componentwise (anti-)self-duality characterization in a frame:
//   W(e1, e_i, ., .) = sign * sigma_i eps_j eps_k W(e_j, e_k, ., .)
// for (i,j,k) in {(2,3,4),(3,2,4),(4,2,3)} with sigma = +1,-1,+1. Returns the
// max residual for sign = +1 (first) and sign = -1 (second); exactly one of
// them vanishes iff W is one-sided. Which sign corresponds to which duality
// side is orientation-dependent; duality_split is the authority, and the
// consistency between the two is itself a catalog check.
struct SelfdualCharacterization {
  double residual_sign_plus = 0.0;
  double residual_sign_minus = 0.0;
  double scale = 0.0;  // max frame |W| component
};

SelfdualCharacterization selfdual_characterization(const CurvatureData& cd,
                                                   const Frame& fr);

}  // namespace grs
