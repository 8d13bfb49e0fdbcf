#pragma once

#include "rsm/gss.hpp"
#include "rsm/hankel_lrcp.hpp"
#include "rsm/linalg.hpp"
#include "rsm/partition.hpp"
#include "rsm/sss.hpp"

namespace rsm {

// SSS generators closed into a cycle by two corner terms:
//   b_0     += U0 g_{n-1}   (U0 is N_0 x rg[n-2])
//   b_{n-1} += P0 h_0       (P0 is N_{n-1} x rh[0])
// so block (0, n-1) gains U0 V_{n-1}^T and block (n-1, 0) gains P0 Q_0^T.
struct CssRep {
  SssRep sss;
  Matrix u0;
  Matrix p0;

  Index n() const { return sss.n(); }
  const BlockPartition& partition() const { return sss.partition; }
  void validate() const;
};

// Corner blocks of a partitioned matrix: e1 at (0, n-1), e2 at (n-1, 0).
struct CornerBlock {
  Matrix e1;
  Matrix e2;
};

CornerBlock corner_blocks(const Matrix& a, const BlockPartition& part);

// Splits A = A(X, Y) + CB(A_{0,n-1} - Y, A_{n-1,0} - X) with the corners X, Y
// chosen by Hankel completion on each side, builds the SSS of A(X, Y) and
// folds the corner remainders into U0 and P0.
CssRep css_from_dense(const Matrix& a, const BlockPartition& part, const Tolerance& tol = {},
                      const Strategy& strategy = Strategy::single_block());

// The same construction with caller-chosen corners (x at (n-1, 0), y at (0, n-1)).
CssRep css_from_corners(const Matrix& a, const BlockPartition& part, const Matrix& x, const Matrix& y,
                        const Tolerance& tol = {});

Matrix css_to_dense(const CssRep& rep);
Vector css_matvec(const CssRep& rep, const Vector& x);
Vector css_solve(const CssRep& rep, const Vector& b, const Tolerance& tol = {});

// The representation as G-SS generators on the cycle 0 -> 1 -> ... -> n-1.
GssRep css_to_gss(const CssRep& rep);

RepSizes css_sizes(const CssRep& rep);

// max over i of max(rh[i] + rh[0], rg[i] + rg[n-2]).
Index css_girs_bound(const CssRep& rep);

}  // namespace rsm
