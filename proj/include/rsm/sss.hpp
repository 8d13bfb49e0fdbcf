#pragma once

#include "rsm/linalg.hpp"
#include "rsm/partition.hpp"

#include <vector>

namespace rsm {

// Sequentially semi-separable generators, 0-based blocks i = 0..n-1:
//   g_i = V_i^T x_i + W_i g_{i+1}
//   h_i = Q_i^T x_i + R_i h_{i-1}
//   b_i = D_i x_i + U_i g_{i+1} + P_i h_{i-1}
// so that block (k, l) is P_k R_{k-1} .. R_{l+1} Q_l^T below the diagonal and
// U_k W_{k+1} .. W_{l-1} V_l^T above it.  rg[i], rh[i] (i = 0..n-2) are the
// state dimensions between blocks i and i+1; boundary generators have a zero
// dimension.
struct SssRep {
  BlockPartition partition;
  std::vector<Matrix> d, u, w, v, p, r, q;
  std::vector<Index> rg, rh;

  Index n() const { return partition.count(); }
  // State dimension between blocks i and i+1, zero outside 0..n-2.
  Index gdim(Index i) const { return i >= 0 && i + 1 < n() ? rg[static_cast<std::size_t>(i)] : 0; }
  Index hdim(Index i) const { return i >= 0 && i + 1 < n() ? rh[static_cast<std::size_t>(i)] : 0; }

  // Checks every generator shape against the partition and dimensions.
  void validate() const;
};

// Zero generators of the right shapes for the given dimensions.
SssRep sss_zero(const BlockPartition& p, std::vector<Index> rg, std::vector<Index> rh);
SssRep sss_identity(const BlockPartition& p);

// Lower-side generators (P, R, Q, rh) of a minimal realisation, one SVD per
// Hankel block.
struct LowerGenerators {
  std::vector<Matrix> p, r, q;
  std::vector<Index> rh;
};
LowerGenerators lower_generators(const Matrix& a, const BlockPartition& part, const Tolerance& tol = {});

SssRep sss_from_dense(const Matrix& a, const BlockPartition& part, const Tolerance& tol = {});
Matrix sss_to_dense(const SssRep& rep);
Vector sss_matvec(const SssRep& rep, const Vector& x);
Vector sss_solve(const SssRep& rep, const Vector& b, const Tolerance& tol = {});

SssRep sss_transpose(const SssRep& rep);
SssRep sss_add(const SssRep& a, const SssRep& b);
SssRep sss_multiply(const SssRep& a, const SssRep& b);
SssRep sss_invert(const SssRep& rep, const Tolerance& tol = {});

struct RepSizes {
  std::vector<Index> rg, rh;
  Index total = 0;
};
RepSizes sss_sizes(const SssRep& rep);

}  // namespace rsm
