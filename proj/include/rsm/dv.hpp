#pragma once

#include "rsm/gss.hpp"
#include "rsm/linalg.hpp"
#include "rsm/partition.hpp"

#include <memory>
#include <vector>

namespace rsm {

// Implicit one-flow state-space representation on a graph:
//   g_i = V_i^T x_i + sum_{j ~ i} W_ij g_j
//   b_i = D_i x_i + sum_{j ~ i} U_ij g_j
// i.e. A = D + Z[U] (I - Z[W])^-1 V^T.  Edge generators exist in both
// directions of every graph edge.
struct DvRep {
  GraphPartition graph;
  std::vector<Matrix> d, v;
  EdgeMap w, u;
  std::vector<Index> r;

  // Checks shapes and factorises I - Z[W]; throws IllPosedError if singular.
  // Every constructor below calls it.
  void finalize();
  void validate() const;

  struct Factor;
  std::shared_ptr<const Factor> factor;  // read-only once finalized
};

DvRep dv_from_sparse(const Matrix& a, const GraphPartition& graph);
DvRep dv_from_gss(const GssRep& rep);

Vector dv_apply(const DvRep& rep, const Vector& x);
Matrix dv_to_dense(const DvRep& rep);
Vector dv_solve(const DvRep& rep, const Vector& b, const Tolerance& tol = {});

DvRep dv_invert(const DvRep& rep);
DvRep dv_add(const DvRep& a, const DvRep& b);
DvRep dv_multiply(const DvRep& a, const DvRep& b);

// Random generators with the given state dimension; W entries are scaled so
// that I - Z[W] stays well conditioned.
DvRep dv_random(const GraphPartition& graph, Index dim, double w_scale, std::uint64_t seed);

Index dv_girs_bound(const DvRep& rep);

}  // namespace rsm
