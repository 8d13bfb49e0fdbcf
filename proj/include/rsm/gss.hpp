#pragma once

#include "rsm/linalg.hpp"
#include "rsm/partition.hpp"
#include "rsm/sss.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace rsm {

using EdgeKey = std::pair<Index, Index>;
using EdgeMap = std::map<EdgeKey, Matrix>;

// G-semi-separable generators on a graph with a Hamiltonian path.  With
// j > i meaning "j comes after i on the path":
//   g_i = V_i^T x_i + sum_{j > i} W_ij g_j
//   h_i = Q_i^T x_i + sum_{j < i} R_ij h_j
//   b_i = D_i x_i + sum_{j > i} U_ij g_j + sum_{j < i} P_ij h_j
// where the sums run over graph neighbours only.
struct GssRep {
  GraphPartition graph;
  std::vector<Matrix> d, v, q;
  EdgeMap w, u;  // keyed (i, j), j a successor of i
  EdgeMap r, p;  // keyed (i, j), j a predecessor of i
  std::vector<Index> rg, rh;

  void validate() const;
};

Vector gss_matvec(const GssRep& rep, const Vector& x);
Vector gss_matvec_transpose(const GssRep& rep, const Vector& x);
// Block (k, l), 0-based node indices.
Matrix gss_entry(const GssRep& rep, Index k, Index l);
Matrix gss_to_dense(const GssRep& rep);
Vector gss_solve(const GssRep& rep, const Vector& b, const Tolerance& tol = {});

// Embeds an SSS representation whose block t is node order[t] of the graph.
// Edges off the path carry zero generators.
GssRep gss_from_sss(const SssRep& rep, const GraphPartition& graph);

Index gss_girs_bound(const GssRep& rep);

// Random generators with the given state dimension on every node (for tests).
GssRep gss_random(const GraphPartition& graph, Index dim, double scale, std::uint64_t seed);

}  // namespace rsm
