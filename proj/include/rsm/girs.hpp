#pragma once

#include "rsm/linalg.hpp"
#include "rsm/partition.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rsm {

// Sorted 0-based node indices of an induced subgraph H.  Must be nonempty and
// a proper subset of the nodes.
using Subset = std::vector<Index>;

// Numerical rank of A_{H-bar, H}: rows of the complement, columns of H.
Index hankel_rank(const Matrix& a, const BlockPartition& part, const Subset& h, const Tolerance& tol = {});

// The same block gathered as a dense matrix.
Matrix hankel_submatrix(const Matrix& a, const BlockPartition& part, const Subset& h);

// Number of graph edges with exactly one endpoint in H.
Index boundary_size(const GraphPartition& g, const Subset& h);

struct SubsetPolicy {
  enum class Kind { exhaustive, sampled, prefixes, intervals };
  Kind kind = Kind::exhaustive;
  Index k = 0;
  std::uint64_t seed = 0;

  // Every nonempty proper subset; at most 12 nodes.
  static SubsetPolicy exhaustive() { return {Kind::exhaustive, 0, 0}; }
  // k random contiguous runs along the path order plus k uniform subsets.
  static SubsetPolicy sampled(Index k, std::uint64_t seed) { return {Kind::sampled, k, seed}; }
  // The first j nodes of the path order, j = 1..n-1.
  static SubsetPolicy prefixes() { return {Kind::prefixes, 0, 0}; }
  // Every contiguous run of the path order that is a proper subset.
  static SubsetPolicy intervals() { return {Kind::intervals, 0, 0}; }
};

// Graphs without a stored path use the identity order for path-based policies.
std::vector<Subset> enumerate_subsets(const GraphPartition& g, const SubsetPolicy& policy);

struct GirsCheck {
  Subset subset;
  Index rho = 0;
  Index rank = 0;
  double bound = 0.0;
  double slack = 0.0;  // bound - rank
};

struct GirsReport {
  Index tested = 0;
  double min_slack = 0.0;
  std::vector<GirsCheck> violations;
  bool ok() const { return violations.empty(); }
};

// Tests rank(A_{H-bar,H}) <= c * rho(H) over the subsets chosen by the policy.
GirsReport verify_girs(const Matrix& a, const GraphPartition& g, double c, const SubsetPolicy& policy,
                       const Tolerance& tol = {});

// CSV rows "subset;rho;rank;bound;slack" with 1-based node lists joined by
// spaces, preceded by a header row.
void write_girs_report(std::ostream& os, const GirsReport& report);

// max over the tested subsets of rank / rho (subsets with rho = 0 must have
// rank 0, otherwise the result is infinite).
double estimate_girs_constant(const Matrix& a, const GraphPartition& g, const SubsetPolicy& policy,
                              const Tolerance& tol = {});

struct InvarianceReport {
  bool holds = true;
  Index tested = 0;
  std::vector<Subset> mismatches;
  // Subsets whose singular values fall within a factor 10 of the cutoff on
  // either side, where the integer comparison is fragile.
  std::vector<std::string> warnings;
};

// Compares Hankel ranks of A and its inverse on the line graph of the partition.
InvarianceReport check_inverse_invariance(const Matrix& a, const BlockPartition& part, const SubsetPolicy& policy,
                                          const Tolerance& tol = {});

std::string format_subset(const Subset& h);

}  // namespace rsm
