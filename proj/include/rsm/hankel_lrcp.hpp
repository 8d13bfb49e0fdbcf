#pragma once

#include "rsm/linalg.hpp"
#include "rsm/lrcp.hpp"
#include "rsm/partition.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rsm {

// Strictly lower block triangle of a partitioned matrix with the (n, 1)
// corner unknown.  Blocks are kept in a dense N x N array; entries on or above
// the block diagonal and the corner itself are ignored (and held at zero).
class HankelCompletionProblem {
 public:
  HankelCompletionProblem() = default;
  HankelCompletionProblem(BlockPartition partition, const Matrix& a);

  const BlockPartition& partition() const { return part_; }
  Index n() const { return part_.count(); }
  Index corner_rows() const { return part_.size(n() - 1); }
  Index corner_cols() const { return part_.size(0); }
  const Matrix& data() const { return data_; }
  Matrix& data() { return data_; }

  // Block (i, j), 0-based, i > j, (i, j) != (n-1, 0).
  Matrix lower_block(Index i, Index j) const;
  void set_lower_block(Index i, Index j, const Matrix& m);

 private:
  BlockPartition part_;
  Matrix data_;
};

// Rows of blocks k..n-1, columns of blocks 0..k-1 (k counts the column blocks,
// 1 <= k <= n-1), with x placed in the corner.
Matrix hankel_block(const HankelCompletionProblem& p, Index k, const Matrix& x);

// The Hankel block as a 2x2 completion problem:
//   A = rows k..n-2 x block 0, B = rows k..n-2 x blocks 1..k-1,
//   C = row n-1 x blocks 1..k-1.
Lrcp2x2Problem block_problem(const HankelCompletionProblem& p, Index k);

Index per_block_minimum(const HankelCompletionProblem& p, Index k, const Tolerance& tol = {});

// One elementary rank-preserving update applied during normalisation.
struct NormalizationStep {
  enum class Kind { rows, columns } kind;
  Index target = 0;  // row block (rows) or column block (columns) that was modified
  Matrix multiplier; // row: target += multiplier * rows below; column: target += columns left * multiplier
};

struct NormalizationRecord {
  std::vector<NormalizationStep> steps;
};

struct Normalized {
  HankelCompletionProblem problem;
  NormalizationRecord record;
};

// Recombines fixed blocks so that every Hankel rank is unchanged for every
// corner X while the trivial-intersection hypotheses of the restriction steps
// hold.  X itself is never touched.
Normalized normalize(const HankelCompletionProblem& p, const Tolerance& tol = {});

// A solution set of a 2x2 problem with its second free parameter pinned:
//   { sample(solution, F, pinned) : F arbitrary }.
struct RestrictedSolutionSet {
  Lrcp2x2Problem problem;
  Lrcp2x2Solution solution;
  Matrix pinned;

  bool singleton() const { return solution.dims.v_abar == 0; }
  Matrix representative() const;
};

// Full solution set of a problem with the pinned parameter at zero.
RestrictedSolutionSet unrestricted(const Lrcp2x2Problem& p, const Tolerance& tol = {});

// Drops the first `rows` rows of A and B.  Requires R(F^T) and R(B^T) to
// intersect trivially, F being the dropped rows of B.
RestrictedSolutionSet restrict_after_removing_rows(const RestrictedSolutionSet& s, Index rows,
                                                   const Tolerance& tol = {});

// Appends G to B and H to C.  Requires R(B) and R(G) to intersect trivially.
RestrictedSolutionSet restrict_after_adding_columns(const RestrictedSolutionSet& s, const Matrix& g,
                                                    const Matrix& h, const Tolerance& tol = {});

// Corner minimising every Hankel block at once (full sweep).
Matrix solve_all(const HankelCompletionProblem& p, const Tolerance& tol = {});

// Corner minimising block k only, free parameters zero.
Matrix solve_single(const HankelCompletionProblem& p, Index k, const Tolerance& tol = {});

struct Strategy {
  enum class Kind { full, single } kind = Kind::single;
  Index k = 0;  // 0 selects ceil(n/2)

  static Strategy full_sweep() { return {Kind::full, 0}; }
  static Strategy single_block(Index k = 0) { return {Kind::single, k}; }
  Index block(Index n) const { return k > 0 ? k : (n + 1) / 2; }
};

// Parses "full", "single" or "single:K".
Strategy parse_strategy(const std::string& s);

Matrix solve(const HankelCompletionProblem& p, const Strategy& strategy, const Tolerance& tol = {});

// Problem file: "n", the block sizes, then for every (i, j) with i > j and
// (i, j) != (n, 1), in row-major order, a line "i j" (1-based) and a matrix.
void write_hankel_problem(std::ostream& os, const HankelCompletionProblem& p);
HankelCompletionProblem read_hankel_problem(std::istream& is);
HankelCompletionProblem read_hankel_problem(const std::string& path);

}  // namespace rsm
