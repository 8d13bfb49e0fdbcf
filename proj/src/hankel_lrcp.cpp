#include "rsm/hankel_lrcp.hpp"

#include "rsm/errors.hpp"
#include "rsm/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace rsm {

namespace {

std::string str(Index v) { return std::to_string(v); }

// Rows of blocks [r0, r1) and columns of blocks [c0, c1) of the data array.
Matrix span_blocks(const HankelCompletionProblem& p, Index r0, Index r1, Index c0, Index c1) {
  const BlockPartition& bp = p.partition();
  const Index row0 = bp.offset(r0), rows = bp.offset(r1) - row0;
  const Index col0 = bp.offset(c0), cols = bp.offset(c1) - col0;
  return p.data().block(row0, col0, rows, cols);
}

// dim(R(a) intersect R(b)) from ranks.
Index intersection_dim(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  return numerical_rank(a, tol) + numerical_rank(b, tol) - numerical_rank(hcat(a, b), tol);
}

// Smallest pinned parameter moving the new solution set inside the old one.
// Old set = { X : X Pi = X_old Pi } where Pi projects away from the free row
// space of the old set; the new set is X_part + F q_abar + p_cbar Z.
RestrictedSolutionSet restrict_to(const RestrictedSolutionSet& old, const Lrcp2x2Problem& next,
                                  const Tolerance& tol, const char* who) {
  RestrictedSolutionSet out;
  out.problem = next;
  out.solution = solve_set(next, tol);
  const Lrcp2x2Solution& ns = out.solution;

  const Matrix x_old = old.representative();
  const Index cols = x_old.cols();
  const Matrix qo = old.solution.dims.v_abar > 0 ? svd_at(old.solution.q_abar_a, tol).v : Matrix(cols, 0);

  // The new free row space must stay inside the old one.
  if (ns.dims.v_abar > 0) {
    const Matrix& q = ns.q_abar_a;
    const double leak = (q - (q * qo) * qo.transpose()).norm();
    if (leak > 1e-6 * std::max(1.0, q.norm()))
      throw DegeneracyError(std::string(who) + ": free row space of the new set is not contained in the old one (" +
                            std::to_string(leak) + ")");
  }

  const Matrix x_part =
      sample(ns, Matrix::Zero(ns.x_rows(), ns.dims.v_abar), Matrix::Zero(ns.dims.w_cbar, ns.x_cols()));
  const Matrix gap = (x_old - x_part) - ((x_old - x_part) * qo) * qo.transpose();
  out.pinned = Matrix::Zero(ns.dims.w_cbar, cols);
  if (ns.dims.w_cbar > 0) out.pinned = pinv(ns.p_c_cbar, tol) * gap;

  const Matrix miss = gap - ns.p_c_cbar * out.pinned;
  if (miss.norm() > 1e-6 * std::max(1.0, x_old.norm()))
    throw DegeneracyError(std::string(who) + ": new solution set does not meet the old one (residual " +
                          std::to_string(miss.norm()) + ")");
  return out;
}

}  // namespace

HankelCompletionProblem::HankelCompletionProblem(BlockPartition partition, const Matrix& a)
    : part_(std::move(partition)) {
  if (part_.count() < 2) throw ShapeError("HankelCompletionProblem: need at least two blocks");
  if (a.rows() != part_.total() || a.cols() != part_.total())
    throw ShapeError("HankelCompletionProblem: matrix is " + str(a.rows()) + "x" + str(a.cols()) +
                     ", partition total " + str(part_.total()));
  data_ = Matrix::Zero(a.rows(), a.cols());
  const Index n = part_.count();
  for (Index i = 1; i < n; ++i)
    for (Index j = 0; j < i; ++j)
      if (!(i == n - 1 && j == 0)) block(data_, part_, i, j) = block(a, part_, i, j);
}

Matrix HankelCompletionProblem::lower_block(Index i, Index j) const {
  if (i <= j || i >= n() || j < 0) throw ShapeError("lower_block: (" + str(i + 1) + "," + str(j + 1) + ") is not strictly lower");
  return block(data_, part_, i, j);
}

void HankelCompletionProblem::set_lower_block(Index i, Index j, const Matrix& m) {
  if (i <= j || i >= n() || j < 0) throw ShapeError("set_lower_block: (" + str(i + 1) + "," + str(j + 1) + ") is not strictly lower");
  if (i == n() - 1 && j == 0) throw ShapeError("set_lower_block: the corner is the unknown");
  if (m.rows() != part_.size(i) || m.cols() != part_.size(j)) throw ShapeError("set_lower_block: shape mismatch");
  block(data_, part_, i, j) = m;
}

Matrix hankel_block(const HankelCompletionProblem& p, Index k, const Matrix& x) {
  const Index n = p.n();
  if (k < 1 || k > n - 1) throw ShapeError("hankel_block: k = " + str(k) + " outside 1.." + str(n - 1));
  if (x.rows() != p.corner_rows() || x.cols() != p.corner_cols())
    throw ShapeError("hankel_block: corner must be " + str(p.corner_rows()) + "x" + str(p.corner_cols()));
  Matrix h = span_blocks(p, k, n, 0, k);
  h.bottomLeftCorner(x.rows(), x.cols()) = x;
  return h;
}

Lrcp2x2Problem block_problem(const HankelCompletionProblem& p, Index k) {
  const Index n = p.n();
  if (k < 1 || k > n - 1) throw ShapeError("block_problem: k = " + str(k) + " outside 1.." + str(n - 1));
  return Lrcp2x2Problem(span_blocks(p, k, n - 1, 0, 1), span_blocks(p, k, n - 1, 1, k), span_blocks(p, n - 1, n, 1, k));
}

Index per_block_minimum(const HankelCompletionProblem& p, Index k, const Tolerance& tol) {
  return min_rank_bound(block_problem(p, k), tol);
}

Normalized normalize(const HankelCompletionProblem& p, const Tolerance& tol) {
  Normalized out{p, {}};
  HankelCompletionProblem& q = out.problem;
  Matrix& m = q.data();
  const BlockPartition& bp = q.partition();
  const Index n = q.n();

  // Row blocks, bottom-up: row r gets combinations of rows r+1..n-2 so that
  // its part over blocks 1..r-1 is orthogonal to theirs.
  for (Index r = n - 2; r >= 1; --r) {
    const Index row0 = bp.offset(r), rows = bp.size(r);
    const Index below0 = bp.offset(r + 1), below = bp.offset(n - 1) - below0;
    const Index width = bp.offset(r);  // columns of blocks 0..r-1
    if (below == 0) continue;
    const Index c1 = bp.offset(1);
    Matrix e = m.block(row0, 0, rows, c1);
    Matrix f = m.block(row0, c1, rows, width - c1);
    const Matrix at = m.block(below0, 0, below, c1);
    const Matrix bt = m.block(below0, c1, below, width - c1);

    const Matrix bt_pinv = pinv(bt, tol);
    Matrix s1 = -f * bt_pinv;
    // second pass reduces E with rows of (I - Bt Bt^+) At, which leaves F alone
    const Matrix nproj = Matrix::Identity(below, below) - bt * bt_pinv;
    const Matrix na = nproj * at;
    const Matrix e1 = e + s1 * at;
    const Matrix s2 = -e1 * pinv(na, tol) * nproj;
    const Matrix s = s1 + s2;

    m.block(row0, 0, rows, width) += s * m.block(below0, 0, below, width);
    out.record.steps.push_back({NormalizationStep::Kind::rows, r, s});
  }

  // Column blocks, left to right: column c gets combinations of columns
  // 1..c-1 so that its part over rows c+1..n-2 leaves their column space.
  for (Index c = 1; c <= n - 2; ++c) {
    const Index col0 = bp.offset(c), cols = bp.size(c);
    const Index c1 = bp.offset(1);
    const Index left = col0 - c1;
    if (left == 0) continue;
    const Index row0 = bp.offset(c + 1), rows = bp.offset(n - 1) - row0;
    const Index all_rows = bp.total() - row0;
    const Matrix bb = m.block(row0, c1, rows, left);
    const Matrix g = m.block(row0, col0, rows, cols);
    const Matrix t = -pinv(bb, tol) * g;
    m.block(row0, col0, all_rows, cols) += m.block(row0, c1, all_rows, left) * t;
    out.record.steps.push_back({NormalizationStep::Kind::columns, c, t});
  }
  return out;
}

Matrix RestrictedSolutionSet::representative() const {
  return sample(solution, Matrix::Zero(solution.x_rows(), solution.dims.v_abar), pinned);
}

RestrictedSolutionSet unrestricted(const Lrcp2x2Problem& p, const Tolerance& tol) {
  RestrictedSolutionSet s;
  s.problem = p;
  s.solution = solve_set(p, tol);
  s.pinned = Matrix::Zero(s.solution.dims.w_cbar, s.solution.x_cols());
  return s;
}

RestrictedSolutionSet restrict_after_removing_rows(const RestrictedSolutionSet& s, Index rows, const Tolerance& tol) {
  const Lrcp2x2Problem& p = s.problem;
  if (rows < 0 || rows > p.a.rows()) throw ShapeError("restrict_after_removing_rows: bad row count " + str(rows));
  if (rows == 0) return s;
  const Matrix f = p.b.topRows(rows);
  const Index keep = p.a.rows() - rows;
  const Matrix b = p.b.bottomRows(keep);
  if (intersection_dim(f.transpose(), b.transpose(), tol) != 0)
    throw HypothesisError("restrict_after_removing_rows: row spaces of F and B intersect nontrivially");
  Lrcp2x2Problem next(p.a.bottomRows(keep), b, p.c);
  return restrict_to(s, next, tol, "restrict_after_removing_rows");
}

RestrictedSolutionSet restrict_after_adding_columns(const RestrictedSolutionSet& s, const Matrix& g, const Matrix& h,
                                                    const Tolerance& tol) {
  const Lrcp2x2Problem& p = s.problem;
  if (g.rows() != p.b.rows() || h.rows() != p.c.rows() || g.cols() != h.cols())
    throw ShapeError("restrict_after_adding_columns: G/H shapes do not fit the problem");
  if (g.cols() == 0) return s;
  if (intersection_dim(p.b, g, tol) != 0)
    throw HypothesisError("restrict_after_adding_columns: column spaces of B and G intersect nontrivially");
  Lrcp2x2Problem next(p.a, hcat(p.b, g), hcat(p.c, h));
  return restrict_to(s, next, tol, "restrict_after_adding_columns");
}

Matrix solve_all(const HankelCompletionProblem& p, const Tolerance& tol) {
  const Index n = p.n();
  const Normalized norm = normalize(p, tol);
  const HankelCompletionProblem& q = norm.problem;
  const BlockPartition& bp = q.partition();

  RestrictedSolutionSet s = unrestricted(block_problem(q, 1), tol);
  for (Index k = 1; k <= n - 2 && !s.singleton(); ++k) {
    s = restrict_after_removing_rows(s, bp.size(k), tol);
    const Matrix g = span_blocks(q, k + 1, n - 1, k, k + 1);
    const Matrix h = span_blocks(q, n - 1, n, k, k + 1);
    s = restrict_after_adding_columns(s, g, h, tol);
  }
  const Matrix x = s.representative();

  for (Index k = 1; k <= n - 1; ++k) {
    const Index got = numerical_rank(hankel_block(p, k, x), tol);
    const Index want = per_block_minimum(p, k, tol);
    if (got != want)
      throw DegeneracyError("solve_all: Hankel block " + str(k) + " has rank " + str(got) + ", minimum is " + str(want));
  }
  return x;
}

Matrix solve_single(const HankelCompletionProblem& p, Index k, const Tolerance& tol) {
  return sample_zero(solve_set(block_problem(p, k), tol));
}

Strategy parse_strategy(const std::string& s) {
  if (s == "full") return Strategy::full_sweep();
  if (s == "single") return Strategy::single_block();
  if (s.rfind("single:", 0) == 0) {
    const std::string num = s.substr(7);
    try {
      std::size_t used = 0;
      const long k = std::stol(num, &used);
      if (used == num.size() && k >= 1) return Strategy::single_block(k);
    } catch (const std::exception&) {
    }
  }
  throw ParseError("unknown strategy '" + s + "' (expected full, single or single:K)");
}

Matrix solve(const HankelCompletionProblem& p, const Strategy& strategy, const Tolerance& tol) {
  if (strategy.kind == Strategy::Kind::full) return solve_all(p, tol);
  const Index k = strategy.block(p.n());
  if (k > p.n() - 1) throw ShapeError("solve: block " + str(k) + " exceeds n-1 = " + str(p.n() - 1));
  return solve_single(p, k, tol);
}

void write_hankel_problem(std::ostream& os, const HankelCompletionProblem& p) {
  write_partition(os, p.partition());
  const Index n = p.n();
  for (Index i = 1; i < n; ++i)
    for (Index j = 0; j < i; ++j) {
      if (i == n - 1 && j == 0) continue;
      os << i + 1 << ' ' << j + 1 << '\n';
      write_matrix(os, p.lower_block(i, j));
    }
}

HankelCompletionProblem read_hankel_problem(std::istream& is) {
  const BlockPartition part = read_partition(is);
  const Index n = part.count();
  if (n < 2) throw ParseError("Hankel problem needs at least two blocks");
  Matrix a = Matrix::Zero(part.total(), part.total());
  for (Index i = 1; i < n; ++i)
    for (Index j = 0; j < i; ++j) {
      if (i == n - 1 && j == 0) continue;
      const long long ri = detail::read_int(is, "block row index");
      const long long rj = detail::read_int(is, "block column index");
      if (ri != i + 1 || rj != j + 1)
        throw ParseError("expected block " + str(i + 1) + " " + str(j + 1) + ", got " + std::to_string(ri) + " " +
                         std::to_string(rj));
      const Matrix m = read_matrix(is);
      if (m.rows() != part.size(i) || m.cols() != part.size(j))
        throw ParseError("block " + str(i + 1) + " " + str(j + 1) + " has the wrong shape");
      block(a, part, i, j) = m;
    }
  return HankelCompletionProblem(part, a);
}

HankelCompletionProblem read_hankel_problem(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "' for reading");
  return read_hankel_problem(f);
}

}  // namespace rsm
