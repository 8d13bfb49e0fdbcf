#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsm/css.hpp"
#include "rsm/dv.hpp"
#include "rsm/errors.hpp"
#include "rsm/girs.hpp"
#include "rsm/testmat.hpp"

using namespace rsm;

namespace {

// Eliminates the stacked states of g = V^T x + Z[W] g, b = D x + Z[U] g.
Matrix implicit_dense(const DvRep& rep) {
  const BlockPartition& bp = rep.graph.blocks();
  const Index n = rep.graph.nodes();
  std::vector<Index> off(std::size_t(n) + 1, 0);
  for (Index i = 0; i < n; ++i) off[std::size_t(i) + 1] = off[std::size_t(i)] + rep.r[std::size_t(i)];
  const Index s = off.back(), nn = bp.total();
  Matrix w = Matrix::Zero(s, s), u = Matrix::Zero(nn, s), vt = Matrix::Zero(s, nn), d = Matrix::Zero(nn, nn);
  for (Index i = 0; i < n; ++i) {
    block(d, bp, i, i) = rep.d[std::size_t(i)];
    vt.block(off[std::size_t(i)], bp.offset(i), rep.r[std::size_t(i)], bp.size(i)) = rep.v[std::size_t(i)].transpose();
  }
  for (const auto& [k, m] : rep.w) w.block(off[std::size_t(k.first)], off[std::size_t(k.second)], m.rows(), m.cols()) = m;
  for (const auto& [k, m] : rep.u) u.block(bp.offset(k.first), off[std::size_t(k.second)], m.rows(), m.cols()) = m;
  if (s == 0) return d;
  return d + u * (Matrix::Identity(s, s) - w).fullPivLu().solve(vt);
}

Matrix block_tridiagonal(const BlockPartition& p, Rng& rng) {
  Matrix a = Matrix::Zero(p.total(), p.total());
  for (Index i = 0; i < p.count(); ++i) {
    block(a, p, i, i) = rng.matrix(p.size(i), p.size(i), -1, 1);
    block(a, p, i, i).diagonal().array() += 4.0;
    if (i > 0) {
      block(a, p, i, i - 1) = rng.matrix(p.size(i), p.size(i - 1), -1, 1);
      block(a, p, i - 1, i) = rng.matrix(p.size(i - 1), p.size(i), -1, 1);
    }
  }
  return a;
}

// Matrix with the sparsity of a graph: nonzero diagonal and edge blocks only.
Matrix graph_sparse(const GraphPartition& g, Rng& rng) {
  const BlockPartition& p = g.blocks();
  Matrix a = Matrix::Zero(p.total(), p.total());
  for (Index i = 0; i < g.nodes(); ++i) {
    block(a, p, i, i) = rng.matrix(p.size(i), p.size(i), -1, 1);
    block(a, p, i, i).diagonal().array() += 6.0;
    for (Index j : g.neighbors(i)) block(a, p, i, j) = rng.matrix(p.size(i), p.size(j), -1, 1);
  }
  return a;
}

double cond(const Matrix& a) {
  const Vector s = oracle::singular_values(a);
  return s(0) / s(s.size() - 1);
}

}  // namespace

TEST(DvFromSparse, BlockTridiagonalOnLine) {
  Rng rng(1);
  BlockPartition p({2, 3, 1, 2});
  Matrix a = block_tridiagonal(p, rng);
  DvRep d = dv_from_sparse(a, line_graph(p));
  Vector x = rng.vector(8, -1, 1);
  EXPECT_LT((dv_apply(d, x) - a * x).norm(), 1e-14 * (a * x).norm());
  EXPECT_LT(oracle::rel_err(dv_to_dense(d), a), 1e-15);
  for (Index i = 0; i < 4; ++i) EXPECT_EQ(d.r[std::size_t(i)], p.size(i));
  for (const auto& [k, m] : d.w) EXPECT_EQ(m.norm(), 0.0);
}

TEST(DvFromSparse, ThreeByThreeMeshAndPoisson) {
  Rng rng(2);
  GraphPartition mesh = mesh_graph(3, 3, BlockPartition::uniform(9, 2));
  Matrix a = graph_sparse(mesh, rng);
  DvRep d = dv_from_sparse(a, mesh);
  EXPECT_LT(oracle::rel_err(implicit_dense(d), a), 1e-14);
  EXPECT_LT(oracle::rel_err(dv_to_dense(d), a), 1e-14);

  auto [pm, pg] = poisson2d(4);
  DvRep pd = dv_from_sparse(pm, pg);
  Vector x = rng.vector(16, -1, 1);
  EXPECT_LT((dv_apply(pd, x) - pm * x).norm(), 1e-13 * (pm * x).norm());
}

TEST(DvFromSparse, RejectsOffGraphBlock) {
  Rng rng(3);
  BlockPartition p = BlockPartition::uniform(4, 2);
  Matrix a = block_tridiagonal(p, rng);
  block(a, p, 3, 0)(0, 1) = 1e-3;
  EXPECT_THROW(dv_from_sparse(a, line_graph(p)), PreconditionError);
  EXPECT_NO_THROW(dv_from_sparse(a, cycle_graph(p)));
}

TEST(DvApply, RandomRepsAgainstImplicitOracle) {
  std::vector<GraphPartition> graphs{line_graph(BlockPartition({2, 1, 3})), cycle_graph(BlockPartition::uniform(5, 2)),
                                     mesh_graph(3, 3, BlockPartition::uniform(9, 2))};
  for (std::size_t t = 0; t < graphs.size(); ++t) {
    DvRep d = dv_random(graphs[t], 2, 0.3, 10 + t);
    Rng rng(10 + t);
    Vector x = rng.vector(graphs[t].blocks().total(), -1, 1);
    const Matrix dense = implicit_dense(d);
    EXPECT_LT((dv_apply(d, x) - dense * x).norm(), 1e-9 * (dense * x).norm());
    EXPECT_LT(oracle::rel_err(dv_to_dense(d), dense), 1e-9);
  }
}

TEST(DvApply, ShapeError) {
  DvRep d = dv_random(line_graph(BlockPartition::uniform(3, 2)), 1, 0.3, 4);
  EXPECT_THROW(dv_apply(d, Vector::Ones(5)), ShapeError);
}

TEST(DvFinalize, IllPosedThrows) {
  BlockPartition p = BlockPartition::uniform(2, 1);
  GraphPartition g = line_graph(p);
  DvRep d;
  d.graph = g;
  d.d = {Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  d.v = {Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
  d.r = {1, 1};
  // I - Z[W] = [[1, -1], [-1, 1]] is singular
  d.w[{0, 1}] = Matrix::Ones(1, 1);
  d.w[{1, 0}] = Matrix::Ones(1, 1);
  d.u[{0, 1}] = Matrix::Ones(1, 1);
  d.u[{1, 0}] = Matrix::Ones(1, 1);
  EXPECT_THROW(d.finalize(), IllPosedError);
  d.w[{1, 0}] = Matrix::Constant(1, 1, 0.5);
  EXPECT_NO_THROW(d.finalize());
}

TEST(DvInvert, BlockDiagonalWhenNoCoupling) {
  Rng rng(5);
  BlockPartition p({2, 3, 2});
  Matrix a = Matrix::Zero(7, 7);
  for (Index i = 0; i < 3; ++i) {
    block(a, p, i, i) = rng.matrix(p.size(i), p.size(i), -1, 1);
    block(a, p, i, i).diagonal().array() += 3.0;
  }
  DvRep d = dv_from_sparse(a, line_graph(p));
  DvRep inv = dv_invert(d);
  for (Index i = 0; i < 3; ++i) EXPECT_LT((inv.d[std::size_t(i)] - block(a, p, i, i).inverse()).norm(), 1e-13);
  EXPECT_LT((dv_to_dense(inv) * a - Matrix::Identity(7, 7)).norm(), 1e-13);
}

TEST(DvInvert, ShermanMorrisonWoodbury) {
  std::vector<GraphPartition> graphs{cycle_graph(BlockPartition::uniform(6, 2)), mesh_graph(3, 3, BlockPartition::uniform(9, 2)),
                                     line_graph(BlockPartition({3, 1, 2, 2}))};
  for (int t = 0; t < 20; ++t) {
    const GraphPartition& g = graphs[std::size_t(t) % graphs.size()];
    DvRep d = dv_random(g, 1 + t % 3, 0.2, 300 + std::uint64_t(t));
    const Matrix dense = implicit_dense(d);
    DvRep inv = dv_invert(d);
    EXPECT_EQ(inv.r, d.r);
    const Matrix want = dense.inverse();
    EXPECT_LE((implicit_dense(inv) - want).norm(), 1e-7 * cond(dense) * want.norm()) << "rep " << t;
  }
}

TEST(DvInvert, DoubleInversionAndRoundTrip) {
  DvRep d = dv_random(mesh_graph(2, 3, BlockPartition::uniform(6, 2)), 2, 0.2, 7);
  DvRep back = dv_invert(dv_invert(d));
  EXPECT_LT(oracle::rel_err(dv_to_dense(back), dv_to_dense(d)), 1e-10);
  Rng rng(7);
  Vector x = rng.vector(12, -1, 1);
  EXPECT_LT((dv_apply(dv_invert(d), dv_apply(d, x)) - x).norm(), 1e-10 * x.norm());
}

TEST(DvInvert, SingularDiagonalBlock) {
  DvRep d = dv_random(line_graph(BlockPartition::uniform(3, 2)), 1, 0.2, 8);
  d.d[1] = Matrix::Zero(2, 2);
  EXPECT_THROW(dv_invert(d), SingularError);
}

TEST(DvAlgebra, SumAndProduct) {
  GraphPartition g = mesh_graph(3, 3, BlockPartition({1, 2, 1, 2, 1, 2, 1, 2, 1}));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DvRep a = dv_random(g, 1 + seed % 2, 0.3, 20 + seed);
    DvRep b = dv_random(g, 2, 0.3, 40 + seed);
    const Matrix da = implicit_dense(a), db = implicit_dense(b);
    DvRep sum = dv_add(a, b), prod = dv_multiply(a, b);
    for (Index i = 0; i < 9; ++i) {
      EXPECT_EQ(sum.r[std::size_t(i)], a.r[std::size_t(i)] + b.r[std::size_t(i)]);
      EXPECT_EQ(prod.r[std::size_t(i)], a.r[std::size_t(i)] + b.r[std::size_t(i)]);
    }
    EXPECT_LE((implicit_dense(sum) - (da + db)).norm(), 1e-9 * (da + db).norm());
    EXPECT_LE((implicit_dense(prod) - da * db).norm(), 1e-9 * (da * db).norm());
  }
}

TEST(DvAlgebra, NeutralElements) {
  BlockPartition p = BlockPartition::uniform(4, 2);
  GraphPartition g = cycle_graph(p);
  DvRep a = dv_random(g, 2, 0.3, 50);
  DvRep zero = dv_from_sparse(Matrix::Zero(8, 8), g);
  DvRep id = dv_from_sparse(Matrix::Identity(8, 8), g);
  const Matrix da = dv_to_dense(a);
  EXPECT_LT((dv_to_dense(dv_add(a, zero)) - da).norm(), 1e-12 * da.norm());
  EXPECT_LT((dv_to_dense(dv_multiply(a, id)) - da).norm(), 1e-12 * da.norm());
  EXPECT_LT((dv_to_dense(dv_multiply(id, a)) - da).norm(), 1e-12 * da.norm());
}

TEST(DvAlgebra, GraphMismatch) {
  DvRep a = dv_random(line_graph(BlockPartition::uniform(4, 2)), 1, 0.3, 1);
  DvRep b = dv_random(cycle_graph(BlockPartition::uniform(4, 2)), 1, 0.3, 2);
  EXPECT_THROW(dv_add(a, b), ShapeError);
  EXPECT_THROW(dv_multiply(a, b), ShapeError);
}

TEST(DvSolve, DiagonalSparseAndTwoRoutes) {
  Rng rng(60);
  BlockPartition p({2, 2, 3});
  Matrix diag = Matrix::Zero(7, 7);
  for (Index i = 0; i < 3; ++i) block(diag, p, i, i) = rng.matrix(p.size(i), p.size(i), -1, 1) + 3 * Matrix::Identity(p.size(i), p.size(i));
  Vector b = rng.vector(7, -1, 1);
  Vector x = dv_solve(dv_from_sparse(diag, line_graph(p)), b);
  for (Index i = 0; i < 3; ++i)
    EXPECT_LT((segment(x, p, i) - block(diag, p, i, i).lu().solve(segment(b, p, i))).norm(), 1e-13);

  auto [pm, pg] = poisson2d(5);
  Vector rhs = rng.vector(25, -1, 1);
  Vector px = dv_solve(dv_from_sparse(pm, pg), rhs);
  EXPECT_LT((px - pm.fullPivLu().solve(rhs)).norm(), 1e-10 * px.norm());

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DvRep d = dv_random(mesh_graph(3, 3, BlockPartition::uniform(9, 2)), 2, 0.3, 70 + seed);
    Vector r = rng.vector(18, -1, 1);
    Vector sol = dv_solve(d, r);
    EXPECT_LE((dv_apply(d, sol) - r).norm(), 1e-8 * cond(dv_to_dense(d)) * r.norm());
    EXPECT_LT((dv_apply(dv_invert(d), r) - sol).norm(), 1e-9 * sol.norm());
  }
}

TEST(DvSolve, SingularThrows) {
  BlockPartition p = BlockPartition::uniform(3, 2);
  EXPECT_THROW(dv_solve(dv_from_sparse(Matrix::Zero(6, 6), line_graph(p)), Vector::Ones(6)), SingularError);
}

TEST(DvFromGss, LineCycleMeshMergeStates) {
  Rng rng(80);
  BlockPartition p = BlockPartition::uniform(5, 2);
  Matrix a = random_sss_matrix(p, 2, rng);
  SssRep s = sss_from_dense(a, p);
  std::vector<GssRep> reps{gss_from_sss(s, line_graph(p)), css_to_gss(css_from_dense(a, p)),
                           gss_random(mesh_graph(4, 4, BlockPartition::uniform(16, 1)).with_order(hilbert_order(4)), 1, 0.4, 81)};
  for (const GssRep& g : reps) {
    DvRep d = dv_from_gss(g);
    for (Index i = 0; i < g.graph.nodes(); ++i)
      EXPECT_EQ(d.r[std::size_t(i)], g.rg[std::size_t(i)] + g.rh[std::size_t(i)]);
    const Matrix want = gss_to_dense(g);
    EXPECT_LT(oracle::rel_err(implicit_dense(d), want), 1e-10);
  }
}

TEST(DvGirs, SampledBound) {
  DvRep d = dv_random(mesh_graph(4, 4, BlockPartition::uniform(16, 3)), 1, 0.3, 90);
  EXPECT_EQ(dv_girs_bound(d), 2);
  GirsReport rep = verify_girs(dv_to_dense(d), d.graph, double(dv_girs_bound(d)), SubsetPolicy::sampled(25, 90));
  EXPECT_TRUE(rep.ok());
}
