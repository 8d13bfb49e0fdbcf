#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsm/css.hpp"
#include "rsm/errors.hpp"
#include "rsm/girs.hpp"
#include "rsm/gss.hpp"
#include "rsm/sss.hpp"
#include "rsm/testmat.hpp"

using namespace rsm;

namespace {

// Dense oracle straight from the implicit equations: stack every g_i and h_i,
// build the block operators W, R, U, P and eliminate the states.
Matrix implicit_dense(const GssRep& rep) {
  const GraphPartition& g = rep.graph;
  const Index n = g.nodes();
  std::vector<Index> go(std::size_t(n) + 1, 0), ho(std::size_t(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    go[std::size_t(i) + 1] = go[std::size_t(i)] + rep.rg[std::size_t(i)];
    ho[std::size_t(i) + 1] = ho[std::size_t(i)] + rep.rh[std::size_t(i)];
  }
  const BlockPartition& bp = g.blocks();
  const Index sg = go.back(), sh = ho.back(), nn = bp.total();
  Matrix w = Matrix::Zero(sg, sg), r = Matrix::Zero(sh, sh);
  Matrix u = Matrix::Zero(nn, sg), p = Matrix::Zero(nn, sh);
  Matrix vt = Matrix::Zero(sg, nn), qt = Matrix::Zero(sh, nn), d = Matrix::Zero(nn, nn);
  for (Index i = 0; i < n; ++i) {
    const auto si = std::size_t(i);
    d.block(bp.offset(i), bp.offset(i), bp.size(i), bp.size(i)) = rep.d[si];
    vt.block(go[si], bp.offset(i), rep.rg[si], bp.size(i)) = rep.v[si].transpose();
    qt.block(ho[si], bp.offset(i), rep.rh[si], bp.size(i)) = rep.q[si].transpose();
  }
  for (const auto& [key, m] : rep.w) w.block(go[std::size_t(key.first)], go[std::size_t(key.second)], m.rows(), m.cols()) = m;
  for (const auto& [key, m] : rep.u) u.block(bp.offset(key.first), go[std::size_t(key.second)], m.rows(), m.cols()) = m;
  for (const auto& [key, m] : rep.r) r.block(ho[std::size_t(key.first)], ho[std::size_t(key.second)], m.rows(), m.cols()) = m;
  for (const auto& [key, m] : rep.p) p.block(bp.offset(key.first), ho[std::size_t(key.second)], m.rows(), m.cols()) = m;
  Matrix out = d;
  if (sg > 0) out += u * (Matrix::Identity(sg, sg) - w).fullPivLu().solve(vt);
  if (sh > 0) out += p * (Matrix::Identity(sh, sh) - r).fullPivLu().solve(qt);
  return out;
}

GraphPartition hilbert_mesh(Index block_size) {
  return mesh_graph(4, 4, BlockPartition::uniform(16, block_size)).with_order(hilbert_order(4));
}

GssRep shifted(GssRep rep, double shift) {
  for (auto& d : rep.d) d.diagonal().array() += shift;
  return rep;
}

}  // namespace

TEST(HilbertOrder, VisitsMeshNeighbours) {
  const std::vector<Index> order = hilbert_order(4);
  ASSERT_EQ(order.size(), 16u);
  GraphPartition g = mesh_graph(4, 4, BlockPartition::uniform(16, 1));
  for (std::size_t t = 1; t < order.size(); ++t) EXPECT_TRUE(g.has_edge(order[t - 1], order[t])) << t;
  EXPECT_NO_THROW(g.with_order(order));
}

TEST(GssFromSss, LineGraphMatchesSss) {
  Rng rng(1);
  BlockPartition p({2, 3, 1, 2, 2});
  Matrix a = random_sss_matrix(p, 2, rng);
  SssRep s = sss_from_dense(a, p);
  GssRep g = gss_from_sss(s, line_graph(p));
  Vector x = rng.vector(p.total(), -1, 1);
  EXPECT_LT((gss_matvec(g, x) - sss_matvec(s, x)).norm(), 1e-12 * x.norm());
  EXPECT_LT(oracle::rel_err(gss_to_dense(g), sss_to_dense(s)), 1e-12);
  EXPECT_LT(oracle::rel_err(implicit_dense(g), a), 1e-12);
}

TEST(GssFromSss, CycleEmbeddingIsCssWithZeroCorners) {
  Rng rng(2);
  BlockPartition p = BlockPartition::uniform(5, 2);
  Matrix a = random_sss_matrix(p, 1, rng);
  SssRep s = sss_from_dense(a, p);
  GssRep g = gss_from_sss(s, cycle_graph(p));
  EXPECT_LT(oracle::rel_err(gss_to_dense(g), a), 1e-12);
  // the wrap edge carries zero generators
  EXPECT_EQ(g.w.at({0, 4}).norm(), 0.0);
  EXPECT_EQ(g.r.at({4, 0}).norm(), 0.0);
}

TEST(GssFromSss, MeshEmbedding) {
  GraphPartition mesh = hilbert_mesh(2);
  Rng rng(3);
  BlockPartition path_blocks = BlockPartition::uniform(16, 2);
  Matrix a = random_sss_matrix(path_blocks, 2, rng);
  SssRep s = sss_from_dense(a, path_blocks);
  GssRep g = gss_from_sss(s, mesh);
  // block (i, j) of the mesh matrix is block (pos i, pos j) of the path matrix
  Matrix dense = gss_to_dense(g);
  for (Index i = 0; i < 16; ++i)
    for (Index j = 0; j < 16; ++j)
      EXPECT_LT((block(dense, mesh.blocks(), i, j) - block(a, path_blocks, mesh.position(i), mesh.position(j))).norm(),
                1e-11);
  EXPECT_LT(oracle::rel_err(implicit_dense(g), dense), 1e-12);
}

TEST(GssFromSss, RoundTripExact) {
  Rng rng(4);
  BlockPartition p = BlockPartition::uniform(6, 3);
  SssRep s = sss_from_dense(random_sss_matrix(p, 2, rng), p);
  EXPECT_LE((gss_to_dense(gss_from_sss(s, line_graph(p))) - sss_to_dense(s)).norm(), 1e-12 * sss_to_dense(s).norm());
}

TEST(GssFromSss, Errors) {
  BlockPartition p = BlockPartition::uniform(4, 2);
  SssRep s = sss_identity(p);
  EXPECT_THROW(gss_from_sss(s, mesh_graph(2, 2, p)), PreconditionError);
  EXPECT_THROW(gss_from_sss(s, line_graph(BlockPartition::uniform(5, 2))), ShapeError);
  EXPECT_THROW(gss_from_sss(s, line_graph(BlockPartition({2, 2, 3, 1}))), ShapeError);
}

TEST(GssMatvec, CycleMatchesCss) {
  Rng rng(5);
  BlockPartition p({2, 3, 2, 2, 3});
  Matrix a = random_sss_matrix(p, 2, rng);
  block(a, p, 4, 0) += random_rank(3, 2, 2, rng);
  block(a, p, 0, 4) += random_rank(2, 3, 1, rng);
  CssRep c = css_from_dense(a, p);
  GssRep g = css_to_gss(c);
  Vector x = rng.vector(p.total(), -1, 1);
  EXPECT_LT((gss_matvec(g, x) - css_matvec(c, x)).norm(), 1e-12 * x.norm());
  EXPECT_LT(oracle::rel_err(implicit_dense(g), a), 1e-10);
}

TEST(GssMatvec, RandomMeshAgainstImplicitOracle) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    GssRep g = gss_random(hilbert_mesh(2), 2, 0.5, seed);
    Rng rng(seed);
    Vector x = rng.vector(32, -1, 1);
    const Matrix dense = implicit_dense(g);
    EXPECT_LT((gss_matvec(g, x) - dense * x).norm(), 1e-10 * (dense * x).norm());
    EXPECT_LT(oracle::rel_err(gss_to_dense(g), dense), 1e-10);
  }
  GssRep g = gss_random(hilbert_mesh(1), 1, 0.5, 9);
  EXPECT_THROW(gss_matvec(g, Vector::Ones(15)), ShapeError);
}

TEST(GssTranspose, MatchesDenseTranspose) {
  std::vector<GraphPartition> graphs{line_graph(BlockPartition({2, 1, 3, 2})), cycle_graph(BlockPartition::uniform(5, 2)),
                                     hilbert_mesh(2)};
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    GssRep g = gss_random(graphs[k], 2, 0.5, 40 + k);
    Rng rng(40 + k);
    const Index n = graphs[k].blocks().total();
    Vector x = rng.vector(n, -1, 1);
    const Matrix dense = implicit_dense(g);
    EXPECT_LT((gss_matvec_transpose(g, x) - dense.transpose() * x).norm(), 1e-10 * (dense.transpose() * x).norm());
  }
}

TEST(GssTranspose, ForwardTransposeConsistency) {
  std::vector<GraphPartition> graphs{line_graph(BlockPartition::uniform(6, 2)), cycle_graph(BlockPartition::uniform(6, 2)),
                                     hilbert_mesh(3)};
  for (std::size_t k = 0; k < graphs.size(); ++k)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      GssRep g = gss_random(graphs[k], 3, 0.4, 100 * k + seed);
      Rng rng(seed + 7);
      const Index n = graphs[k].blocks().total();
      Vector x = rng.vector(n, -1, 1), y = rng.vector(n, -1, 1);
      const Vector ax = gss_matvec(g, x), aty = gss_matvec_transpose(g, y);
      const double lhs = y.dot(ax), rhs = aty.dot(x);
      EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, y.norm() * ax.norm()));
    }
}

TEST(GssTranspose, SymmetricRepMatchesForward) {
  // an SSS rep of a symmetric matrix gives a symmetric operator
  Rng rng(11);
  BlockPartition p = BlockPartition::uniform(5, 2);
  Matrix a = random_sss_matrix(p, 1, rng);
  Matrix sym = a + a.transpose();
  GssRep g = gss_from_sss(sss_from_dense(sym, p), line_graph(p));
  Vector x = rng.vector(10, -1, 1);
  EXPECT_LT((gss_matvec(g, x) - gss_matvec_transpose(g, x)).norm(), 1e-12 * x.norm() * sym.norm());
}

TEST(GssEntry, DiagonalAndLineFormula) {
  GssRep g = gss_random(line_graph(BlockPartition({2, 1, 3, 2})), 2, 0.5, 12);
  for (Index k = 0; k < 4; ++k) EXPECT_EQ(gss_entry(g, k, k), g.d[std::size_t(k)]);
  const Matrix expected = g.p.at({3, 2}) * g.r.at({2, 1}) * g.r.at({1, 0}) * g.q[0].transpose();
  EXPECT_LT((gss_entry(g, 3, 0) - expected).norm(), 1e-13);
  const Matrix upper = g.u.at({0, 1}) * g.w.at({1, 2}) * g.w.at({2, 3}) * g.v[3].transpose();
  EXPECT_LT((gss_entry(g, 0, 3) - upper).norm(), 1e-13);
}

TEST(GssEntry, AgreesWithDenseOnEveryBlock) {
  std::vector<GraphPartition> graphs{line_graph(BlockPartition({1, 2, 2, 3})), cycle_graph(BlockPartition::uniform(6, 2)),
                                     hilbert_mesh(1), hilbert_mesh(2),
                                     mesh_graph(2, 3, BlockPartition::uniform(6, 2)).with_order({0, 1, 2, 5, 4, 3})};
  for (std::size_t t = 0; t < graphs.size(); ++t) {
    GssRep g = gss_random(graphs[t], 2, 0.5, 200 + t);
    const Matrix dense = implicit_dense(g);
    const BlockPartition& bp = graphs[t].blocks();
    for (Index k = 0; k < bp.count(); ++k)
      for (Index l = 0; l < bp.count(); ++l)
        EXPECT_LT((gss_entry(g, k, l) - block(dense, bp, k, l)).norm(), 1e-10 * (1 + dense.norm())) << t << " " << k << " " << l;
  }
}

TEST(GssSolve, IdentityCycleAndMesh) {
  BlockPartition p = BlockPartition::uniform(4, 2);
  GssRep id = gss_from_sss(sss_identity(p), cycle_graph(p));
  Rng rng(13);
  Vector b = rng.vector(8, -1, 1);
  EXPECT_LT((gss_solve(id, b) - b).norm(), 1e-14);

  for (const GraphPartition& graph : {cycle_graph(BlockPartition::uniform(7, 3)), hilbert_mesh(2)}) {
    GssRep g = shifted(gss_random(graph, 2, 0.4, 14), 6.0);
    const Matrix dense = implicit_dense(g);
    Vector rhs = rng.vector(dense.rows(), -1, 1);
    Vector x = gss_solve(g, rhs);
    EXPECT_LT((x - dense.fullPivLu().solve(rhs)).norm(), 1e-9 * x.norm());
    EXPECT_LE((dense * x - rhs).norm(), 1e-8 * rhs.norm());
  }
}

TEST(GssSolve, SingularThrows) {
  BlockPartition p = BlockPartition::uniform(3, 2);
  GssRep z = gss_from_sss(sss_zero(p, {1, 1}, {1, 1}), line_graph(p));
  EXPECT_THROW(gss_solve(z, Vector::Ones(6)), SingularError);
}

TEST(GssGirs, BoundFormula) {
  BlockPartition p = BlockPartition::uniform(4, 2);
  EXPECT_EQ(gss_girs_bound(gss_from_sss(sss_identity(p), line_graph(p))), 0);
  Rng rng(15);
  BlockPartition q = BlockPartition::uniform(6, 3);
  SssRep s = sss_from_dense(random_sss_matrix(q, 2, rng), q);
  Index maxdim = 0;
  for (Index i = 0; i < 5; ++i) maxdim = std::max({maxdim, s.rg[std::size_t(i)], s.rh[std::size_t(i)]});
  EXPECT_EQ(gss_girs_bound(gss_from_sss(s, line_graph(q))), 4 * maxdim);
}

TEST(GssGirs, SampledMeshCheck) {
  GssRep g = gss_random(hilbert_mesh(3), 1, 0.5, 16);
  const Matrix dense = gss_to_dense(g);
  GirsReport rep = verify_girs(dense, g.graph, double(gss_girs_bound(g)), SubsetPolicy::sampled(25, 16));
  EXPECT_GE(rep.tested, 25);
  EXPECT_TRUE(rep.ok());
  EXPECT_GE(rep.min_slack, 0.0);
}
