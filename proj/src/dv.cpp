#include "rsm/dv.hpp"

#include "rsm/errors.hpp"
#include "rsm/testmat.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <string>

namespace rsm {

using SparseMatrix = Eigen::SparseMatrix<double>;
using SparseSolver = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

struct DvRep::Factor {
  std::vector<Index> offsets;  // start of g_i in the stacked state vector
  SparseSolver lu;
};

namespace {

using std::size_t;
using Triplets = std::vector<Eigen::Triplet<double>>;

std::string str(Index v) { return std::to_string(v); }

const Matrix& edge(const EdgeMap& m, Index i, Index j, const char* name) {
  auto it = m.find({i, j});
  if (it == m.end()) throw ShapeError(std::string("DvRep: missing ") + name + "(" + str(i + 1) + "," + str(j + 1) + ")");
  return it->second;
}

void add_block(Triplets& t, Index r0, Index c0, const Matrix& m, double sign = 1.0) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) t.emplace_back(r0 + i, c0 + j, sign * m(i, j));
}

void require_same_graph(const DvRep& a, const DvRep& b, const char* who) {
  if (!(a.graph.blocks() == b.graph.blocks()) || a.graph.edges() != b.graph.edges())
    throw ShapeError(std::string(who) + ": operands live on different graphs");
}

Matrix zero_like_state(Index rows, Index cols) { return Matrix::Zero(rows, cols); }

}  // namespace

void DvRep::validate() const {
  const BlockPartition& bp = graph.blocks();
  const Index n = graph.nodes();
  if (Index(d.size()) != n || Index(v.size()) != n || Index(r.size()) != n)
    throw ShapeError("DvRep: per-node families need one entry per node");
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    if (d[s].rows() != bp.size(i) || d[s].cols() != bp.size(i)) throw ShapeError("DvRep: D(" + str(i + 1) + ") has the wrong shape");
    if (v[s].rows() != bp.size(i) || v[s].cols() != r[s]) throw ShapeError("DvRep: V(" + str(i + 1) + ") has the wrong shape");
    for (Index j : graph.neighbors(i)) {
      const Matrix& wij = edge(w, i, j, "W");
      const Matrix& uij = edge(u, i, j, "U");
      if (wij.rows() != r[s] || wij.cols() != r[size_t(j)])
        throw ShapeError("DvRep: W(" + str(i + 1) + "," + str(j + 1) + ") has the wrong shape");
      if (uij.rows() != bp.size(i) || uij.cols() != r[size_t(j)])
        throw ShapeError("DvRep: U(" + str(i + 1) + "," + str(j + 1) + ") has the wrong shape");
    }
  }
}

void DvRep::finalize() {
  validate();
  const Index n = graph.nodes();
  auto f = std::make_shared<Factor>();
  f->offsets.assign(size_t(n + 1), 0);
  for (Index i = 0; i < n; ++i) f->offsets[size_t(i + 1)] = f->offsets[size_t(i)] + r[size_t(i)];
  const Index total = f->offsets.back();
  Triplets t;
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < r[size_t(i)]; ++k) t.emplace_back(f->offsets[size_t(i)] + k, f->offsets[size_t(i)] + k, 1.0);
    for (Index j : graph.neighbors(i)) add_block(t, f->offsets[size_t(i)], f->offsets[size_t(j)], edge(w, i, j, "W"), -1.0);
  }
  if (total > 0) {
    SparseMatrix m(total, total);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    f->lu.compute(m);
    if (f->lu.info() != Eigen::Success) throw IllPosedError("DvRep: I - Z[W] is singular (" + f->lu.lastErrorMessage() + ")");
  }
  factor = std::move(f);
}

DvRep dv_from_sparse(const Matrix& a, const GraphPartition& graph) {
  const BlockPartition& bp = graph.blocks();
  if (a.rows() != bp.total() || a.cols() != bp.total()) throw ShapeError("dv_from_sparse: matrix does not match the partition");
  const Index n = graph.nodes();
  DvRep rep;
  rep.graph = graph;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      if (i != j && !graph.has_edge(i, j) && block(a, bp, i, j).cwiseAbs().maxCoeff() != 0.0)
        throw PreconditionError("dv_from_sparse: block (" + str(i + 1) + "," + str(j + 1) + ") is nonzero but not an edge");
    rep.d.push_back(block(a, bp, i, i));
    rep.v.push_back(Matrix::Identity(bp.size(i), bp.size(i)));
    rep.r.push_back(bp.size(i));
  }
  for (Index i = 0; i < n; ++i)
    for (Index j : graph.neighbors(i)) {
      rep.u[{i, j}] = block(a, bp, i, j);
      rep.w[{i, j}] = Matrix::Zero(bp.size(i), bp.size(j));
    }
  rep.finalize();
  return rep;
}

DvRep dv_from_gss(const GssRep& g) {
  g.validate();
  const GraphPartition& graph = g.graph;
  const Index n = graph.nodes();
  DvRep rep;
  rep.graph = graph;
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    rep.d.push_back(g.d[s]);
    rep.v.push_back(hcat(g.v[s], g.q[s]));
    rep.r.push_back(g.rg[s] + g.rh[s]);
  }
  // merged state [g_i; h_i]: successor edges feed the g part, predecessor
  // edges the h part
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    const Index ni = graph.blocks().size(i);
    for (Index j : graph.neighbors(i)) {
      const size_t t = size_t(j);
      Matrix w = Matrix::Zero(rep.r[s], rep.r[t]);
      Matrix u = Matrix::Zero(ni, rep.r[t]);
      if (graph.position(j) > graph.position(i)) {
        w.topLeftCorner(g.rg[s], g.rg[t]) = g.w.at({i, j});
        u.leftCols(g.rg[t]) = g.u.at({i, j});
      } else {
        w.bottomRightCorner(g.rh[s], g.rh[t]) = g.r.at({i, j});
        u.rightCols(g.rh[t]) = g.p.at({i, j});
      }
      rep.w[{i, j}] = w;
      rep.u[{i, j}] = u;
    }
  }
  rep.finalize();
  return rep;
}

Vector dv_apply(const DvRep& rep, const Vector& x) {
  if (!rep.factor) throw PreconditionError("dv_apply: representation was not finalized");
  const GraphPartition& graph = rep.graph;
  const BlockPartition& bp = graph.blocks();
  const Index n = graph.nodes();
  if (x.size() != bp.total()) throw ShapeError("dv_apply: vector has length " + str(x.size()) + ", expected " + str(bp.total()));
  const auto& off = rep.factor->offsets;
  Vector vx(off.back());
  for (Index i = 0; i < n; ++i) vx.segment(off[size_t(i)], rep.r[size_t(i)]) = rep.v[size_t(i)].transpose() * segment(x, bp, i);
  Vector g = vx;
  if (off.back() > 0) g = rep.factor->lu.solve(vx);
  Vector b(bp.total());
  for (Index i = 0; i < n; ++i) {
    Vector bi = rep.d[size_t(i)] * segment(x, bp, i);
    for (Index j : graph.neighbors(i)) bi += edge(rep.u, i, j, "U") * g.segment(off[size_t(j)], rep.r[size_t(j)]);
    segment(b, bp, i) = bi;
  }
  return b;
}

Matrix dv_to_dense(const DvRep& rep) {
  const GraphPartition& graph = rep.graph;
  const BlockPartition& bp = graph.blocks();
  const Index n = graph.nodes();
  std::vector<Index> off(size_t(n + 1), 0);
  for (Index i = 0; i < n; ++i) off[size_t(i + 1)] = off[size_t(i)] + rep.r[size_t(i)];
  const Index total = off.back();
  Matrix zw = Matrix::Zero(total, total), zu = Matrix::Zero(bp.total(), total), vt = Matrix::Zero(total, bp.total());
  Matrix d = Matrix::Zero(bp.total(), bp.total());
  for (Index i = 0; i < n; ++i) {
    block(d, bp, i, i) = rep.d[size_t(i)];
    vt.block(off[size_t(i)], bp.offset(i), rep.r[size_t(i)], bp.size(i)) = rep.v[size_t(i)].transpose();
    for (Index j : graph.neighbors(i)) {
      zw.block(off[size_t(i)], off[size_t(j)], rep.r[size_t(i)], rep.r[size_t(j)]) = edge(rep.w, i, j, "W");
      zu.block(bp.offset(i), off[size_t(j)], bp.size(i), rep.r[size_t(j)]) = edge(rep.u, i, j, "U");
    }
  }
  if (total == 0) return d;
  const Matrix lifted = Matrix::Identity(total, total) - zw;
  return d + zu * lifted.fullPivLu().solve(vt);
}

Vector dv_solve(const DvRep& rep, const Vector& b, const Tolerance& tol) {
  (void)tol;
  const GraphPartition& graph = rep.graph;
  const BlockPartition& bp = graph.blocks();
  const Index n = graph.nodes();
  if (b.size() != bp.total()) throw ShapeError("dv_solve: right-hand side has length " + str(b.size()) + ", expected " + str(bp.total()));
  // unknowns of node i stored together: (g_i, x_i)
  std::vector<Index> off(size_t(n + 1), 0);
  for (Index i = 0; i < n; ++i) off[size_t(i + 1)] = off[size_t(i)] + rep.r[size_t(i)] + bp.size(i);
  auto g_at = [&](Index i) { return off[size_t(i)]; };
  auto x_at = [&](Index i) { return off[size_t(i)] + rep.r[size_t(i)]; };
  Triplets t;
  Vector rhs = Vector::Zero(off.back());
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    for (Index k = 0; k < rep.r[s]; ++k) t.emplace_back(g_at(i) + k, g_at(i) + k, 1.0);
    add_block(t, g_at(i), x_at(i), rep.v[s].transpose(), -1.0);
    add_block(t, x_at(i), x_at(i), rep.d[s]);
    for (Index j : graph.neighbors(i)) {
      add_block(t, g_at(i), g_at(j), edge(rep.w, i, j, "W"), -1.0);
      add_block(t, x_at(i), g_at(j), edge(rep.u, i, j, "U"));
    }
    rhs.segment(x_at(i), bp.size(i)) = segment(b, bp, i);
  }
  SparseMatrix m(off.back(), off.back());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  SparseSolver lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw SingularError("dv_solve: merged system is singular (" + lu.lastErrorMessage() + ")");
  const Vector z = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !z.allFinite()) throw SingularError("dv_solve: merged solve failed");
  Vector x(bp.total());
  for (Index i = 0; i < n; ++i) segment(x, bp, i) = z.segment(x_at(i), bp.size(i));
  return x;
}

DvRep dv_invert(const DvRep& rep) {
  const GraphPartition& graph = rep.graph;
  const Index n = graph.nodes();
  DvRep out;
  out.graph = graph;
  out.r = rep.r;
  std::vector<Eigen::FullPivLU<Matrix>> lus;
  for (Index i = 0; i < n; ++i) {
    lus.emplace_back(rep.d[size_t(i)]);
    if (!lus.back().isInvertible()) throw SingularError("dv_invert: diagonal block " + str(i + 1) + " is singular");
  }
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    const Matrix dinv = lus[s].inverse();
    out.d.push_back(dinv);
    out.v.push_back(dinv.transpose() * rep.v[s]);
    for (Index j : graph.neighbors(i)) {
      const Matrix dinv_u = dinv * edge(rep.u, i, j, "U");
      out.u[{i, j}] = -dinv_u;
      out.w[{i, j}] = edge(rep.w, i, j, "W") - rep.v[s].transpose() * dinv_u;
    }
  }
  out.finalize();
  return out;
}

DvRep dv_add(const DvRep& a, const DvRep& b) {
  require_same_graph(a, b, "dv_add");
  const GraphPartition& graph = a.graph;
  DvRep c;
  c.graph = graph;
  for (Index i = 0; i < graph.nodes(); ++i) {
    const size_t s = size_t(i);
    c.d.push_back(a.d[s] + b.d[s]);
    c.v.push_back(hcat(a.v[s], b.v[s]));
    c.r.push_back(a.r[s] + b.r[s]);
    for (Index j : graph.neighbors(i)) {
      c.w[{i, j}] = block_diag(edge(a.w, i, j, "W"), edge(b.w, i, j, "W"));
      c.u[{i, j}] = hcat(edge(a.u, i, j, "U"), edge(b.u, i, j, "U"));
    }
  }
  c.finalize();
  return c;
}

DvRep dv_multiply(const DvRep& a, const DvRep& b) {
  require_same_graph(a, b, "dv_multiply");
  const GraphPartition& graph = a.graph;
  // state [g_B; g_A]: A's flow is driven by z = B x = D_B x + Z[U_B] g_B
  DvRep c;
  c.graph = graph;
  for (Index i = 0; i < graph.nodes(); ++i) {
    const size_t s = size_t(i);
    c.d.push_back(a.d[s] * b.d[s]);
    c.v.push_back(hcat(b.v[s], b.d[s].transpose() * a.v[s]));
    c.r.push_back(a.r[s] + b.r[s]);
    for (Index j : graph.neighbors(i)) {
      const size_t t = size_t(j);
      const Matrix& ub = edge(b.u, i, j, "U");
      Matrix w = Matrix::Zero(c.r[s], b.r[t] + a.r[t]);
      w.topLeftCorner(b.r[s], b.r[t]) = edge(b.w, i, j, "W");
      w.bottomLeftCorner(a.r[s], b.r[t]) = a.v[s].transpose() * ub;
      w.bottomRightCorner(a.r[s], a.r[t]) = edge(a.w, i, j, "W");
      c.w[{i, j}] = w;
      c.u[{i, j}] = hcat(a.d[s] * ub, edge(a.u, i, j, "U"));
    }
  }
  c.finalize();
  return c;
}

DvRep dv_random(const GraphPartition& graph, Index dim, double w_scale, std::uint64_t seed) {
  Rng rng(seed);
  const BlockPartition& bp = graph.blocks();
  DvRep rep;
  rep.graph = graph;
  for (Index i = 0; i < graph.nodes(); ++i) {
    Matrix d = rng.matrix(bp.size(i), bp.size(i), -1.0, 1.0);
    d.diagonal().array() += 2.0 * static_cast<double>(bp.size(i));
    rep.d.push_back(d);
    rep.v.push_back(rng.matrix(bp.size(i), dim, -1.0, 1.0));
    rep.r.push_back(dim);
  }
  for (Index i = 0; i < graph.nodes(); ++i)
    for (Index j : graph.neighbors(i)) {
      rep.w[{i, j}] = rng.matrix(dim, dim, -w_scale, w_scale);
      rep.u[{i, j}] = rng.matrix(bp.size(i), dim, -1.0, 1.0);
    }
  rep.finalize();
  return rep;
}

Index dv_girs_bound(const DvRep& rep) {
  Index m = 0;
  for (Index v : rep.r) m = std::max(m, v);
  return 2 * m;
}

}  // namespace rsm
