#include "rsm/gss.hpp"

#include "rsm/errors.hpp"
#include "rsm/testmat.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <string>

namespace rsm {

namespace {

using std::size_t;
using Triplets = std::vector<Eigen::Triplet<double>>;

std::string str(Index v) { return std::to_string(v); }

const Matrix& edge(const EdgeMap& m, Index i, Index j, const char* name) {
  auto it = m.find({i, j});
  if (it == m.end()) throw ShapeError(std::string("GssRep: missing ") + name + "(" + str(i + 1) + "," + str(j + 1) + ")");
  return it->second;
}

void check(const Matrix& m, Index rows, Index cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols)
    throw ShapeError("GssRep: " + what + " is " + str(m.rows()) + "x" + str(m.cols()) + ", expected " + str(rows) + "x" +
                     str(cols));
}

void add_block(Triplets& t, Index r0, Index c0, const Matrix& m, double sign = 1.0) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) t.emplace_back(r0 + i, c0 + j, sign * m(i, j));
}

void add_identity(Triplets& t, Index r0, Index n) {
  for (Index i = 0; i < n; ++i) t.emplace_back(r0 + i, r0 + i, 1.0);
}

// Phi_d(s, l) for every s at or before l on the path: the map from g_l to g_s.
// Phi_u(s, l) for every s at or after l: the map from h_l to h_s.
std::vector<Matrix> downstream_transitions(const GssRep& rep, Index l) {
  const GraphPartition& g = rep.graph;
  std::vector<Matrix> phi(size_t(g.nodes()));
  phi[size_t(l)] = Matrix::Identity(rep.rg[size_t(l)], rep.rg[size_t(l)]);
  for (Index t = g.position(l) - 1; t >= 0; --t) {
    const Index s = g.order()[size_t(t)];
    Matrix acc = Matrix::Zero(rep.rg[size_t(s)], rep.rg[size_t(l)]);
    for (Index j : g.successors(s))
      if (g.position(j) <= g.position(l)) acc += edge(rep.w, s, j, "W") * phi[size_t(j)];
    phi[size_t(s)] = std::move(acc);
  }
  return phi;
}

std::vector<Matrix> upstream_transitions(const GssRep& rep, Index l) {
  const GraphPartition& g = rep.graph;
  std::vector<Matrix> phi(size_t(g.nodes()));
  phi[size_t(l)] = Matrix::Identity(rep.rh[size_t(l)], rep.rh[size_t(l)]);
  for (Index t = g.position(l) + 1; t < g.nodes(); ++t) {
    const Index s = g.order()[size_t(t)];
    Matrix acc = Matrix::Zero(rep.rh[size_t(s)], rep.rh[size_t(l)]);
    for (Index j : g.predecessors(s))
      if (g.position(j) >= g.position(l)) acc += edge(rep.r, s, j, "R") * phi[size_t(j)];
    phi[size_t(s)] = std::move(acc);
  }
  return phi;
}

Matrix entry_from(const GssRep& rep, Index k, Index l, const std::vector<Matrix>& down, const std::vector<Matrix>& up) {
  const GraphPartition& g = rep.graph;
  const BlockPartition& bp = g.blocks();
  if (k == l) return rep.d[size_t(k)];
  Matrix out = Matrix::Zero(bp.size(k), bp.size(l));
  if (g.position(k) < g.position(l)) {
    for (Index s : g.successors(k))
      if (g.position(s) <= g.position(l)) out += edge(rep.u, k, s, "U") * down[size_t(s)] * rep.v[size_t(l)].transpose();
  } else {
    for (Index s : g.predecessors(k))
      if (g.position(s) >= g.position(l)) out += edge(rep.p, k, s, "P") * up[size_t(s)] * rep.q[size_t(l)].transpose();
  }
  return out;
}

void require_order(const GssRep& rep, const char* who) {
  if (!rep.graph.has_order()) throw PreconditionError(std::string(who) + ": graph has no Hamiltonian path");
}

}  // namespace

void GssRep::validate() const {
  require_order(*this, "GssRep");
  const BlockPartition& bp = graph.blocks();
  const Index n = graph.nodes();
  if (Index(d.size()) != n || Index(v.size()) != n || Index(q.size()) != n || Index(rg.size()) != n ||
      Index(rh.size()) != n)
    throw ShapeError("GssRep: per-node families need one entry per node");
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    check(d[s], bp.size(i), bp.size(i), "D(" + str(i + 1) + ")");
    check(v[s], bp.size(i), rg[s], "V(" + str(i + 1) + ")");
    check(q[s], bp.size(i), rh[s], "Q(" + str(i + 1) + ")");
    for (Index j : graph.successors(i)) {
      check(edge(w, i, j, "W"), rg[s], rg[size_t(j)], "W(" + str(i + 1) + "," + str(j + 1) + ")");
      check(edge(u, i, j, "U"), bp.size(i), rg[size_t(j)], "U(" + str(i + 1) + "," + str(j + 1) + ")");
    }
    for (Index j : graph.predecessors(i)) {
      check(edge(r, i, j, "R"), rh[s], rh[size_t(j)], "R(" + str(i + 1) + "," + str(j + 1) + ")");
      check(edge(p, i, j, "P"), bp.size(i), rh[size_t(j)], "P(" + str(i + 1) + "," + str(j + 1) + ")");
    }
  }
}

Vector gss_matvec(const GssRep& rep, const Vector& x) {
  require_order(rep, "gss_matvec");
  const GraphPartition& g = rep.graph;
  const BlockPartition& bp = g.blocks();
  const Index n = g.nodes();
  if (x.size() != bp.total()) throw ShapeError("gss_matvec: vector has length " + str(x.size()) + ", expected " + str(bp.total()));
  std::vector<Vector> gs(static_cast<size_t>(n)), hs(static_cast<size_t>(n));
  for (Index t = n - 1; t >= 0; --t) {
    const Index i = g.order()[size_t(t)];
    Vector gi = rep.v[size_t(i)].transpose() * segment(x, bp, i);
    for (Index j : g.successors(i)) gi += edge(rep.w, i, j, "W") * gs[size_t(j)];
    gs[size_t(i)] = std::move(gi);
  }
  for (Index t = 0; t < n; ++t) {
    const Index i = g.order()[size_t(t)];
    Vector hi = rep.q[size_t(i)].transpose() * segment(x, bp, i);
    for (Index j : g.predecessors(i)) hi += edge(rep.r, i, j, "R") * hs[size_t(j)];
    hs[size_t(i)] = std::move(hi);
  }
  Vector b(bp.total());
  for (Index i = 0; i < n; ++i) {
    Vector bi = rep.d[size_t(i)] * segment(x, bp, i);
    for (Index j : g.successors(i)) bi += edge(rep.u, i, j, "U") * gs[size_t(j)];
    for (Index j : g.predecessors(i)) bi += edge(rep.p, i, j, "P") * hs[size_t(j)];
    segment(b, bp, i) = bi;
  }
  return b;
}

Vector gss_matvec_transpose(const GssRep& rep, const Vector& x) {
  require_order(rep, "gss_matvec_transpose");
  const GraphPartition& g = rep.graph;
  const BlockPartition& bp = g.blocks();
  const Index n = g.nodes();
  if (x.size() != bp.total())
    throw ShapeError("gss_matvec_transpose: vector has length " + str(x.size()) + ", expected " + str(bp.total()));
  // gamma_j = sum_{i < j} (U_ij^T x_i + W_ij^T gamma_i), forward along the path
  std::vector<Vector> gamma(static_cast<size_t>(n)), eta(static_cast<size_t>(n));
  for (Index t = 0; t < n; ++t) {
    const Index j = g.order()[size_t(t)];
    Vector acc = Vector::Zero(rep.rg[size_t(j)]);
    for (Index i : g.predecessors(j))
      acc += edge(rep.u, i, j, "U").transpose() * segment(x, bp, i) + edge(rep.w, i, j, "W").transpose() * gamma[size_t(i)];
    gamma[size_t(j)] = std::move(acc);
  }
  // eta_j = sum_{i > j} (P_ij^T x_i + R_ij^T eta_i), backward along the path
  for (Index t = n - 1; t >= 0; --t) {
    const Index j = g.order()[size_t(t)];
    Vector acc = Vector::Zero(rep.rh[size_t(j)]);
    for (Index i : g.successors(j))
      acc += edge(rep.p, i, j, "P").transpose() * segment(x, bp, i) + edge(rep.r, i, j, "R").transpose() * eta[size_t(i)];
    eta[size_t(j)] = std::move(acc);
  }
  Vector b(bp.total());
  for (Index j = 0; j < n; ++j)
    segment(b, bp, j) = rep.d[size_t(j)].transpose() * segment(x, bp, j) + rep.v[size_t(j)] * gamma[size_t(j)] +
                        rep.q[size_t(j)] * eta[size_t(j)];
  return b;
}

Matrix gss_entry(const GssRep& rep, Index k, Index l) {
  require_order(rep, "gss_entry");
  const Index n = rep.graph.nodes();
  if (k < 0 || l < 0 || k >= n || l >= n) throw ShapeError("gss_entry: node index out of range");
  std::vector<Matrix> down, up;
  if (rep.graph.position(k) < rep.graph.position(l)) down = downstream_transitions(rep, l);
  if (rep.graph.position(k) > rep.graph.position(l)) up = upstream_transitions(rep, l);
  return entry_from(rep, k, l, down, up);
}

Matrix gss_to_dense(const GssRep& rep) {
  require_order(rep, "gss_to_dense");
  const BlockPartition& bp = rep.graph.blocks();
  const Index n = rep.graph.nodes();
  Matrix a(bp.total(), bp.total());
  for (Index l = 0; l < n; ++l) {
    const auto down = downstream_transitions(rep, l);
    const auto up = upstream_transitions(rep, l);
    for (Index k = 0; k < n; ++k) block(a, bp, k, l) = entry_from(rep, k, l, down, up);
  }
  return a;
}

Vector gss_solve(const GssRep& rep, const Vector& b, const Tolerance& tol) {
  (void)tol;
  require_order(rep, "gss_solve");
  const GraphPartition& g = rep.graph;
  const BlockPartition& bp = g.blocks();
  const Index n = g.nodes();
  if (b.size() != bp.total()) throw ShapeError("gss_solve: right-hand side has length " + str(b.size()) + ", expected " + str(bp.total()));

  // unknowns of node i stored together: (h_i, g_i, x_i)
  std::vector<Index> off(static_cast<size_t>(n + 1), 0);
  for (Index i = 0; i < n; ++i) off[size_t(i + 1)] = off[size_t(i)] + rep.rh[size_t(i)] + rep.rg[size_t(i)] + bp.size(i);
  auto h_at = [&](Index i) { return off[size_t(i)]; };
  auto g_at = [&](Index i) { return off[size_t(i)] + rep.rh[size_t(i)]; };
  auto x_at = [&](Index i) { return off[size_t(i)] + rep.rh[size_t(i)] + rep.rg[size_t(i)]; };

  Triplets t;
  Vector rhs = Vector::Zero(off.back());
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    add_identity(t, h_at(i), rep.rh[s]);
    add_block(t, h_at(i), x_at(i), rep.q[s].transpose(), -1.0);
    for (Index j : g.predecessors(i)) add_block(t, h_at(i), h_at(j), edge(rep.r, i, j, "R"), -1.0);

    add_identity(t, g_at(i), rep.rg[s]);
    add_block(t, g_at(i), x_at(i), rep.v[s].transpose(), -1.0);
    for (Index j : g.successors(i)) add_block(t, g_at(i), g_at(j), edge(rep.w, i, j, "W"), -1.0);

    add_block(t, x_at(i), x_at(i), rep.d[s]);
    for (Index j : g.successors(i)) add_block(t, x_at(i), g_at(j), edge(rep.u, i, j, "U"));
    for (Index j : g.predecessors(i)) add_block(t, x_at(i), h_at(j), edge(rep.p, i, j, "P"));
    rhs.segment(x_at(i), bp.size(i)) = segment(b, bp, i);
  }
  Eigen::SparseMatrix<double> m(off.back(), off.back());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw SingularError("gss_solve: lifted system is singular (" + lu.lastErrorMessage() + ")");
  const Vector z = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !z.allFinite()) throw SingularError("gss_solve: lifted solve failed");
  Vector x(bp.total());
  for (Index i = 0; i < n; ++i) segment(x, bp, i) = z.segment(x_at(i), bp.size(i));
  return x;
}

GssRep gss_from_sss(const SssRep& rep, const GraphPartition& graph) {
  if (!graph.has_order()) throw PreconditionError("gss_from_sss: graph has no Hamiltonian path");
  const Index n = graph.nodes();
  if (rep.n() != n) throw ShapeError("gss_from_sss: SSS has " + str(rep.n()) + " blocks, graph has " + str(n) + " nodes");
  const auto& order = graph.order();
  for (Index t = 0; t < n; ++t)
    if (rep.partition.size(t) != graph.blocks().size(order[size_t(t)]))
      throw ShapeError("gss_from_sss: block " + str(t + 1) + " does not match the size of path node " + str(order[size_t(t)] + 1));

  GssRep g;
  g.graph = graph;
  g.d.resize(size_t(n));
  g.v.resize(size_t(n));
  g.q.resize(size_t(n));
  g.rg.resize(size_t(n));
  g.rh.resize(size_t(n));
  for (Index t = 0; t < n; ++t) {
    const Index i = order[size_t(t)];
    g.d[size_t(i)] = rep.d[size_t(t)];
    g.v[size_t(i)] = rep.v[size_t(t)];
    g.q[size_t(i)] = rep.q[size_t(t)];
    g.rg[size_t(i)] = rep.gdim(t - 1);
    g.rh[size_t(i)] = rep.hdim(t);
  }
  for (Index t = 0; t < n; ++t) {
    const Index i = order[size_t(t)];
    const Index ni = graph.blocks().size(i);
    for (Index j : graph.successors(i)) {
      const bool chain = graph.position(j) == t + 1;
      g.w[{i, j}] = chain ? rep.w[size_t(t)] : Matrix::Zero(g.rg[size_t(i)], g.rg[size_t(j)]);
      g.u[{i, j}] = chain ? rep.u[size_t(t)] : Matrix::Zero(ni, g.rg[size_t(j)]);
    }
    for (Index j : graph.predecessors(i)) {
      const bool chain = graph.position(j) == t - 1;
      g.r[{i, j}] = chain ? rep.r[size_t(t)] : Matrix::Zero(g.rh[size_t(i)], g.rh[size_t(j)]);
      g.p[{i, j}] = chain ? rep.p[size_t(t)] : Matrix::Zero(ni, g.rh[size_t(j)]);
    }
  }
  g.validate();
  return g;
}

Index gss_girs_bound(const GssRep& rep) {
  Index m = 0;
  for (Index v : rep.rg) m = std::max(m, v);
  for (Index v : rep.rh) m = std::max(m, v);
  return 4 * m;
}

GssRep gss_random(const GraphPartition& graph, Index dim, double scale, std::uint64_t seed) {
  if (!graph.has_order()) throw PreconditionError("gss_random: graph has no Hamiltonian path");
  Rng rng(seed);
  const Index n = graph.nodes();
  const BlockPartition& bp = graph.blocks();
  GssRep g;
  g.graph = graph;
  g.rg.assign(size_t(n), dim);
  g.rh.assign(size_t(n), dim);
  for (Index i = 0; i < n; ++i) {
    g.d.push_back(rng.matrix(bp.size(i), bp.size(i), -1.0, 1.0));
    g.v.push_back(rng.matrix(bp.size(i), dim, -1.0, 1.0));
    g.q.push_back(rng.matrix(bp.size(i), dim, -1.0, 1.0));
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j : graph.successors(i)) {
      g.w[{i, j}] = rng.matrix(dim, dim, -scale, scale);
      g.u[{i, j}] = rng.matrix(bp.size(i), dim, -1.0, 1.0);
    }
    for (Index j : graph.predecessors(i)) {
      g.r[{i, j}] = rng.matrix(dim, dim, -scale, scale);
      g.p[{i, j}] = rng.matrix(bp.size(i), dim, -1.0, 1.0);
    }
  }
  return g;
}

}  // namespace rsm
