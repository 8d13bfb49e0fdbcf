#include "rsm/css.hpp"

#include "rsm/errors.hpp"

#include <algorithm>
#include <string>

namespace rsm {

namespace {

using std::size_t;

std::string str(Index v) { return std::to_string(v); }

}  // namespace

void CssRep::validate() const {
  sss.validate();
  const Index nb = n();
  if (nb < 3) throw ShapeError("CssRep: needs at least three blocks");
  const BlockPartition& p = sss.partition;
  if (u0.rows() != p.size(0) || u0.cols() != sss.gdim(nb - 2))
    throw ShapeError("CssRep: U0 is " + str(u0.rows()) + "x" + str(u0.cols()) + ", expected " + str(p.size(0)) + "x" +
                     str(sss.gdim(nb - 2)));
  if (p0.rows() != p.size(nb - 1) || p0.cols() != sss.hdim(0))
    throw ShapeError("CssRep: P0 is " + str(p0.rows()) + "x" + str(p0.cols()) + ", expected " + str(p.size(nb - 1)) +
                     "x" + str(sss.hdim(0)));
}

CornerBlock corner_blocks(const Matrix& a, const BlockPartition& part) {
  const Index n = part.count();
  return {block(a, part, 0, n - 1), block(a, part, n - 1, 0)};
}

CssRep css_from_corners(const Matrix& a, const BlockPartition& part, const Matrix& x, const Matrix& y,
                        const Tolerance& tol) {
  const Index n = part.count();
  if (n < 3) throw PreconditionError("css_from_dense: needs at least three blocks, got " + str(n));
  if (a.rows() != part.total() || a.cols() != part.total())
    throw ShapeError("css_from_dense: matrix is " + str(a.rows()) + "x" + str(a.cols()) + ", partition total " +
                     str(part.total()));
  const CornerBlock cb = corner_blocks(a, part);
  if (x.rows() != cb.e2.rows() || x.cols() != cb.e2.cols() || y.rows() != cb.e1.rows() || y.cols() != cb.e1.cols())
    throw ShapeError("css_from_corners: corner shapes do not match the partition");

  Matrix axy = a;
  block(axy, part, n - 1, 0) = x;
  block(axy, part, 0, n - 1) = y;
  CssRep rep;
  rep.sss = sss_from_dense(axy, part, tol);
  SssRep& s = rep.sss;

  // lower side: [Q_0^T; A_{n-1,0} - X] = [Z1; Z2] Q_0'^T
  {
    const RankFactorization f = rank_factorize(vcat(s.q[0].transpose(), cb.e2 - x), tol);
    const Index h_old = s.hdim(0);
    const Matrix z1 = f.left.topRows(h_old);
    rep.p0 = f.left.bottomRows(cb.e2.rows());
    s.q[0] = f.right.transpose();
    s.p[1] = s.p[1] * z1;
    s.r[1] = s.r[1] * z1;
    s.r[0] = Matrix(f.rank, 0);
    s.rh[0] = f.rank;
  }
  // upper side: [V_{n-1}^T; (A_{0,n-1} - Y)] = [Z1'; Z2'] V_{n-1}'^T
  {
    const size_t last = size_t(n - 1);
    const RankFactorization f = rank_factorize(vcat(s.v[last].transpose(), cb.e1 - y), tol);
    const Index g_old = s.gdim(n - 2);
    const Matrix z1 = f.left.topRows(g_old);
    rep.u0 = f.left.bottomRows(cb.e1.rows());
    s.v[last] = f.right.transpose();
    s.u[last - 1] = s.u[last - 1] * z1;
    s.w[last - 1] = s.w[last - 1] * z1;
    s.w[last] = Matrix(f.rank, 0);
    s.rg[last - 1] = f.rank;
  }
  rep.validate();
  return rep;
}

CssRep css_from_dense(const Matrix& a, const BlockPartition& part, const Tolerance& tol, const Strategy& strategy) {
  const Index n = part.count();
  if (n < 3) throw PreconditionError("css_from_dense: needs at least three blocks, got " + str(n));
  if (a.rows() != part.total() || a.cols() != part.total())
    throw ShapeError("css_from_dense: matrix is " + str(a.rows()) + "x" + str(a.cols()) + ", partition total " +
                     str(part.total()));
  const Matrix x = solve(HankelCompletionProblem(part, a), strategy, tol);
  // the upper side is the lower side of the transpose
  const Matrix y = solve(HankelCompletionProblem(part, a.transpose()), strategy, tol).transpose();
  return css_from_corners(a, part, x, y, tol);
}

Matrix css_to_dense(const CssRep& rep) {
  const Index n = rep.n();
  const BlockPartition& p = rep.partition();
  Matrix a = sss_to_dense(rep.sss);
  block(a, p, 0, n - 1) += rep.u0 * rep.sss.v[size_t(n - 1)].transpose();
  block(a, p, n - 1, 0) += rep.p0 * rep.sss.q[0].transpose();
  return a;
}

Vector css_matvec(const CssRep& rep, const Vector& x) {
  const Index n = rep.n();
  const BlockPartition& p = rep.partition();
  if (x.size() != p.total()) throw ShapeError("css_matvec: vector has length " + str(x.size()) + ", expected " + str(p.total()));
  Vector b = sss_matvec(rep.sss, x);
  // g_{n-1} = V_{n-1}^T x_{n-1}, h_0 = Q_0^T x_0
  segment(b, p, 0) += rep.u0 * (rep.sss.v[size_t(n - 1)].transpose() * segment(x, p, n - 1));
  segment(b, p, n - 1) += rep.p0 * (rep.sss.q[0].transpose() * segment(x, p, 0));
  return b;
}

GssRep css_to_gss(const CssRep& rep) {
  const Index n = rep.n();
  const SssRep& s = rep.sss;
  GssRep g = gss_from_sss(s, cycle_graph(s.partition));
  // the closing edge carries the corner terms and no state transfer
  g.u[{0, n - 1}] = rep.u0;
  g.p[{n - 1, 0}] = rep.p0;
  g.validate();
  return g;
}

Vector css_solve(const CssRep& rep, const Vector& b, const Tolerance& tol) {
  return gss_solve(css_to_gss(rep), b, tol);
}

RepSizes css_sizes(const CssRep& rep) { return sss_sizes(rep.sss); }

Index css_girs_bound(const CssRep& rep) {
  const SssRep& s = rep.sss;
  const Index n = rep.n();
  Index bound = 0;
  for (Index i = 0; i + 1 < n; ++i) bound = std::max({bound, s.hdim(i) + s.hdim(0), s.gdim(i) + s.gdim(n - 2)});
  return bound;
}

}  // namespace rsm
