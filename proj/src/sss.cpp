#include "rsm/sss.hpp"

#include "rsm/errors.hpp"

#include <cmath>
#include <string>

namespace rsm {

namespace {

using std::size_t;

std::string str(Index v) { return std::to_string(v); }

void check_shape(const Matrix& m, Index rows, Index cols, const char* name, Index i) {
  if (m.rows() != rows || m.cols() != cols)
    throw ShapeError(std::string("SssRep: ") + name + "[" + str(i + 1) + "] is " + str(m.rows()) + "x" + str(m.cols()) +
                     ", expected " + str(rows) + "x" + str(cols));
}

void require_same_partition(const SssRep& a, const SssRep& b, const char* who) {
  if (!(a.partition == b.partition)) throw ShapeError(std::string(who) + ": partitions differ");
}

// Lower generators and diagonal of a product.  The causal state of C = A B is
// [h^B; tau], where tau collects A's causal flow driven by B's output; the
// anti-causal contributions of A acting on B's causal flow enter through M.
struct LowerProduct {
  std::vector<Matrix> d, p, r, q;
  std::vector<Index> rh;
};

LowerProduct lower_product(const SssRep& a, const SssRep& b) {
  const Index n = a.n();
  LowerProduct out;
  out.d.resize(size_t(n));
  out.p.resize(size_t(n));
  out.r.resize(size_t(n));
  out.q.resize(size_t(n));
  for (Index i = 0; i + 1 < n; ++i) out.rh.push_back(a.hdim(i) + b.hdim(i));

  // M_i = V^A_{i+1}^T P^B_{i+1} + W^A_{i+1} M_{i+1} R^B_{i+1}
  std::vector<Matrix> m(static_cast<size_t>(n));
  m[size_t(n - 1)] = Matrix(a.gdim(n - 1), b.hdim(n - 1));
  for (Index i = n - 2; i >= 0; --i) {
    const size_t j = size_t(i + 1);
    m[size_t(i)] = a.v[j].transpose() * b.p[j] + a.w[j] * m[j] * b.r[j];
  }

  // Nt_i = Q^A_i^T U^B_i + R^A_i Nt_{i-1} W^B_i
  Matrix nt_prev(0, 0);
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    const Matrix n_i = a.r[s] * nt_prev;  // rh_A(i) x rg_B(i-1)

    out.d[s] = a.d[s] * b.d[s] + a.p[s] * nt_prev * b.v[s].transpose() + a.u[s] * m[s] * b.q[s].transpose();
    out.q[s] = hcat(b.q[s], b.v[s] * n_i.transpose() + b.d[s].transpose() * a.q[s]);
    out.p[s] = hcat(a.d[s] * b.p[s] + a.u[s] * m[s] * b.r[s], a.p[s]);

    Matrix r = Matrix::Zero(b.hdim(i) + a.hdim(i), b.hdim(i - 1) + a.hdim(i - 1));
    r.topLeftCorner(b.hdim(i), b.hdim(i - 1)) = b.r[s];
    r.bottomLeftCorner(a.hdim(i), b.hdim(i - 1)) = a.q[s].transpose() * b.p[s];
    r.bottomRightCorner(a.hdim(i), a.hdim(i - 1)) = a.r[s];
    out.r[s] = r;

    nt_prev = a.q[s].transpose() * b.u[s] + a.r[s] * nt_prev * b.w[s];
  }
  return out;
}

}  // namespace

void SssRep::validate() const {
  const Index nb = n();
  if (nb < 1) throw ShapeError("SssRep: empty partition");
  if (static_cast<Index>(rg.size()) != nb - 1 || static_cast<Index>(rh.size()) != nb - 1)
    throw ShapeError("SssRep: state dimension vectors must have n-1 entries");
  for (const auto* g : {&d, &u, &w, &v, &p, &r, &q})
    if (static_cast<Index>(g->size()) != nb) throw ShapeError("SssRep: every generator family needs n entries");
  for (Index i = 0; i < nb; ++i) {
    const size_t s = size_t(i);
    const Index ni = partition.size(i);
    check_shape(d[s], ni, ni, "D", i);
    check_shape(u[s], ni, gdim(i), "U", i);
    check_shape(w[s], gdim(i - 1), gdim(i), "W", i);
    check_shape(v[s], ni, gdim(i - 1), "V", i);
    check_shape(p[s], ni, hdim(i - 1), "P", i);
    check_shape(r[s], hdim(i), hdim(i - 1), "R", i);
    check_shape(q[s], ni, hdim(i), "Q", i);
  }
}

SssRep sss_zero(const BlockPartition& part, std::vector<Index> rg, std::vector<Index> rh) {
  SssRep rep;
  rep.partition = part;
  rep.rg = std::move(rg);
  rep.rh = std::move(rh);
  const Index n = part.count();
  if (static_cast<Index>(rep.rg.size()) != n - 1 || static_cast<Index>(rep.rh.size()) != n - 1)
    throw ShapeError("sss_zero: state dimension vectors must have n-1 entries");
  for (Index i = 0; i < n; ++i) {
    const Index ni = part.size(i);
    rep.d.push_back(Matrix::Zero(ni, ni));
    rep.u.push_back(Matrix::Zero(ni, rep.gdim(i)));
    rep.w.push_back(Matrix::Zero(rep.gdim(i - 1), rep.gdim(i)));
    rep.v.push_back(Matrix::Zero(ni, rep.gdim(i - 1)));
    rep.p.push_back(Matrix::Zero(ni, rep.hdim(i - 1)));
    rep.r.push_back(Matrix::Zero(rep.hdim(i), rep.hdim(i - 1)));
    rep.q.push_back(Matrix::Zero(ni, rep.hdim(i)));
  }
  return rep;
}

SssRep sss_identity(const BlockPartition& part) {
  const std::vector<Index> zeros(size_t(part.count() - 1), 0);
  SssRep rep = sss_zero(part, zeros, zeros);
  for (Index i = 0; i < part.count(); ++i) rep.d[size_t(i)].setIdentity();
  return rep;
}

LowerGenerators lower_generators(const Matrix& a, const BlockPartition& part, const Tolerance& tol) {
  const Index n = part.count();
  const Index total = part.total();
  LowerGenerators out;
  out.p.resize(size_t(n));
  out.r.resize(size_t(n));
  out.q.resize(size_t(n));
  out.p[0] = Matrix(part.size(0), 0);

  // x_prev, s_prev: orthonormal column basis of the previous Hankel block
  // (rows below block i-1) and its singular values.
  Matrix x_prev;
  Vector s_prev(0);
  for (Index i = 0; i + 1 < n; ++i) {
    const Index below = part.offset(i + 1);
    const Index rows = total - below;
    const Index ni = part.size(i);
    // drop the rows of block i from the previous basis
    const Matrix x_below = i == 0 ? Matrix(rows, 0) : Matrix(x_prev.bottomRows(rows));
    const Matrix ai = a.block(below, part.offset(i), rows, ni);
    const Matrix m = hcat(x_below * s_prev.asDiagonal(), ai);
    Svd svd = svd_at(m, tol);
    const Matrix& x = svd.u;
    const size_t s = size_t(i);
    out.rh.push_back(svd.rank());
    out.q[s] = ai.transpose() * x;
    out.r[s] = x.transpose() * x_below;
    out.p[s + 1] = x.topRows(part.size(i + 1));
    x_prev = x;
    s_prev = svd.s;
  }
  if (n >= 1) {
    out.q[size_t(n - 1)] = Matrix(part.size(n - 1), 0);
    out.r[size_t(n - 1)] = Matrix(0, n >= 2 ? out.rh.back() : Index(0));
  }
  return out;
}

SssRep sss_from_dense(const Matrix& a, const BlockPartition& part, const Tolerance& tol) {
  if (a.rows() != part.total() || a.cols() != part.total())
    throw ShapeError("sss_from_dense: matrix is " + str(a.rows()) + "x" + str(a.cols()) + ", partition total " +
                     str(part.total()));
  const Index n = part.count();
  LowerGenerators lo = lower_generators(a, part, tol);
  LowerGenerators up = lower_generators(a.transpose(), part, tol);
  SssRep rep;
  rep.partition = part;
  rep.rh = lo.rh;
  rep.rg = up.rh;
  rep.p = std::move(lo.p);
  rep.r = std::move(lo.r);
  rep.q = std::move(lo.q);
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    rep.d.push_back(block(a, part, i, i));
    rep.u.push_back(up.q[s]);
    rep.w.push_back(up.r[s].transpose());
    rep.v.push_back(up.p[s]);
  }
  rep.validate();
  return rep;
}

Matrix sss_to_dense(const SssRep& rep) {
  const BlockPartition& part = rep.partition;
  const Index n = rep.n();
  Matrix a = Matrix::Zero(part.total(), part.total());
  for (Index l = 0; l < n; ++l) {
    block(a, part, l, l) = rep.d[size_t(l)];
    // below: P_k (R_{k-1} .. R_{l+1}) Q_l^T
    Matrix t = rep.q[size_t(l)].transpose();
    for (Index k = l + 1; k < n; ++k) {
      block(a, part, k, l) = rep.p[size_t(k)] * t;
      t = rep.r[size_t(k)] * t;
    }
    // above: U_k (W_{k+1} .. W_{l-1}) V_l^T
    Matrix s = rep.v[size_t(l)].transpose();
    for (Index k = l - 1; k >= 0; --k) {
      block(a, part, k, l) = rep.u[size_t(k)] * s;
      s = rep.w[size_t(k)] * s;
    }
  }
  return a;
}

Vector sss_matvec(const SssRep& rep, const Vector& x) {
  const BlockPartition& part = rep.partition;
  const Index n = rep.n();
  if (x.size() != part.total())
    throw ShapeError("sss_matvec: vector has length " + str(x.size()) + ", expected " + str(part.total()));
  Vector b(part.total());
  // anti-causal sweep: g[i] is g_i (dimension gdim(i-1))
  std::vector<Vector> g(size_t(n + 1));
  g[size_t(n)] = Vector(0);
  for (Index i = n - 1; i >= 0; --i) {
    const size_t s = size_t(i);
    g[s] = rep.v[s].transpose() * segment(x, part, i) + rep.w[s] * g[s + 1];
  }
  Vector h(0);
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    const auto xi = segment(x, part, i);
    segment(b, part, i) = rep.d[s] * xi + rep.u[s] * g[s + 1] + rep.p[s] * h;
    h = rep.q[s].transpose() * xi + rep.r[s] * h;
  }
  return b;
}

Vector sss_solve(const SssRep& rep, const Vector& b, const Tolerance& tol) {
  (void)tol;
  const BlockPartition& part = rep.partition;
  const Index n = rep.n();
  if (b.size() != part.total())
    throw ShapeError("sss_solve: right-hand side has length " + str(b.size()) + ", expected " + str(part.total()));

  // Unknowns per block: xi_i = (g_i, h_i, x_i).
  auto gsz = [&](Index i) { return rep.gdim(i - 1); };
  auto hsz = [&](Index i) { return rep.hdim(i); };
  auto dim = [&](Index i) { return gsz(i) + hsz(i) + part.size(i); };

  auto sigma = [&](Index i) {
    const size_t s = size_t(i);
    const Index g = gsz(i), h = hsz(i), ni = part.size(i);
    Matrix m = Matrix::Zero(dim(i), dim(i));
    m.topLeftCorner(g, g).setIdentity();
    m.block(g, g, h, h).setIdentity();
    m.block(0, g + h, g, ni) = -rep.v[s].transpose();
    m.block(g, g + h, h, ni) = -rep.q[s].transpose();
    m.block(g + h, g + h, ni, ni) = rep.d[s];
    return m;
  };
  // coupling of block i to block i+1 (through g_{i+1})
  auto upper = [&](Index i) {
    const size_t s = size_t(i);
    const Index g = gsz(i), h = hsz(i), ni = part.size(i);
    Matrix m = Matrix::Zero(dim(i), dim(i + 1));
    m.block(0, 0, g, gsz(i + 1)) = -rep.w[s];
    m.block(g + h, 0, ni, gsz(i + 1)) = rep.u[s];
    return m;
  };
  // coupling of block i to block i-1 (through h_{i-1})
  auto lower = [&](Index i) {
    const size_t s = size_t(i);
    const Index g = gsz(i), h = hsz(i), ni = part.size(i);
    Matrix m = Matrix::Zero(dim(i), dim(i - 1));
    m.block(g, gsz(i - 1), h, hsz(i - 1)) = -rep.r[s];
    m.block(g + h, gsz(i - 1), ni, hsz(i - 1)) = rep.p[s];
    return m;
  };

  std::vector<Eigen::PartialPivLU<Matrix>> lu(static_cast<size_t>(n));
  std::vector<Matrix> ups(static_cast<size_t>(n));
  std::vector<Vector> y(static_cast<size_t>(n));
  Matrix carry;  // S_{i-1}^{-1} Up_{i-1}
  Vector ycarry;
  for (Index i = 0; i < n; ++i) {
    const size_t s = size_t(i);
    Matrix si = sigma(i);
    Vector yi = Vector::Zero(dim(i));
    yi.tail(part.size(i)) = segment(b, part, i);
    if (i > 0) {
      const Matrix lo = lower(i);
      si -= lo * carry;
      yi -= lo * ycarry;
    }
    if (si.size() > 0) {
      lu[s].compute(si);
      const double rc = lu[s].rcond();
      if (!(rc > 1e-15)) throw SingularError("sss_solve: pivot block " + str(i + 1) + " is singular (rcond " +
                                              std::to_string(rc) + ")");
    }
    y[s] = yi;
    if (i + 1 < n) {
      ups[s] = upper(i);
      carry = si.size() > 0 ? Matrix(lu[s].solve(ups[s])) : Matrix(0, dim(i + 1));
    }
    ycarry = si.size() > 0 ? Vector(lu[s].solve(yi)) : Vector(0);
  }

  Vector x(part.total());
  Vector next;
  for (Index i = n - 1; i >= 0; --i) {
    const size_t s = size_t(i);
    Vector rhs = y[s];
    if (i + 1 < n) rhs -= ups[s] * next;
    Vector xi = dim(i) > 0 ? Vector(lu[s].solve(rhs)) : Vector(0);
    segment(x, part, i) = xi.tail(part.size(i));
    next = std::move(xi);
  }
  if (!x.allFinite()) throw SingularError("sss_solve: solution is not finite");
  return x;
}

SssRep sss_transpose(const SssRep& rep) {
  SssRep t;
  t.partition = rep.partition;
  t.rg = rep.rh;
  t.rh = rep.rg;
  for (Index i = 0; i < rep.n(); ++i) {
    const size_t s = size_t(i);
    t.d.push_back(rep.d[s].transpose());
    t.u.push_back(rep.q[s]);
    t.w.push_back(rep.r[s].transpose());
    t.v.push_back(rep.p[s]);
    t.p.push_back(rep.v[s]);
    t.r.push_back(rep.w[s].transpose());
    t.q.push_back(rep.u[s]);
  }
  return t;
}

SssRep sss_add(const SssRep& a, const SssRep& b) {
  require_same_partition(a, b, "sss_add");
  SssRep c;
  c.partition = a.partition;
  for (Index i = 0; i + 1 < a.n(); ++i) {
    c.rg.push_back(a.gdim(i) + b.gdim(i));
    c.rh.push_back(a.hdim(i) + b.hdim(i));
  }
  for (Index i = 0; i < a.n(); ++i) {
    const size_t s = size_t(i);
    c.d.push_back(a.d[s] + b.d[s]);
    c.u.push_back(hcat(a.u[s], b.u[s]));
    c.w.push_back(block_diag(a.w[s], b.w[s]));
    c.v.push_back(hcat(a.v[s], b.v[s]));
    c.p.push_back(hcat(a.p[s], b.p[s]));
    c.r.push_back(block_diag(a.r[s], b.r[s]));
    c.q.push_back(hcat(a.q[s], b.q[s]));
  }
  return c;
}

SssRep sss_multiply(const SssRep& a, const SssRep& b) {
  require_same_partition(a, b, "sss_multiply");
  const LowerProduct lo = lower_product(a, b);
  // upper part of A B is the transposed lower part of B^T A^T
  const LowerProduct up = lower_product(sss_transpose(b), sss_transpose(a));
  SssRep c;
  c.partition = a.partition;
  c.rh = lo.rh;
  c.rg = up.rh;
  c.d = lo.d;
  c.p = lo.p;
  c.r = lo.r;
  c.q = lo.q;
  for (Index i = 0; i < a.n(); ++i) {
    const size_t s = size_t(i);
    c.u.push_back(up.q[s]);
    c.w.push_back(up.r[s].transpose());
    c.v.push_back(up.p[s]);
  }
  return c;
}

SssRep sss_invert(const SssRep& rep, const Tolerance& tol) {
  const Matrix a = sss_to_dense(rep);
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw SingularError("sss_invert: matrix is singular");
  return sss_from_dense(lu.inverse(), rep.partition, tol);
}

RepSizes sss_sizes(const SssRep& rep) {
  RepSizes s{rep.rg, rep.rh, 0};
  for (Index v : rep.rg) s.total += v;
  for (Index v : rep.rh) s.total += v;
  return s;
}

}  // namespace rsm
