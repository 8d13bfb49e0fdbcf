#include "rsm/linalg.hpp"

#include "rsm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rsm {

namespace {

// Below this smallest dimension a full SVD is cheap enough.
constexpr Index kDirectSvdLimit = 200;

Svd keep_above(const Eigen::BDCSVD<Matrix>& svd, double floor) {
  const Vector& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > floor) ++r;
  Svd out;
  out.s = s.head(r);
  out.u = svd.matrixU().leftCols(r);
  out.v = svd.matrixV().leftCols(r);
  return out;
}

Svd direct_svd(const Matrix& m, double floor) {
  const Index rows = m.rows(), cols = m.cols();
  if (rows >= 2 * cols && cols > 0) {
    // tall: m = Q R, svd of the small R
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Svd out = keep_above(svd, floor);
    Matrix q = Matrix::Identity(rows, cols);
    q.applyOnTheLeft(qr.householderQ());
    out.u = q * out.u;
    return out;
  }
  if (cols >= 2 * rows && rows > 0) {
    Svd t = direct_svd(m.transpose(), floor);
    std::swap(t.u, t.v);
    return t;
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return keep_above(svd, floor);
}

// Householder QR with column pivoting, stopped as soon as the trailing block
// is below stop in Frobenius norm.  Returns m P ~= Q_k R_k.
Svd truncated_qr_svd(const Matrix& m, double floor) {
  const Index rows = m.rows(), cols = m.cols();
  const Index kmax = std::min(rows, cols);
  const double stop = 0.01 * floor;

  Matrix a = m;
  std::vector<Index> perm(cols);
  std::iota(perm.begin(), perm.end(), Index{0});
  Vector norms2 = a.colwise().squaredNorm().transpose();
  Vector exact2 = norms2;
  Vector hcoeffs(kmax);
  Vector work(cols);

  Index k = 0;
  for (; k < kmax; ++k) {
    double trailing = norms2.tail(cols - k).sum();
    if (trailing <= 100.0 * stop * stop) {
      // downdated norms lose accuracy; recompute before deciding
      for (Index j = k; j < cols; ++j) norms2(j) = a.col(j).tail(rows - k).squaredNorm();
      exact2.tail(cols - k) = norms2.tail(cols - k);
      trailing = norms2.tail(cols - k).sum();
    }
    if (std::sqrt(trailing) <= stop) break;

    Index piv = k;
    norms2.tail(cols - k).maxCoeff(&piv);
    piv += k;
    if (piv != k) {
      a.col(k).swap(a.col(piv));
      std::swap(norms2(k), norms2(piv));
      std::swap(exact2(k), exact2(piv));
      std::swap(perm[k], perm[piv]);
    }

    double beta = 0.0;
    a.col(k).tail(rows - k).makeHouseholderInPlace(hcoeffs(k), beta);
    a(k, k) = beta;
    if (k + 1 < cols) {
      a.bottomRightCorner(rows - k, cols - k - 1)
          .applyHouseholderOnTheLeft(a.col(k).tail(rows - k - 1), hcoeffs(k), work.data());
    }
    for (Index j = k + 1; j < cols; ++j) {
      norms2(j) -= a(k, j) * a(k, j);
      if (norms2(j) < 1e-6 * exact2(j)) {
        norms2(j) = a.col(j).tail(rows - k - 1).squaredNorm();
        exact2(j) = norms2(j);
      }
    }
  }

  // R_k in the pivoted column order, then undo the permutation
  Matrix rk = Matrix::Zero(k, cols);
  for (Index j = 0; j < cols; ++j) {
    Index top = std::min<Index>(j + 1, k);
    Matrix::Index dest = perm[j];
    rk.col(dest).head(top) = a.col(j).head(top);
  }
  Svd small;
  if (k == 0) {
    small.u = Matrix(0, 0);
    small.s = Vector(0);
    small.v = Matrix(cols, 0);
  } else {
    small = direct_svd(rk, floor);
  }

  Matrix q = Matrix::Identity(rows, k);
  if (k > 0) {
    Eigen::HouseholderSequence<Matrix, Vector> hs(a.leftCols(k), hcoeffs.head(k));
    hs.setLength(k);
    q.applyOnTheLeft(hs);
  }
  Svd out;
  out.s = small.s;
  out.u = q * small.u;
  out.v = small.v;
  return out;
}

}  // namespace

Svd svd_above(const Matrix& m, double floor) {
  if (m.rows() == 0 || m.cols() == 0) {
    Svd out;
    out.u = Matrix(m.rows(), 0);
    out.v = Matrix(m.cols(), 0);
    out.s = Vector(0);
    return out;
  }
  if (std::min(m.rows(), m.cols()) <= kDirectSvdLimit || floor <= 0.0) return direct_svd(m, floor);
  return truncated_qr_svd(m, floor);
}

Svd svd_at(const Matrix& m, const Tolerance& tol) {
  if (!tol.relative) return svd_above(m, tol.cutoff);
  Svd all = svd_above(m, 0.0);
  const double floor = all.s.size() ? tol.threshold(all.s(0)) : 0.0;
  Index r = 0;
  while (r < all.s.size() && all.s(r) > floor) ++r;
  all.s.conservativeResize(r);
  all.u.conservativeResize(Eigen::NoChange, r);
  all.v.conservativeResize(Eigen::NoChange, r);
  return all;
}

Index numerical_rank(const Matrix& m, const Tolerance& tol) { return svd_at(m, tol).rank(); }

RankFactorization rank_factorize(const Matrix& m, const Tolerance& tol) {
  Svd svd = svd_at(m, tol);
  RankFactorization out;
  out.rank = svd.rank();
  out.left = svd.u * svd.s.asDiagonal();
  out.right = svd.v.transpose();
  return out;
}

SubspaceBasis column_space(const Matrix& m, const Tolerance& tol) {
  return {svd_at(m, tol).u, SpaceMode::column};
}

SubspaceBasis row_space(const Matrix& m, const Tolerance& tol) {
  return {svd_at(m, tol).v.transpose(), SpaceMode::row};
}

SubspaceBasis column_space_intersection(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows())
    throw ShapeError("column_space_intersection: row counts differ (" + std::to_string(a.rows()) +
                     " vs " + std::to_string(b.rows()) + ")");
  const Matrix qa = svd_at(a, tol).u;
  const Matrix qb = svd_at(b, tol).u;
  const Index rab = numerical_rank(hcat(a, b), tol);
  Index d = qa.cols() + qb.cols() - rab;
  d = std::clamp<Index>(d, 0, std::min(qa.cols(), qb.cols()));
  if (d == 0) return {Matrix(a.rows(), 0), SpaceMode::column};
  // principal vectors: cosines closest to one come first
  Eigen::BDCSVD<Matrix> svd(qa.transpose() * qb, Eigen::ComputeThinU);
  return {qa * svd.matrixU().leftCols(d), SpaceMode::column};
}

SubspaceBasis row_space_intersection(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  if (a.cols() != b.cols())
    throw ShapeError("row_space_intersection: column counts differ (" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.cols()) + ")");
  SubspaceBasis c = column_space_intersection(a.transpose(), b.transpose(), tol);
  return {c.vectors.transpose(), SpaceMode::row};
}

Matrix orthogonal_complement_in(const Matrix& t, const Matrix& s) {
  const Index want = std::max<Index>(0, t.cols() - s.cols());
  if (want == 0) return Matrix(t.rows(), 0);
  Matrix proj = t - s * (s.transpose() * t);
  Eigen::BDCSVD<Matrix> svd(proj, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(want);
}

SubspaceBasis complementary_split(const SubspaceBasis& total, const SubspaceBasis& sub,
                                  const Tolerance& tol) {
  if (total.ambient() != sub.ambient()) throw ShapeError("complementary_split: ambient dimensions differ");
  const Matrix t = total.columns();
  const Matrix s = sub.columns();
  if (s.cols() > t.cols()) throw PreconditionError("complementary_split: sub has larger dimension than total");
  const double residual = (s - t * (t.transpose() * s)).norm();
  if (residual > 10.0 * tol.cutoff)
    throw PreconditionError("complementary_split: sub is not contained in total (residual " +
                            std::to_string(residual) + ")");
  Matrix c = orthogonal_complement_in(t, s);
  if (total.mode == SpaceMode::row) return {c.transpose(), SpaceMode::row};
  return {c, SpaceMode::column};
}

Matrix one_sided_inverse(const Matrix& m, Side side, const Tolerance& tol) {
  const Index r = numerical_rank(m, tol);
  if (side == Side::left && r != m.cols())
    throw RankDeficiencyError("one_sided_inverse: left inverse needs full column rank (rank " +
                              std::to_string(r) + ", cols " + std::to_string(m.cols()) + ")");
  if (side == Side::right && r != m.rows())
    throw RankDeficiencyError("one_sided_inverse: right inverse needs full row rank (rank " +
                              std::to_string(r) + ", rows " + std::to_string(m.rows()) + ")");
  Svd svd = svd_above(m, 0.0);
  return svd.v * svd.s.cwiseInverse().asDiagonal() * svd.u.transpose();
}

Matrix pinv(const Matrix& m, const Tolerance& tol) {
  Svd svd = svd_at(m, tol);
  return svd.v * svd.s.cwiseInverse().asDiagonal() * svd.u.transpose();
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("hcat: row counts differ");
  Matrix c(a.rows(), a.cols() + b.cols());
  c.leftCols(a.cols()) = a;
  c.rightCols(b.cols()) = b;
  return c;
}

Matrix vcat(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ShapeError("vcat: column counts differ");
  Matrix c(a.rows() + b.rows(), a.cols());
  c.topRows(a.rows()) = a;
  c.bottomRows(b.rows()) = b;
  return c;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  c.topLeftCorner(a.rows(), a.cols()) = a;
  c.bottomRightCorner(b.rows(), b.cols()) = b;
  return c;
}

double cond2(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double lo = s(s.size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

}  // namespace rsm
