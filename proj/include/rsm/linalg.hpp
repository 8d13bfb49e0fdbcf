#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rsm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Singular values strictly above the cutoff count towards the rank.  In
// relative mode the cutoff is scaled by the largest singular value.
struct Tolerance {
  double cutoff = 1e-8;
  bool relative = false;

  double threshold(double sigma_max) const { return relative ? cutoff * sigma_max : cutoff; }
};

// Thin singular triplets, restricted to singular values above a floor.
struct Svd {
  Matrix u;
  Vector s;
  Matrix v;
  Index rank() const { return s.size(); }
};

// Singular triplets with sigma > floor.  Large matrices are first compressed by
// a truncated column-pivoted QR that stops once the trailing block has
// Frobenius norm below floor / 100, so the returned values are exact up to
// that perturbation.
Svd svd_above(const Matrix& m, double floor);

// Same, with the floor taken from a tolerance (relative mode needs sigma_max).
Svd svd_at(const Matrix& m, const Tolerance& tol);

Index numerical_rank(const Matrix& m, const Tolerance& tol = {});

struct RankFactorization {
  Matrix left;   // m x r
  Matrix right;  // r x n
  Index rank = 0;
};

RankFactorization rank_factorize(const Matrix& m, const Tolerance& tol = {});

enum class SpaceMode { column, row };

// Orthonormal basis of a subspace.  Column mode stores basis vectors as
// columns, row mode as rows.
struct SubspaceBasis {
  Matrix vectors;
  SpaceMode mode = SpaceMode::column;

  Index dim() const { return mode == SpaceMode::column ? vectors.cols() : vectors.rows(); }
  Index ambient() const { return mode == SpaceMode::column ? vectors.rows() : vectors.cols(); }
  // Basis vectors as columns regardless of mode.
  Matrix columns() const { return mode == SpaceMode::column ? vectors : Matrix(vectors.transpose()); }
};

SubspaceBasis column_space(const Matrix& m, const Tolerance& tol = {});
SubspaceBasis row_space(const Matrix& m, const Tolerance& tol = {});

SubspaceBasis column_space_intersection(const Matrix& a, const Matrix& b, const Tolerance& tol = {});
SubspaceBasis row_space_intersection(const Matrix& a, const Matrix& b, const Tolerance& tol = {});

// Orthogonal complement of span(sub) inside span(total).  Throws
// PreconditionError when sub is not contained in total.
SubspaceBasis complementary_split(const SubspaceBasis& total, const SubspaceBasis& sub,
                                  const Tolerance& tol = {});

// Unchecked variant on orthonormal column bases: the top dim(t) - dim(s) left
// singular vectors of (I - s s^T) t.
Matrix orthogonal_complement_in(const Matrix& t, const Matrix& s);

enum class Side { left, right };

// Left inverse (result * m = I) of a full column rank matrix or right inverse
// (m * result = I) of a full row rank matrix.
Matrix one_sided_inverse(const Matrix& m, Side side, const Tolerance& tol = {});

// Moore-Penrose pseudo-inverse with singular values <= cutoff dropped.
Matrix pinv(const Matrix& m, const Tolerance& tol = {});

// Concatenation helpers that accept zero-size operands.
Matrix hcat(const Matrix& a, const Matrix& b);
Matrix vcat(const Matrix& a, const Matrix& b);
Matrix block_diag(const Matrix& a, const Matrix& b);

// Condition number in the 2-norm (infinity for singular input).
double cond2(const Matrix& m);

}  // namespace rsm
