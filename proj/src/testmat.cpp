#include "rsm/testmat.hpp"

#include "rsm/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

namespace rsm {

Matrix Rng::matrix(Index rows, Index cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

Vector Rng::vector(Index n, double lo, double hi) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
  return v;
}

Matrix perturbed_semiseparable(Index n, Index r, Index b, std::uint64_t seed) {
  if (n < 1 || r < 0 || b < 0 || b > n) throw ShapeError("perturbed_semiseparable: bad sizes");
  Rng rng(seed);
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) a(i, i) = rng.uniform();
  for (Index i = 0; i + 1 < n; ++i) a(i + 1, i) = rng.uniform();
  for (Index i = 0; i + 1 < n; ++i) a(i, i + 1) = rng.uniform();

  const Matrix l1 = rng.matrix(n, r), m1 = rng.matrix(r, n);
  const Matrix l2 = rng.matrix(n, r), m2 = rng.matrix(r, n);
  const Matrix lower = l1 * m1;
  const Matrix upper = l2 * m2;
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) {
      a(i, j) += lower(i, j);
      a(j, i) += upper(j, i);
    }

  a.bottomLeftCorner(b, b) += rng.matrix(b, b);
  a.topRightCorner(b, b) += rng.matrix(b, b);
  return a;
}

Matrix cauchy_circle(Index n) {
  Matrix a = Matrix::Zero(n, n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k)
      if (j != k) a(j, k) = 1.0 / std::abs(2.0 * std::sin(two_pi * static_cast<double>(j - k) / (2.0 * static_cast<double>(n))));
  return a;
}

std::pair<Matrix, BlockPartition> circular_tridiagonal(double a, double b) {
  Matrix m = Matrix::Zero(6, 6);
  for (Index i = 0; i < 6; ++i) {
    m(i, i) = b;
    m(i, (i + 1) % 6) = a;
    m((i + 1) % 6, i) = a;
  }
  return {m, BlockPartition({2, 2, 2})};
}

Matrix arrowhead(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) a(i, i) = rng.uniform(1.0, 2.0);
  for (Index i = 1; i < n; ++i) {
    a(0, i) = rng.uniform(1.0, 2.0);
    a(i, 0) = rng.uniform(1.0, 2.0);
  }
  return a;
}

std::pair<Matrix, GraphPartition> poisson2d(Index m) {
  const Index n = m * m;
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const Index v = i * m + j;
      a(v, v) = 4.0;
      if (j + 1 < m) a(v, v + 1) = a(v + 1, v) = -1.0;
      if (i + 1 < m) a(v, v + m) = a(v + m, v) = -1.0;
    }
  return {a, mesh_graph(m, m, BlockPartition::uniform(n, 1))};
}

double log_kernel_ratio(Index n) {
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  boost::math::quadrature::tanh_sinh<double> integrator;
  // log(2 - 2 cos t) written as 2 log(2 sin(t/2)) so that it stays finite near t = 0
  auto f = [](double t) { return 2.0 * std::log(2.0 * std::sin(0.5 * t)); };
  const double integral = integrator.integrate(f, 0.0, h, 1e-12);
  return integral / (h * std::log(2.0 - 2.0 * std::cos(h)));
}

double log_kernel_neighbor_weight(Index n) {
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  // h (1 + alpha) with alpha = ratio - 1/2
  return h * (0.5 + log_kernel_ratio(n));
}

Matrix log_kernel_nystrom(Index n) {
  if (n < 3) throw ShapeError("log_kernel_nystrom: need n >= 3");
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  const double w_near = log_kernel_neighbor_weight(n);
  const double scale = -1.0 / (4.0 * std::numbers::pi);
  Matrix k = Matrix::Zero(n, n);
  for (Index l = 0; l < n; ++l)
    for (Index j = 0; j < n; ++j) {
      if (l == j) continue;
      const Index d = std::abs(l - j);
      const bool near = std::min(d, n - d) == 1;
      const double w = near ? w_near : h;
      k(l, j) = scale * w * std::log(2.0 - 2.0 * std::cos(h * static_cast<double>(l - j)));
    }
  return k;
}

std::pair<Matrix, BlockPartition> hankel_example_matrix() {
  Vector x(10), y(10);
  x << 2, 1, 2, 1, 1, 2, 1, 1, 1, 2;
  y << 1, 3, 1, 2, 1, 3, 2, 1, 1, 1;
  Matrix a = 100.0 * Matrix::Identity(10, 10) + x * y.transpose();
  a(4, 1) += 1.0;
  a(7, 4) += 1.0;
  return {a, BlockPartition::uniform(5, 2)};
}

Matrix random_sss_matrix(const BlockPartition& p, Index r, Rng& rng) {
  const Index n = p.total();
  Matrix a = rng.matrix(n, n, -1.0, 1.0);
  const Matrix lower = rng.matrix(n, r, -1.0, 1.0) * rng.matrix(r, n, -1.0, 1.0);
  const Matrix upper = rng.matrix(n, r, -1.0, 1.0) * rng.matrix(r, n, -1.0, 1.0);
  for (Index i = 0; i < p.count(); ++i)
    for (Index j = 0; j < p.count(); ++j) {
      if (i > j) block(a, p, i, j) = block(lower, p, i, j);
      if (i < j) block(a, p, i, j) = block(upper, p, i, j);
    }
  return a;
}

Matrix random_rank(Index rows, Index cols, Index rank, Rng& rng) {
  return rng.matrix(rows, rank, -1.0, 1.0) * rng.matrix(rank, cols, -1.0, 1.0);
}

}  // namespace rsm
