#pragma once

#include "rsm/linalg.hpp"
#include "rsm/partition.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace rsm {

// Repo-wide generator: mt19937_64, uniform reals built from the top 53 bits,
// so a seed gives the same matrix with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return eng_(); }
  Index below(Index n) { return static_cast<Index>(eng_() % static_cast<std::uint64_t>(n)); }
  Matrix matrix(Index rows, Index cols, double lo = 0.0, double hi = 1.0);
  Vector vector(Index n, double lo = 0.0, double hi = 1.0);

 private:
  std::mt19937_64 eng_;
};

// T + strict_lower(L1 M1) + strict_upper(L2 M2) + corner blocks, all entries
// of T, L, M and the corners uniform in [0, 1].  T is tridiagonal, L and M
// are N x r and r x N, the corners b x b at positions (N-b.., 0..) and
// (0.., N-b..).
Matrix perturbed_semiseparable(Index n, Index r, Index b, std::uint64_t seed);

// B_jk = 1 / |exp(2 pi i j / N) - exp(2 pi i k / N)|, zero diagonal.
Matrix cauchy_circle(Index n);

// 6 x 6 circular tridiagonal matrix (diagonal b, neighbours a, wrap-around
// corners a) with three blocks of two.
std::pair<Matrix, BlockPartition> circular_tridiagonal(double a, double b);

// Nonzeros exactly on the diagonal, the first row and the first column.
Matrix arrowhead(Index n, std::uint64_t seed);

// 5-point Laplacian on an m x m grid in natural order, one node per block.
std::pair<Matrix, GraphPartition> poisson2d(Index m);

// Nystrom matrix of the periodic log kernel -1/(4 pi) log(2 - 2 cos(t - s))
// with end-point corrected trapezoidal weights; zero diagonal.
Matrix log_kernel_nystrom(Index n);
// Correction ratio int_0^h log(2 - 2 cos t) dt / (h log(2 - 2 cos h)), h = 2 pi / n.
double log_kernel_ratio(Index n);
// Weight applied to the two circular neighbours.
double log_kernel_neighbor_weight(Index n);

// 100 I + x y^T + e5 e2^T + e8 e5^T with the fixed vectors of the worked
// 10 x 10 example, partitioned into five blocks of two.
std::pair<Matrix, BlockPartition> hankel_example_matrix();

// Random matrix whose lower and upper Hankel blocks along p have rank at
// most r (an SSS matrix with random generators), entries O(1).
Matrix random_sss_matrix(const BlockPartition& p, Index r, Rng& rng);

// Random matrix of the given rank.
Matrix random_rank(Index rows, Index cols, Index rank, Rng& rng);

}  // namespace rsm
