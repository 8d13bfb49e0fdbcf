#pragma once

#include "rsm/linalg.hpp"

namespace rsm {

// min_X rank [[A, B], [X, C]] with X of shape rows(C) x cols(A).
struct Lrcp2x2Problem {
  Matrix a;
  Matrix b;
  Matrix c;

  Lrcp2x2Problem() = default;
  Lrcp2x2Problem(Matrix a_, Matrix b_, Matrix c_);

  Index x_rows() const { return c.rows(); }
  Index x_cols() const { return a.cols(); }
};

// Subspace dimensions of the complementary splittings
//   R(A) = V_abar + V_ab,  R([A B]) = V_abar + V_ab + V_bbar,
//   R(B^T) = W_bbar + W_bc, R([B; C]^T) = W_bbar + W_bc + W_cbar.
struct LrcpDims {
  Index v_abar = 0, v_ab = 0, v_bbar = 0;
  Index w_bbar = 0, w_bc = 0, w_cbar = 0;
};

// Affine parametrisation of every minimiser:
//   X = F1 q_abar_a + p_c_bc r_bc_ab q_ab_a + p_c_cbar F2
// with F1 of shape rows(C) x v_abar and F2 of shape w_cbar x cols(A).
struct Lrcp2x2Solution {
  Matrix q_abar_a;
  Matrix q_ab_a;
  Matrix p_c_bc;
  Matrix r_bc_ab;
  Matrix p_c_cbar;
  Index r_opt = 0;
  LrcpDims dims;

  Index x_rows() const { return p_c_bc.rows(); }
  Index x_cols() const { return q_ab_a.cols(); }
  bool unique() const { return dims.v_abar == 0 && dims.w_cbar == 0; }
};

Index min_rank_bound(const Lrcp2x2Problem& p, const Tolerance& tol = {});
Lrcp2x2Solution solve_set(const Lrcp2x2Problem& p, const Tolerance& tol = {});
Matrix sample(const Lrcp2x2Solution& sol, const Matrix& f_abar, const Matrix& f_cbar);
// Representative with both free parameters zero.
Matrix sample_zero(const Lrcp2x2Solution& sol);
bool is_unique(const Lrcp2x2Problem& p, const Tolerance& tol = {});

// [[A, B], [X, C]] assembled.
Matrix completed(const Lrcp2x2Problem& p, const Matrix& x);

}  // namespace rsm
