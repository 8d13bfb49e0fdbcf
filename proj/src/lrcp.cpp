#include "rsm/lrcp.hpp"

#include "rsm/errors.hpp"

#include <string>

namespace rsm {

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

Lrcp2x2Problem::Lrcp2x2Problem(Matrix a_, Matrix b_, Matrix c_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
  if (a.rows() != b.rows())
    throw ShapeError("Lrcp2x2Problem: A is " + shape(a) + " but B is " + shape(b) + " (row counts differ)");
  if (b.cols() != c.cols())
    throw ShapeError("Lrcp2x2Problem: B is " + shape(b) + " but C is " + shape(c) + " (column counts differ)");
}

Matrix completed(const Lrcp2x2Problem& p, const Matrix& x) {
  if (x.rows() != p.x_rows() || x.cols() != p.x_cols()) throw ShapeError("completed: X has shape " + shape(x));
  return vcat(hcat(p.a, p.b), hcat(x, p.c));
}

Index min_rank_bound(const Lrcp2x2Problem& p, const Tolerance& tol) {
  return numerical_rank(hcat(p.a, p.b), tol) + numerical_rank(vcat(p.b, p.c), tol) - numerical_rank(p.b, tol);
}

bool is_unique(const Lrcp2x2Problem& p, const Tolerance& tol) {
  const Index rb = numerical_rank(p.b, tol);
  return numerical_rank(hcat(p.a, p.b), tol) == rb && numerical_rank(vcat(p.b, p.c), tol) == rb;
}

Lrcp2x2Solution solve_set(const Lrcp2x2Problem& p, const Tolerance& tol) {
  // column side: R(A) = V_abar + V_ab, R(B) = V_ab + V_bbar
  const Matrix qa = column_space(p.a, tol).vectors;
  const Matrix qb = column_space(p.b, tol).vectors;
  const Matrix v_ab = column_space_intersection(p.a, p.b, tol).vectors;
  const Matrix v_abar = orthogonal_complement_in(qa, v_ab);
  const Matrix v_bbar = orthogonal_complement_in(qb, v_ab);

  // row side: R(B^T) = W_bbar + W_bc, R(C^T) = W_bc + W_cbar
  const Matrix wb = row_space(p.b, tol).vectors.transpose();
  const Matrix wc = row_space(p.c, tol).vectors.transpose();
  const Matrix w_bc = row_space_intersection(p.b, p.c, tol).vectors.transpose();
  const Matrix w_bbar = orthogonal_complement_in(wb, w_bc);
  const Matrix w_cbar = orthogonal_complement_in(wc, w_bc);

  Lrcp2x2Solution sol;
  sol.dims = {v_abar.cols(), v_ab.cols(), v_bbar.cols(), w_bbar.cols(), w_bc.cols(), w_cbar.cols()};
  sol.q_abar_a = v_abar.transpose() * p.a;
  sol.q_ab_a = v_ab.transpose() * p.a;
  sol.p_c_bc = p.c * w_bc;
  sol.p_c_cbar = p.c * w_cbar;

  // B = [V_ab V_bbar] K [W_bbar W_bc]^T; R = K^-1 has row blocks (W_bbar, W_bc)
  // and column blocks (V_ab, V_bbar).
  const Matrix pb = hcat(v_ab, v_bbar);
  const Matrix wbb = hcat(w_bbar, w_bc);
  if (pb.cols() != wbb.cols())
    throw DegeneracyError("solve_set: column and row factorisations of B disagree on rank (" +
                          std::to_string(pb.cols()) + " vs " + std::to_string(wbb.cols()) + ")");
  const Matrix k = pb.transpose() * p.b * wbb;
  Matrix r(k.rows(), k.cols());
  if (k.size() > 0) {
    Eigen::FullPivLU<Matrix> lu(k);
    if (!lu.isInvertible()) throw DegeneracyError("solve_set: coupling block of B is singular");
    r = lu.inverse();
  }
  sol.r_bc_ab = r.block(sol.dims.w_bbar, 0, sol.dims.w_bc, sol.dims.v_ab);

  sol.r_opt = min_rank_bound(p, tol);
  return sol;
}

Matrix sample(const Lrcp2x2Solution& sol, const Matrix& f_abar, const Matrix& f_cbar) {
  if (f_abar.rows() != sol.x_rows() || f_abar.cols() != sol.dims.v_abar)
    throw ShapeError("sample: first free parameter has shape " + shape(f_abar) + ", expected " +
                     std::to_string(sol.x_rows()) + "x" + std::to_string(sol.dims.v_abar));
  if (f_cbar.rows() != sol.dims.w_cbar || f_cbar.cols() != sol.x_cols())
    throw ShapeError("sample: second free parameter has shape " + shape(f_cbar) + ", expected " +
                     std::to_string(sol.dims.w_cbar) + "x" + std::to_string(sol.x_cols()));
  Matrix x = sol.p_c_bc * sol.r_bc_ab * sol.q_ab_a;
  x.noalias() += f_abar * sol.q_abar_a;
  x.noalias() += sol.p_c_cbar * f_cbar;
  return x;
}

Matrix sample_zero(const Lrcp2x2Solution& sol) {
  return sample(sol, Matrix::Zero(sol.x_rows(), sol.dims.v_abar), Matrix::Zero(sol.dims.w_cbar, sol.x_cols()));
}

}  // namespace rsm
