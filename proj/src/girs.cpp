#include "rsm/girs.hpp"

#include "rsm/errors.hpp"
#include "rsm/testmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace rsm {

namespace {

std::string str(Index v) { return std::to_string(v); }

std::vector<bool> membership(Index n, const Subset& h) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (Index v : h) {
    if (v < 0 || v >= n) throw PreconditionError("subset node " + str(v + 1) + " is out of range");
    if (in[std::size_t(v)]) throw PreconditionError("subset lists node " + str(v + 1) + " twice");
    in[std::size_t(v)] = true;
  }
  if (h.empty() || Index(h.size()) == n) throw PreconditionError("subset must be nonempty and proper");
  return in;
}

std::vector<Index> path_order(const GraphPartition& g) {
  if (g.has_order()) return g.order();
  std::vector<Index> order(static_cast<std::size_t>(g.nodes()));
  for (Index i = 0; i < g.nodes(); ++i) order[std::size_t(i)] = i;
  return order;
}

Subset sorted_run(const std::vector<Index>& order, Index start, Index len) {
  Subset h(order.begin() + start, order.begin() + start + len);
  std::sort(h.begin(), h.end());
  return h;
}

}  // namespace

Matrix hankel_submatrix(const Matrix& a, const BlockPartition& part, const Subset& h) {
  const Index n = part.count();
  if (a.rows() != part.total() || a.cols() != part.total())
    throw ShapeError("hankel_rank: matrix is " + str(a.rows()) + "x" + str(a.cols()) + ", partition total " +
                     str(part.total()));
  const std::vector<bool> in = membership(n, h);
  std::vector<Index> rows, cols;
  for (Index i = 0; i < n; ++i) {
    auto& dst = in[std::size_t(i)] ? cols : rows;
    for (Index k = 0; k < part.size(i); ++k) dst.push_back(part.offset(i) + k);
  }
  return a(rows, cols);
}

Index hankel_rank(const Matrix& a, const BlockPartition& part, const Subset& h, const Tolerance& tol) {
  return numerical_rank(hankel_submatrix(a, part, h), tol);
}

Index boundary_size(const GraphPartition& g, const Subset& h) {
  const std::vector<bool> in = membership(g.nodes(), h);
  Index rho = 0;
  for (const auto& [i, j] : g.edges())
    if (in[std::size_t(i)] != in[std::size_t(j)]) ++rho;
  return rho;
}

std::vector<Subset> enumerate_subsets(const GraphPartition& g, const SubsetPolicy& policy) {
  const Index n = g.nodes();
  std::vector<Subset> out;
  if (n < 2) return out;
  const std::vector<Index> order = path_order(g);
  switch (policy.kind) {
    case SubsetPolicy::Kind::exhaustive: {
      if (n > 12) throw PreconditionError("exhaustive subset enumeration is limited to 12 nodes, got " + str(n));
      const unsigned full = (1u << n) - 1;
      for (unsigned mask = 1; mask < full; ++mask) {
        Subset h;
        for (Index i = 0; i < n; ++i)
          if (mask & (1u << i)) h.push_back(i);
        out.push_back(std::move(h));
      }
      break;
    }
    case SubsetPolicy::Kind::prefixes:
      for (Index len = 1; len < n; ++len) out.push_back(sorted_run(order, 0, len));
      break;
    case SubsetPolicy::Kind::intervals:
      for (Index start = 0; start < n; ++start)
        for (Index len = 1; start + len <= n; ++len)
          if (len < n) out.push_back(sorted_run(order, start, len));
      break;
    case SubsetPolicy::Kind::sampled: {
      Rng rng(policy.seed);
      for (Index t = 0; t < policy.k; ++t) {
        const Index len = 1 + rng.below(n - 1);
        const Index start = rng.below(n - len + 1);
        out.push_back(sorted_run(order, start, len));
      }
      for (Index t = 0; t < policy.k; ++t) {
        Subset h;
        while (h.empty() || Index(h.size()) == n) {
          h.clear();
          for (Index i = 0; i < n; ++i)
            if (rng.next() & 1u) h.push_back(i);
        }
        out.push_back(std::move(h));
      }
      break;
    }
  }
  return out;
}

GirsReport verify_girs(const Matrix& a, const GraphPartition& g, double c, const SubsetPolicy& policy,
                       const Tolerance& tol) {
  GirsReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (const Subset& h : enumerate_subsets(g, policy)) {
    GirsCheck check;
    check.subset = h;
    check.rho = boundary_size(g, h);
    check.rank = hankel_rank(a, g.blocks(), h, tol);
    check.bound = c * static_cast<double>(check.rho);
    check.slack = check.bound - static_cast<double>(check.rank);
    report.min_slack = std::min(report.min_slack, check.slack);
    ++report.tested;
    if (check.slack < 0.0) report.violations.push_back(std::move(check));
  }
  return report;
}

std::string format_subset(const Subset& h) {
  std::ostringstream os;
  for (std::size_t k = 0; k < h.size(); ++k) os << (k ? " " : "") << h[k] + 1;
  return os.str();
}

void write_girs_report(std::ostream& os, const GirsReport& report) {
  os << "subset;rho;rank;bound;slack\n";
  for (const GirsCheck& c : report.violations)
    os << format_subset(c.subset) << ';' << c.rho << ';' << c.rank << ';' << c.bound << ';' << c.slack << '\n';
}

double estimate_girs_constant(const Matrix& a, const GraphPartition& g, const SubsetPolicy& policy,
                              const Tolerance& tol) {
  double c = 0.0;
  for (const Subset& h : enumerate_subsets(g, policy)) {
    const Index rank = hankel_rank(a, g.blocks(), h, tol);
    if (rank == 0) continue;
    const Index rho = boundary_size(g, h);
    if (rho == 0) return std::numeric_limits<double>::infinity();
    c = std::max(c, static_cast<double>(rank) / static_cast<double>(rho));
  }
  return c;
}

InvarianceReport check_inverse_invariance(const Matrix& a, const BlockPartition& part, const SubsetPolicy& policy,
                                          const Tolerance& tol) {
  if (a.rows() != a.cols()) throw ShapeError("check_inverse_invariance: matrix must be square");
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw SingularError("check_inverse_invariance: matrix is singular");
  const Matrix inv = lu.inverse();
  const GraphPartition g = line_graph(part);
  InvarianceReport report;
  for (const Subset& h : enumerate_subsets(g, policy)) {
    ++report.tested;
    Index ranks[2];
    bool fragile = false;
    const Matrix* mats[2] = {&a, &inv};
    for (int t = 0; t < 2; ++t) {
      const Matrix block = hankel_submatrix(*mats[t], part, h);
      if (block.size() == 0) {
        ranks[t] = 0;
        continue;
      }
      const Eigen::BDCSVD<Matrix> svd(block);
      const Vector& s = svd.singularValues();
      const double cut = tol.threshold(s.size() ? s(0) : 0.0);
      ranks[t] = 0;
      for (Index k = 0; k < s.size(); ++k) {
        if (s(k) > cut) ++ranks[t];
        if (s(k) > cut / 10.0 && s(k) < cut * 10.0) fragile = true;
      }
    }
    if (fragile) report.warnings.push_back("subset {" + format_subset(h) + "}: singular values within 10x of the cutoff");
    if (ranks[0] != ranks[1]) {
      report.holds = false;
      report.mismatches.push_back(h);
    }
  }
  return report;
}

}  // namespace rsm
