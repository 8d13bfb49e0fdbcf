#include "rsm/bench.hpp"

#include "rsm/css.hpp"
#include "rsm/dv.hpp"
#include "rsm/errors.hpp"
#include "rsm/gss.hpp"
#include "rsm/serialize.hpp"
#include "rsm/sss.hpp"
#include "rsm/testmat.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

namespace rsm {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Runs fn `runs` times and returns the median wall time in milliseconds; the
// result of the last run is kept in `out`.
template <class T, class Fn>
double timed(int runs, T& out, Fn fn) {
  std::vector<double> ms;
  for (int k = 0; k < runs; ++k) {
    const auto t0 = Clock::now();
    out = fn();
    ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return median(std::move(ms));
}

}  // namespace

Index corner_size(const BenchConfig& cfg, Index n) {
  if (cfg.b >= 0) return cfg.b;
  return static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
}

Matrix bench_matrix(const BenchConfig& cfg, Index n) {
  if (cfg.family == "perturbed-ss") return perturbed_semiseparable(n, cfg.r, corner_size(cfg, n), cfg.seed);
  if (cfg.family == "cauchy-circle") return cauchy_circle(n);
  throw PreconditionError("unknown benchmark family '" + cfg.family + "'");
}

BlockPartition line_bench_partition(Index n) {
  std::vector<Index> sizes(static_cast<std::size_t>(n / 4), 4);
  if (n % 4) sizes.push_back(n % 4);
  return BlockPartition(sizes);
}

BlockPartition cycle_bench_partition(Index n, Index corner) {
  const Index interior = n - 2 * corner;
  if (corner < 1 || interior < 1) throw PreconditionError("cycle partition: N too small for corner size");
  std::vector<Index> sizes{corner};
  for (Index left = interior; left > 0;) {
    // fold a short remainder into the last interior block
    const Index s = left < 8 ? left : 4;
    sizes.push_back(s);
    left -= s;
  }
  sizes.push_back(corner);
  return BlockPartition(sizes);
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  std::vector<BenchRecord> out;
  for (Index n : cfg.sizes) {
    const Matrix a = bench_matrix(cfg, n);
    Rng rng(cfg.seed ^ static_cast<std::uint64_t>(n));
    const Vector rhs = rng.vector(n, -1.0, 1.0);
    const Vector x = rng.vector(n, -1.0, 1.0);
    const BlockPartition lp = line_bench_partition(n);
    const BlockPartition cp = cycle_bench_partition(n, corner_size(cfg, n));
    for (const std::string& kind : cfg.reps) {
      BenchRecord rec;
      rec.n = n;
      rec.family = cfg.family;
      rec.rep_kind = kind;
      rec.seed = cfg.seed;
      Vector y, sol;
      if (kind == "dense") {
        Eigen::PartialPivLU<Matrix> lu;
        rec.construct_ms = timed(cfg.runs, lu, [&] { return Eigen::PartialPivLU<Matrix>(a); });
        rec.matvec_ms = timed(cfg.runs, y, [&] { return Vector(a * x); });
        rec.solve_ms = timed(cfg.runs, sol, [&] { return Vector(lu.solve(rhs)); });
      } else {
        Rep rep;
        rec.construct_ms = timed(cfg.runs, rep, [&]() -> Rep {
          if (kind == "sss") return sss_from_dense(a, lp, cfg.tol);
          const CssRep c = css_from_dense(a, cp, cfg.tol, cfg.strategy);
          if (kind == "css") return c;
          if (kind == "gss") return css_to_gss(c);
          if (kind == "dv") return dv_from_gss(css_to_gss(c));
          throw PreconditionError("unknown representation kind '" + kind + "'");
        });
        rec.total_size = rep_total_size(rep);
        rec.matvec_ms = timed(cfg.runs, y, [&] { return rep_matvec(rep, x); });
        rec.solve_ms = timed(cfg.runs, sol, [&] { return rep_solve(rep, rhs, cfg.tol); });
      }
      rec.residual = (a * sol - rhs).norm() / rhs.norm();
      out.push_back(rec);
    }
  }
  return out;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records, int runs) {
  os << "# timings are wall-clock medians of " << runs << " runs\n";
  os << "N,family,rep_kind,construct_ms,matvec_ms,solve_ms,total_size,residual,seed\n";
  for (const BenchRecord& r : records)
    os << r.n << ',' << r.family << ',' << r.rep_kind << ',' << r.construct_ms << ',' << r.matvec_ms << ','
       << r.solve_ms << ',' << r.total_size << ',' << r.residual << ',' << r.seed << '\n';
}

}  // namespace rsm
