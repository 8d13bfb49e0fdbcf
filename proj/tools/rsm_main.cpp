// Command-line front end: gen, construct, solve, bench, verify-girs, lrcp.

#include "rsm/bench.hpp"
#include "rsm/css.hpp"
#include "rsm/dv.hpp"
#include "rsm/errors.hpp"
#include "rsm/girs.hpp"
#include "rsm/gss.hpp"
#include "rsm/hankel_lrcp.hpp"
#include "rsm/io.hpp"
#include "rsm/serialize.hpp"
#include "rsm/sss.hpp"
#include "rsm/testmat.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

using namespace rsm;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

void print_dims(std::ostream& os, const char* name, const std::vector<Index>& dims) {
  os << name << ":";
  for (Index d : dims) os << ' ' << d;
  os << '\n';
}

SubsetPolicy parse_policy(const std::string& s, std::uint64_t seed) {
  if (s == "exhaustive") return SubsetPolicy::exhaustive();
  if (s == "prefixes") return SubsetPolicy::prefixes();
  if (s == "intervals") return SubsetPolicy::intervals();
  if (s.rfind("sampled", 0) == 0) {
    Index k = 50;
    if (s.size() > 7) {
      if (s[7] != ':') throw PreconditionError("bad policy '" + s + "'");
      k = std::stoll(s.substr(8));
    }
    return SubsetPolicy::sampled(k, seed);
  }
  throw PreconditionError("unknown policy '" + s + "' (exhaustive, sampled[:K], prefixes, intervals)");
}

// Permutes A so that the blocks follow the path order of the graph.
std::pair<Matrix, BlockPartition> to_path_order(const Matrix& a, const GraphPartition& g) {
  const BlockPartition& bp = g.blocks();
  std::vector<Index> sizes, perm;
  for (Index node : g.order()) {
    sizes.push_back(bp.size(node));
    for (Index k = 0; k < bp.size(node); ++k) perm.push_back(bp.offset(node) + k);
  }
  return {a(perm, perm), BlockPartition(sizes)};
}

struct GenOptions {
  std::string family;
  Index n = 256, r = 10, m = 4, block_size = 1;
  std::string b = "sqrt";
  double a = 1.0, diag = 3.0;
  std::uint64_t seed = 7;
  std::string out, partition_out, graph_out;
};

int run_gen(const GenOptions& o) {
  Matrix a;
  std::optional<BlockPartition> part;
  std::optional<GraphPartition> graph;
  if (o.family == "perturbed-ss") {
    const Index b = o.b == "sqrt" ? static_cast<Index>(std::ceil(std::sqrt(double(o.n)))) : std::stoll(o.b);
    a = perturbed_semiseparable(o.n, o.r, b, o.seed);
  } else if (o.family == "cauchy-circle") {
    a = cauchy_circle(o.n);
  } else if (o.family == "circular-tridiagonal") {
    std::tie(a, part) = circular_tridiagonal(o.a, o.diag);
  } else if (o.family == "arrowhead") {
    a = arrowhead(o.n, o.seed);
  } else if (o.family == "poisson2d") {
    std::tie(a, graph) = poisson2d(o.m);
  } else if (o.family == "log-kernel") {
    a = log_kernel_nystrom(o.n);
  } else if (o.family == "identity") {
    a = Matrix::Identity(o.n, o.n);
  } else if (o.family == "hankel-example") {
    std::tie(a, part) = hankel_example_matrix();
  } else if (o.family == "random-sss") {
    Rng rng(o.seed);
    const BlockPartition p = BlockPartition::uniform(o.n / o.block_size, o.block_size);
    a = random_sss_matrix(p, o.r, rng);
    part = p;
  } else {
    throw PreconditionError("unknown family '" + o.family + "'");
  }
  if (o.out.empty())
    write_matrix(std::cout, a);
  else
    write_matrix(o.out, a);
  if (!o.partition_out.empty()) write_partition(o.partition_out, part ? *part : BlockPartition::uniform(a.rows() / o.block_size, o.block_size));
  if (!o.graph_out.empty()) {
    if (!graph) throw PreconditionError("family '" + o.family + "' has no natural graph");
    write_graph(o.graph_out, *graph);
  }
  return 0;
}

struct ConstructOptions {
  std::string matrix, partition, graph, kind = "sss", out, strategy = "single";
  double tol = 1e-8;
};

int run_construct(const ConstructOptions& o) {
  const Matrix a = read_matrix(o.matrix);
  const Tolerance tol{o.tol};
  Rep rep;
  if (o.kind == "sss" || o.kind == "css") {
    if (o.partition.empty()) throw PreconditionError("construct " + o.kind + " needs --partition");
    const BlockPartition p = read_partition(o.partition);
    if (o.kind == "sss")
      rep = sss_from_dense(a, p, tol);
    else
      rep = css_from_dense(a, p, tol, parse_strategy(o.strategy));
  } else if (o.kind == "gss" || o.kind == "dv") {
    if (o.graph.empty()) throw PreconditionError("construct " + o.kind + " needs --graph");
    const GraphPartition g = read_graph(o.graph);
    bool sparse_fit = false;
    if (o.kind == "dv") {
      try {
        rep = dv_from_sparse(a, g);
        sparse_fit = true;
      } catch (const PreconditionError&) {
      }
    }
    if (!sparse_fit) {
      if (!g.has_order()) throw PreconditionError("graph has no path; needed unless the matrix is sparse on the graph");
      const auto [ap, pp] = to_path_order(a, g);
      const GssRep gss = gss_from_sss(sss_from_dense(ap, pp, tol), g);
      if (o.kind == "gss")
        rep = gss;
      else
        rep = dv_from_gss(gss);
    }
  } else {
    throw PreconditionError("unknown representation kind '" + o.kind + "'");
  }
  if (!o.out.empty()) write_rep(o.out, rep);
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SssRep>) {
          print_dims(std::cout, "rg", r.rg);
          print_dims(std::cout, "rh", r.rh);
        } else if constexpr (std::is_same_v<T, CssRep>) {
          print_dims(std::cout, "rg", r.sss.rg);
          print_dims(std::cout, "rh", r.sss.rh);
        } else if constexpr (std::is_same_v<T, GssRep>) {
          print_dims(std::cout, "rg", r.rg);
          print_dims(std::cout, "rh", r.rh);
        } else {
          print_dims(std::cout, "r", r.r);
        }
      },
      rep);
  std::cout << "kind: " << rep_kind(rep) << "\n";
  std::cout << "total_size: " << rep_total_size(rep) << "\n";
  const double err = a.size() ? (rep_to_dense(rep) - a).norm() / std::max(a.norm(), 1e-300) : 0.0;
  std::cout << "relative_error: " << err << "\n";
  return 0;
}

struct SolveOptions {
  std::string rep, rhs, out;
  double tol = 1e-8;
};

int run_solve(const SolveOptions& o) {
  const Rep rep = read_rep(o.rep);
  const Vector b = read_vector(o.rhs);
  const Vector x = rep_solve(rep, b, Tolerance{o.tol});
  const double bn = b.norm();
  const double residual = (rep_matvec(rep, x) - b).norm() / (bn > 0 ? bn : 1.0);
  if (o.out.empty())
    write_matrix(std::cout, x);
  else
    write_vector(o.out, x);
  std::cerr << "residual: " << residual << "\n";
  return 0;
}

struct BenchOptions {
  std::string family = "perturbed-ss", b = "sqrt", sizes = "256,1024,4096", reps = "sss,css", out, strategy = "single";
  Index r = 10;
  int runs = 5;
  std::uint64_t seed = 7;
  double tol = 1e-8;
};

int run_bench_cmd(const BenchOptions& o) {
  BenchConfig cfg;
  cfg.family = o.family;
  cfg.r = o.r;
  cfg.b = o.b == "sqrt" ? -1 : std::stoll(o.b);
  for (const std::string& s : split(o.sizes, ',')) cfg.sizes.push_back(std::stoll(s));
  cfg.reps = split(o.reps, ',');
  cfg.seed = o.seed;
  cfg.runs = o.runs;
  cfg.tol = Tolerance{o.tol};
  cfg.strategy = parse_strategy(o.strategy);
  const auto records = run_bench(cfg);
  if (o.out.empty()) {
    write_bench_csv(std::cout, records, cfg.runs);
  } else {
    std::ofstream f(o.out);
    if (!f) throw ParseError("cannot open '" + o.out + "' for writing");
    write_bench_csv(f, records, cfg.runs);
  }
  return 0;
}

struct GirsOptions {
  std::string matrix, partition, graph, policy = "exhaustive", out;
  double c = 1.0, tol = 1e-8;
  bool cycle = false, estimate = false;
  std::uint64_t seed = 1;
};

int run_verify_girs(const GirsOptions& o) {
  const Matrix a = read_matrix(o.matrix);
  GraphPartition g;
  if (!o.graph.empty()) {
    g = read_graph(o.graph);
  } else if (!o.partition.empty()) {
    const BlockPartition p = read_partition(o.partition);
    g = o.cycle ? cycle_graph(p) : line_graph(p);
  } else {
    throw PreconditionError("verify-girs needs --graph or --partition");
  }
  const SubsetPolicy policy = parse_policy(o.policy, o.seed);
  const Tolerance tol{o.tol};
  const GirsReport report = verify_girs(a, g, o.c, policy, tol);
  if (o.out.empty()) {
    write_girs_report(std::cout, report);
  } else {
    std::ofstream f(o.out);
    if (!f) throw ParseError("cannot open '" + o.out + "' for writing");
    write_girs_report(f, report);
  }
  std::cerr << "tested: " << report.tested << "\nviolations: " << report.violations.size()
            << "\nmin_slack: " << report.min_slack << "\n";
  if (o.estimate) std::cerr << "estimated_constant: " << estimate_girs_constant(a, g, policy, tol) << "\n";
  return 0;
}

struct LrcpOptions {
  std::string in, out, strategy = "single";
  double tol = 1e-8;
};

int run_lrcp(const LrcpOptions& o) {
  const HankelCompletionProblem p = read_hankel_problem(o.in);
  const Tolerance tol{o.tol};
  const Matrix x = solve(p, parse_strategy(o.strategy), tol);
  if (!o.out.empty()) write_matrix(o.out, x);
  std::cout << "X:\n" << std::setprecision(10) << x << "\n";
  std::cout << "ranks:";
  for (Index k = 1; k < p.n(); ++k) std::cout << ' ' << numerical_rank(hankel_block(p, k, x), tol);
  std::cout << "\nminimum:";
  for (Index k = 1; k < p.n(); ++k) std::cout << ' ' << per_block_minimum(p, k, tol);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-structured matrix toolkit"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a test matrix");
  gen_cmd->add_option("--family", gen.family,
                      "perturbed-ss | cauchy-circle | circular-tridiagonal | arrowhead | poisson2d | log-kernel | "
                      "hankel-example | random-sss | identity")
      ->required();
  gen_cmd->add_option("--N", gen.n, "Matrix size");
  gen_cmd->add_option("--r", gen.r, "Rank parameter");
  gen_cmd->add_option("--b", gen.b, "Corner size or 'sqrt'");
  gen_cmd->add_option("--m", gen.m, "Grid side for poisson2d");
  gen_cmd->add_option("--a", gen.a, "Off-diagonal value for circular-tridiagonal");
  gen_cmd->add_option("--diag", gen.diag, "Diagonal value for circular-tridiagonal");
  gen_cmd->add_option("--block-size", gen.block_size, "Uniform block size for written partitions");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Matrix output file (stdout if omitted)");
  gen_cmd->add_option("--partition-out", gen.partition_out, "Partition output file");
  gen_cmd->add_option("--graph-out", gen.graph_out, "Graph output file");

  ConstructOptions con;
  auto* con_cmd = app.add_subcommand("construct", "Build a representation from a dense matrix");
  con_cmd->add_option("--matrix", con.matrix, "Matrix file")->required();
  con_cmd->add_option("--partition", con.partition, "Partition file (sss, css)");
  con_cmd->add_option("--graph", con.graph, "Graph file (gss, dv)");
  con_cmd->add_option("--rep", con.kind, "sss | css | gss | dv");
  con_cmd->add_option("--strategy", con.strategy, "Corner strategy for css: full | single | single:K");
  con_cmd->add_option("--tol", con.tol, "Absolute singular value cutoff");
  con_cmd->add_option("--out", con.out, "Representation output file");

  SolveOptions sol;
  auto* sol_cmd = app.add_subcommand("solve", "Solve A x = b with a stored representation");
  sol_cmd->add_option("--rep", sol.rep, "Representation file")->required();
  sol_cmd->add_option("--rhs", sol.rhs, "Right-hand side file")->required();
  sol_cmd->add_option("--tol", sol.tol, "Absolute singular value cutoff");
  sol_cmd->add_option("--out", sol.out, "Solution output file (stdout if omitted)");

  BenchOptions ben;
  auto* ben_cmd = app.add_subcommand("bench", "Scaling benchmark to CSV");
  ben_cmd->add_option("--family", ben.family, "perturbed-ss | cauchy-circle");
  ben_cmd->add_option("--r", ben.r, "Rank parameter");
  ben_cmd->add_option("--b", ben.b, "Corner size or 'sqrt'");
  ben_cmd->add_option("--N", ben.sizes, "Comma-separated sizes");
  ben_cmd->add_option("--reps", ben.reps, "Comma-separated kinds: sss,css,gss,dv,dense");
  ben_cmd->add_option("--runs", ben.runs, "Timing runs per measurement (median reported)");
  ben_cmd->add_option("--strategy", ben.strategy, "Corner strategy for css");
  ben_cmd->add_option("--tol", ben.tol, "Absolute singular value cutoff");
  ben_cmd->add_option("--seed", ben.seed, "Random seed");
  ben_cmd->add_option("--out", ben.out, "CSV output file (stdout if omitted)");

  GirsOptions gir;
  auto* gir_cmd = app.add_subcommand("verify-girs", "Check rank(A[H-bar, H]) <= c rho(H)");
  gir_cmd->add_option("--matrix", gir.matrix, "Matrix file")->required();
  gir_cmd->add_option("--graph", gir.graph, "Graph file");
  gir_cmd->add_option("--partition", gir.partition, "Partition file (line graph, or cycle with --cycle)");
  gir_cmd->add_flag("--cycle", gir.cycle, "Use the cycle graph of the partition");
  gir_cmd->add_option("--c", gir.c, "GIRS constant");
  gir_cmd->add_option("--policy", gir.policy, "exhaustive | sampled[:K] | prefixes | intervals");
  gir_cmd->add_option("--seed", gir.seed, "Seed for sampled subsets");
  gir_cmd->add_option("--tol", gir.tol, "Absolute singular value cutoff");
  gir_cmd->add_flag("--estimate", gir.estimate, "Also report the estimated constant");
  gir_cmd->add_option("--out", gir.out, "Violation CSV output (stdout if omitted)");

  LrcpOptions lr;
  auto* lr_cmd = app.add_subcommand("lrcp", "Solve a Hankel low-rank completion problem");
  lr_cmd->add_option("--in", lr.in, "Problem file")->required();
  lr_cmd->add_option("--strategy", lr.strategy, "full | single | single:K");
  lr_cmd->add_option("--tol", lr.tol, "Absolute singular value cutoff");
  lr_cmd->add_option("--out", lr.out, "Output file for the completed corner");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (con_cmd->parsed()) return run_construct(con);
    if (sol_cmd->parsed()) return run_solve(sol);
    if (ben_cmd->parsed()) return run_bench_cmd(ben);
    if (gir_cmd->parsed()) return run_verify_girs(gir);
    if (lr_cmd->parsed()) return run_lrcp(lr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
