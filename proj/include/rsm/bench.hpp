#pragma once

#include "rsm/hankel_lrcp.hpp"
#include "rsm/linalg.hpp"
#include "rsm/partition.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rsm {

struct BenchRecord {
  Index n = 0;
  std::string family;
  std::string rep_kind;  // sss | css | gss | dv | dense
  double construct_ms = 0.0;
  double matvec_ms = 0.0;
  double solve_ms = 0.0;
  Index total_size = 0;
  double residual = 0.0;  // ||A x - b|| / ||b|| for the solve
  std::uint64_t seed = 0;
};

struct BenchConfig {
  std::string family = "perturbed-ss";  // perturbed-ss | cauchy-circle
  Index r = 10;
  Index b = -1;  // corner size; negative means ceil(sqrt(N))
  std::vector<Index> sizes;
  std::vector<std::string> reps;
  std::uint64_t seed = 7;
  int runs = 5;
  Tolerance tol;
  Strategy strategy = Strategy::single_block();
};

Index corner_size(const BenchConfig& cfg, Index n);

// Test matrix of the named family at size n.
Matrix bench_matrix(const BenchConfig& cfg, Index n);

// Blocks of 4 for SSS; for the cycle the two end blocks have the corner size
// and the interior uses blocks of 4 (the last one absorbs any remainder).
BlockPartition line_bench_partition(Index n);
BlockPartition cycle_bench_partition(Index n, Index corner);

// One record per (size, rep) pair, timings are medians over cfg.runs runs.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records, int runs);

}  // namespace rsm
