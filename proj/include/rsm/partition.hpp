#pragma once

#include "rsm/linalg.hpp"

#include <utility>
#include <vector>

namespace rsm {

// Sizes N_1..N_n of a block partition.  Indices are 0-based in code.
class BlockPartition {
 public:
  BlockPartition() = default;
  explicit BlockPartition(std::vector<Index> sizes);

  // n blocks of equal size.
  static BlockPartition uniform(Index n, Index size);

  Index count() const { return static_cast<Index>(sizes_.size()); }
  Index total() const { return offsets_.back(); }
  Index size(Index i) const { return sizes_[static_cast<std::size_t>(i)]; }
  Index offset(Index i) const { return offsets_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& sizes() const { return sizes_; }

  bool operator==(const BlockPartition& o) const { return sizes_ == o.sizes_; }

 private:
  std::vector<Index> sizes_;
  std::vector<Index> offsets_{0};
};

// Block (i, j) of a partitioned matrix.
inline auto block(const Matrix& a, const BlockPartition& p, Index i, Index j) {
  return a.block(p.offset(i), p.offset(j), p.size(i), p.size(j));
}
inline auto block(Matrix& a, const BlockPartition& p, Index i, Index j) {
  return a.block(p.offset(i), p.offset(j), p.size(i), p.size(j));
}
inline auto segment(const Vector& x, const BlockPartition& p, Index i) { return x.segment(p.offset(i), p.size(i)); }
inline auto segment(Vector& x, const BlockPartition& p, Index i) { return x.segment(p.offset(i), p.size(i)); }

// Simple undirected graph on the blocks of a partition, with an optional
// Hamiltonian path (order[t] = node visited at step t).
class GraphPartition {
 public:
  GraphPartition() = default;
  GraphPartition(BlockPartition blocks, std::vector<std::pair<Index, Index>> edges,
                 std::vector<Index> order = {});

  const BlockPartition& blocks() const { return blocks_; }
  Index nodes() const { return blocks_.count(); }
  const std::vector<std::pair<Index, Index>>& edges() const { return edges_; }
  const std::vector<Index>& neighbors(Index i) const { return adj_[static_cast<std::size_t>(i)]; }
  bool has_edge(Index i, Index j) const;

  bool has_order() const { return !order_.empty(); }
  const std::vector<Index>& order() const { return order_; }
  // Position of node i along the path.
  Index position(Index i) const { return pos_[static_cast<std::size_t>(i)]; }
  // Neighbours after (successors) or before (predecessors) i along the path.
  std::vector<Index> successors(Index i) const;
  std::vector<Index> predecessors(Index i) const;

  GraphPartition with_order(std::vector<Index> order) const;

 private:
  BlockPartition blocks_;
  std::vector<std::pair<Index, Index>> edges_;
  std::vector<std::vector<Index>> adj_;
  std::vector<Index> order_;
  std::vector<Index> pos_;
};

GraphPartition line_graph(const BlockPartition& p);
GraphPartition cycle_graph(const BlockPartition& p);
// m1 x m2 grid, node (i, j) has index i * m2 + j; no path attached.
GraphPartition mesh_graph(Index m1, Index m2, const BlockPartition& p);
// Hilbert-curve visiting order of an m x m grid, m a power of two.
std::vector<Index> hilbert_order(Index m);

}  // namespace rsm
