#include "rsm/partition.hpp"

#include "rsm/errors.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace rsm {

BlockPartition::BlockPartition(std::vector<Index> sizes) : sizes_(std::move(sizes)) {
  offsets_.assign(1, 0);
  for (Index s : sizes_) {
    if (s < 0) throw ShapeError("BlockPartition: negative block size");
    offsets_.push_back(offsets_.back() + s);
  }
}

BlockPartition BlockPartition::uniform(Index n, Index size) {
  return BlockPartition(std::vector<Index>(static_cast<std::size_t>(n), size));
}

GraphPartition::GraphPartition(BlockPartition blocks, std::vector<std::pair<Index, Index>> edges,
                               std::vector<Index> order)
    : blocks_(std::move(blocks)), edges_(std::move(edges)) {
  const Index n = blocks_.count();
  adj_.assign(static_cast<std::size_t>(n), {});
  std::set<std::pair<Index, Index>> seen;
  for (auto [i, j] : edges_) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw ShapeError("GraphPartition: edge references a missing node");
    if (i == j) throw ShapeError("GraphPartition: self-loop at node " + std::to_string(i + 1));
    auto key = std::minmax(i, j);
    if (!seen.insert({key.first, key.second}).second)
      throw ShapeError("GraphPartition: repeated edge " + std::to_string(i + 1) + " " + std::to_string(j + 1));
    adj_[static_cast<std::size_t>(i)].push_back(j);
    adj_[static_cast<std::size_t>(j)].push_back(i);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  if (!order.empty()) *this = with_order(std::move(order));
}

bool GraphPartition::has_edge(Index i, Index j) const {
  const auto& a = neighbors(i);
  return std::binary_search(a.begin(), a.end(), j);
}

GraphPartition GraphPartition::with_order(std::vector<Index> order) const {
  const Index n = nodes();
  if (static_cast<Index>(order.size()) != n) throw ShapeError("GraphPartition: path must visit every node once");
  std::vector<Index> pos(static_cast<std::size_t>(n), -1);
  for (std::size_t t = 0; t < order.size(); ++t) {
    Index v = order[t];
    if (v < 0 || v >= n || pos[static_cast<std::size_t>(v)] >= 0)
      throw ShapeError("GraphPartition: path is not a permutation of the nodes");
    pos[static_cast<std::size_t>(v)] = static_cast<Index>(t);
  }
  for (std::size_t t = 0; t + 1 < order.size(); ++t)
    if (!has_edge(order[t], order[t + 1]))
      throw ShapeError("GraphPartition: consecutive path nodes " + std::to_string(order[t] + 1) + " and " +
                       std::to_string(order[t + 1] + 1) + " are not adjacent");
  GraphPartition g = *this;
  g.order_ = std::move(order);
  g.pos_ = std::move(pos);
  return g;
}

std::vector<Index> GraphPartition::successors(Index i) const {
  std::vector<Index> out;
  for (Index j : neighbors(i))
    if (position(j) > position(i)) out.push_back(j);
  return out;
}

std::vector<Index> GraphPartition::predecessors(Index i) const {
  std::vector<Index> out;
  for (Index j : neighbors(i))
    if (position(j) < position(i)) out.push_back(j);
  return out;
}

GraphPartition line_graph(const BlockPartition& p) {
  std::vector<std::pair<Index, Index>> e;
  std::vector<Index> order;
  for (Index i = 0; i < p.count(); ++i) {
    order.push_back(i);
    if (i + 1 < p.count()) e.emplace_back(i, i + 1);
  }
  return GraphPartition(p, e, order);
}

GraphPartition cycle_graph(const BlockPartition& p) {
  const Index n = p.count();
  if (n < 3) throw ShapeError("cycle_graph: needs at least three nodes");
  std::vector<std::pair<Index, Index>> e;
  std::vector<Index> order;
  for (Index i = 0; i < n; ++i) {
    order.push_back(i);
    e.emplace_back(i, (i + 1) % n);
  }
  return GraphPartition(p, e, order);
}

GraphPartition mesh_graph(Index m1, Index m2, const BlockPartition& p) {
  if (p.count() != m1 * m2) throw ShapeError("mesh_graph: partition must have m1*m2 blocks");
  std::vector<std::pair<Index, Index>> e;
  for (Index i = 0; i < m1; ++i)
    for (Index j = 0; j < m2; ++j) {
      Index v = i * m2 + j;
      if (j + 1 < m2) e.emplace_back(v, v + 1);
      if (i + 1 < m1) e.emplace_back(v, v + m2);
    }
  return GraphPartition(p, e);
}

namespace {

// Classic distance-to-coordinate conversion for the Hilbert curve.
std::pair<Index, Index> hilbert_d2xy(Index m, Index d) {
  Index x = 0, y = 0, t = d;
  for (Index s = 1; s < m; s *= 2) {
    Index rx = 1 & (t / 2);
    Index ry = 1 & (t ^ rx);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {x, y};
}

}  // namespace

std::vector<Index> hilbert_order(Index m) {
  if (m < 1 || (m & (m - 1)) != 0) throw ShapeError("hilbert_order: side must be a power of two");
  std::vector<Index> order;
  for (Index d = 0; d < m * m; ++d) {
    auto [x, y] = hilbert_d2xy(m, d);
    order.push_back(x * m + y);
  }
  return order;
}

}  // namespace rsm
