#include "rsm/io.hpp"

#include "rsm/errors.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

namespace rsm {

namespace detail {

std::string read_word(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw ParseError(std::string("unexpected end of input, expected ") + what);
  return tok;
}

long long read_int(std::istream& is, const char* what) {
  std::string tok = read_word(is, what);
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(tok.c_str(), &end, 10);
  if (errno != 0 || end == tok.c_str() || *end != '\0')
    throw ParseError(std::string("expected integer ") + what + ", got '" + tok + "'");
  return v;
}

double read_real(std::istream& is, const char* what) {
  std::string tok = read_word(is, what);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(tok.c_str(), &end);
  if (errno == ERANGE || end == tok.c_str() || *end != '\0')
    throw ParseError(std::string("expected number ") + what + ", got '" + tok + "'");
  return v;
}

void expect_word(std::istream& is, const std::string& word) {
  std::string tok = read_word(is, word.c_str());
  if (tok != word) throw ParseError("expected '" + word + "', got '" + tok + "'");
}

}  // namespace detail

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "' for reading");
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  os << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  long long rows = detail::read_int(is, "row count");
  long long cols = detail::read_int(is, "column count");
  if (rows < 0 || cols < 0) throw ParseError("negative matrix dimension");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = detail::read_real(is, "matrix entry");
  return m;
}

void write_matrix(const std::string& path, const Matrix& m) {
  auto f = open_out(path);
  write_matrix(f, m);
}

Matrix read_matrix(const std::string& path) {
  auto f = open_in(path);
  return read_matrix(f);
}

Vector read_vector(const std::string& path) {
  Matrix m = read_matrix(path);
  if (m.cols() != 1) throw ParseError("'" + path + "' is not a column vector");
  return m.col(0);
}

void write_vector(const std::string& path, const Vector& v) { write_matrix(path, Matrix(v)); }

void write_partition(std::ostream& os, const BlockPartition& p) {
  os << p.count() << '\n';
  for (Index i = 0; i < p.count(); ++i) os << (i ? " " : "") << p.size(i);
  os << '\n';
}

BlockPartition read_partition(std::istream& is) {
  long long n = detail::read_int(is, "block count");
  if (n < 1) throw ParseError("partition needs at least one block");
  std::vector<Index> sizes;
  for (long long i = 0; i < n; ++i) {
    long long s = detail::read_int(is, "block size");
    if (s <= 0) throw ParseError("block sizes must be positive");
    sizes.push_back(s);
  }
  return BlockPartition(sizes);
}

void write_partition(const std::string& path, const BlockPartition& p) {
  auto f = open_out(path);
  write_partition(f, p);
}

BlockPartition read_partition(const std::string& path) {
  auto f = open_in(path);
  return read_partition(f);
}

void write_graph(std::ostream& os, const GraphPartition& g) {
  os << g.nodes() << ' ' << g.edges().size() << '\n';
  for (Index i = 0; i < g.nodes(); ++i) os << (i ? " " : "") << g.blocks().size(i);
  os << '\n';
  for (auto [i, j] : g.edges()) os << i + 1 << ' ' << j + 1 << '\n';
  if (g.has_order()) {
    os << "path";
    for (Index v : g.order()) os << ' ' << v + 1;
    os << '\n';
  }
}

GraphPartition read_graph(std::istream& is) {
  long long n = detail::read_int(is, "node count");
  long long m = detail::read_int(is, "edge count");
  if (n < 1 || m < 0) throw ParseError("bad graph header");
  std::vector<Index> sizes;
  for (long long i = 0; i < n; ++i) {
    long long s = detail::read_int(is, "block size");
    if (s <= 0) throw ParseError("block sizes must be positive");
    sizes.push_back(s);
  }
  std::vector<std::pair<Index, Index>> edges;
  for (long long e = 0; e < m; ++e) {
    long long i = detail::read_int(is, "edge endpoint");
    long long j = detail::read_int(is, "edge endpoint");
    edges.emplace_back(i - 1, j - 1);
  }
  std::vector<Index> order;
  std::string tok;
  if (is >> tok) {
    if (tok != "path") throw ParseError("expected 'path' or end of graph file, got '" + tok + "'");
    for (long long t = 0; t < n; ++t) order.push_back(detail::read_int(is, "path node") - 1);
  }
  try {
    return GraphPartition(BlockPartition(sizes), edges, order);
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
}

void write_graph(const std::string& path, const GraphPartition& g) {
  auto f = open_out(path);
  write_graph(f, g);
}

GraphPartition read_graph(const std::string& path) {
  auto f = open_in(path);
  return read_graph(f);
}

}  // namespace rsm
