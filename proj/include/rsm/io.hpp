#pragma once

#include "rsm/linalg.hpp"
#include "rsm/partition.hpp"

#include <iosfwd>
#include <string>

namespace rsm {

// Matrix text format: "rows cols" followed by one line per row, values
// written with 17 significant digits so a round trip is bit-stable.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);
void write_matrix(const std::string& path, const Matrix& m);
Matrix read_matrix(const std::string& path);

// Vectors are stored as N x 1 matrices.
Vector read_vector(const std::string& path);
void write_vector(const std::string& path, const Vector& v);

// Partition format: "n" then the n block sizes.
void write_partition(std::ostream& os, const BlockPartition& p);
BlockPartition read_partition(std::istream& is);
void write_partition(const std::string& path, const BlockPartition& p);
BlockPartition read_partition(const std::string& path);

// Graph format: "n m", the n block sizes, m lines "i j" (1-based), then an
// optional line "path i1 ... in".
void write_graph(std::ostream& os, const GraphPartition& g);
GraphPartition read_graph(std::istream& is);
void write_graph(const std::string& path, const GraphPartition& g);
GraphPartition read_graph(const std::string& path);

namespace detail {
// Reads one whitespace-delimited token of the given type or throws ParseError
// naming what was expected.
long long read_int(std::istream& is, const char* what);
double read_real(std::istream& is, const char* what);
std::string read_word(std::istream& is, const char* what);
void expect_word(std::istream& is, const std::string& word);
}  // namespace detail

}  // namespace rsm
