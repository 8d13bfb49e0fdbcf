#pragma once

#include "rsm/css.hpp"
#include "rsm/dv.hpp"
#include "rsm/gss.hpp"
#include "rsm/sss.hpp"

#include <iosfwd>
#include <string>
#include <variant>

namespace rsm {

using Rep = std::variant<SssRep, CssRep, GssRep, DvRep>;

// Text format: a kind tag (sss, css, gss, dv), the partition or graph, the
// state dimension vectors, then every generator as a line "NAME i" (or
// "NAME i j" for edge generators, 1-based) followed by a matrix.
void write_rep(std::ostream& os, const Rep& rep);
Rep read_rep(std::istream& is);
void write_rep(const std::string& path, const Rep& rep);
Rep read_rep(const std::string& path);

std::string rep_kind(const Rep& rep);
const BlockPartition& rep_partition(const Rep& rep);
Vector rep_matvec(const Rep& rep, const Vector& x);
Vector rep_solve(const Rep& rep, const Vector& b, const Tolerance& tol = {});
Matrix rep_to_dense(const Rep& rep);
// Sum of all state dimensions.
Index rep_total_size(const Rep& rep);

}  // namespace rsm
