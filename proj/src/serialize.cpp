#include "rsm/serialize.hpp"

#include "rsm/errors.hpp"
#include "rsm/io.hpp"

#include <fstream>
#include <numeric>
#include <ostream>

namespace rsm {

namespace {

using detail::expect_word;
using detail::read_int;
using detail::read_word;

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

void write_dims(std::ostream& os, const char* name, const std::vector<Index>& dims) {
  os << name;
  for (Index d : dims) os << ' ' << d;
  os << '\n';
}

std::vector<Index> read_dims(std::istream& is, const char* name, Index count) {
  expect_word(is, name);
  std::vector<Index> dims;
  for (Index k = 0; k < count; ++k) {
    const long long d = read_int(is, "state dimension");
    if (d < 0) throw ParseError(std::string("negative entry in ") + name);
    dims.push_back(d);
  }
  return dims;
}

void write_node(std::ostream& os, const char* name, Index i, const Matrix& m) {
  os << name << ' ' << i + 1 << '\n';
  write_matrix(os, m);
}

void write_edge(std::ostream& os, const char* name, Index i, Index j, const Matrix& m) {
  os << name << ' ' << i + 1 << ' ' << j + 1 << '\n';
  write_matrix(os, m);
}

Matrix read_node(std::istream& is, const char* name, Index i) {
  expect_word(is, name);
  if (read_int(is, "generator index") != i + 1) throw ParseError(std::string("generator ") + name + " out of order");
  return read_matrix(is);
}

Matrix read_edge(std::istream& is, const char* name, Index i, Index j) {
  expect_word(is, name);
  const long long a = read_int(is, "edge endpoint");
  const long long b = read_int(is, "edge endpoint");
  if (a != i + 1 || b != j + 1) throw ParseError(std::string("generator ") + name + " out of order");
  return read_matrix(is);
}

// Graph section inside a rep file always ends with a path line so the reader
// knows where it stops.
void write_graph_section(std::ostream& os, const GraphPartition& g) {
  os << g.nodes() << ' ' << g.edges().size() << '\n';
  for (Index i = 0; i < g.nodes(); ++i) os << (i ? " " : "") << g.blocks().size(i);
  os << '\n';
  for (auto [i, j] : g.edges()) os << i + 1 << ' ' << j + 1 << '\n';
  os << "path";
  if (g.has_order())
    for (Index v : g.order()) os << ' ' << v + 1;
  else
    os << " none";
  os << '\n';
}

GraphPartition read_graph_section(std::istream& is) {
  const long long n = read_int(is, "node count");
  const long long m = read_int(is, "edge count");
  if (n < 1 || m < 0) throw ParseError("bad graph header");
  std::vector<Index> sizes;
  for (long long i = 0; i < n; ++i) sizes.push_back(read_int(is, "block size"));
  std::vector<std::pair<Index, Index>> edges;
  for (long long e = 0; e < m; ++e) {
    const long long i = read_int(is, "edge endpoint");
    const long long j = read_int(is, "edge endpoint");
    edges.emplace_back(i - 1, j - 1);
  }
  expect_word(is, "path");
  std::vector<Index> order;
  const std::string first = read_word(is, "path node or 'none'");
  if (first != "none") {
    try {
      order.push_back(std::stoll(first) - 1);
    } catch (const std::exception&) {
      throw ParseError("bad path entry '" + first + "'");
    }
    for (long long t = 1; t < n; ++t) order.push_back(read_int(is, "path node") - 1);
  }
  try {
    return GraphPartition(BlockPartition(sizes), edges, order);
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
}

void write_sss_body(std::ostream& os, const SssRep& s) {
  write_partition(os, s.partition);
  write_dims(os, "rg", s.rg);
  write_dims(os, "rh", s.rh);
  const struct {
    const char* name;
    const std::vector<Matrix>* family;
  } families[] = {{"D", &s.d}, {"U", &s.u}, {"W", &s.w}, {"V", &s.v}, {"P", &s.p}, {"R", &s.r}, {"Q", &s.q}};
  for (const auto& f : families)
    for (Index i = 0; i < s.n(); ++i) write_node(os, f.name, i, (*f.family)[std::size_t(i)]);
}

SssRep read_sss_body(std::istream& is) {
  SssRep s;
  s.partition = read_partition(is);
  const Index n = s.partition.count();
  s.rg = read_dims(is, "rg", n - 1);
  s.rh = read_dims(is, "rh", n - 1);
  const struct {
    const char* name;
    std::vector<Matrix>* family;
  } families[] = {{"D", &s.d}, {"U", &s.u}, {"W", &s.w}, {"V", &s.v}, {"P", &s.p}, {"R", &s.r}, {"Q", &s.q}};
  for (const auto& f : families)
    for (Index i = 0; i < n; ++i) f.family->push_back(read_node(is, f.name, i));
  return s;
}

template <class Fn>
void for_each_edge(const GraphPartition& g, Fn fn) {
  for (Index i = 0; i < g.nodes(); ++i)
    for (Index j : g.neighbors(i)) fn(i, j);
}

template <class R>
R checked(R rep) {
  try {
    rep.validate();
  } catch (const ShapeError& e) {
    throw ParseError(std::string("inconsistent representation: ") + e.what());
  }
  return rep;
}

}  // namespace

void write_rep(std::ostream& os, const Rep& rep) {
  std::visit(overloaded{
                 [&](const SssRep& s) {
                   os << "sss\n";
                   write_sss_body(os, s);
                 },
                 [&](const CssRep& c) {
                   os << "css\n";
                   write_sss_body(os, c.sss);
                   os << "U0\n";
                   write_matrix(os, c.u0);
                   os << "P0\n";
                   write_matrix(os, c.p0);
                 },
                 [&](const GssRep& g) {
                   os << "gss\n";
                   write_graph_section(os, g.graph);
                   write_dims(os, "rg", g.rg);
                   write_dims(os, "rh", g.rh);
                   for (Index i = 0; i < g.graph.nodes(); ++i) {
                     write_node(os, "D", i, g.d[std::size_t(i)]);
                     write_node(os, "V", i, g.v[std::size_t(i)]);
                     write_node(os, "Q", i, g.q[std::size_t(i)]);
                   }
                   for_each_edge(g.graph, [&](Index i, Index j) {
                     if (g.graph.position(j) > g.graph.position(i)) {
                       write_edge(os, "W", i, j, g.w.at({i, j}));
                       write_edge(os, "U", i, j, g.u.at({i, j}));
                     } else {
                       write_edge(os, "R", i, j, g.r.at({i, j}));
                       write_edge(os, "P", i, j, g.p.at({i, j}));
                     }
                   });
                 },
                 [&](const DvRep& d) {
                   os << "dv\n";
                   write_graph_section(os, d.graph);
                   write_dims(os, "r", d.r);
                   for (Index i = 0; i < d.graph.nodes(); ++i) {
                     write_node(os, "D", i, d.d[std::size_t(i)]);
                     write_node(os, "V", i, d.v[std::size_t(i)]);
                   }
                   for_each_edge(d.graph, [&](Index i, Index j) {
                     write_edge(os, "W", i, j, d.w.at({i, j}));
                     write_edge(os, "U", i, j, d.u.at({i, j}));
                   });
                 },
             },
             rep);
}

Rep read_rep(std::istream& is) {
  const std::string kind = read_word(is, "representation kind");
  if (kind == "sss") return checked(read_sss_body(is));
  if (kind == "css") {
    CssRep c;
    c.sss = read_sss_body(is);
    expect_word(is, "U0");
    c.u0 = read_matrix(is);
    expect_word(is, "P0");
    c.p0 = read_matrix(is);
    return checked(std::move(c));
  }
  if (kind == "gss") {
    GssRep g;
    g.graph = read_graph_section(is);
    if (!g.graph.has_order()) throw ParseError("gss representation needs a path");
    const Index n = g.graph.nodes();
    g.rg = read_dims(is, "rg", n);
    g.rh = read_dims(is, "rh", n);
    for (Index i = 0; i < n; ++i) {
      g.d.push_back(read_node(is, "D", i));
      g.v.push_back(read_node(is, "V", i));
      g.q.push_back(read_node(is, "Q", i));
    }
    for_each_edge(g.graph, [&](Index i, Index j) {
      if (g.graph.position(j) > g.graph.position(i)) {
        g.w[{i, j}] = read_edge(is, "W", i, j);
        g.u[{i, j}] = read_edge(is, "U", i, j);
      } else {
        g.r[{i, j}] = read_edge(is, "R", i, j);
        g.p[{i, j}] = read_edge(is, "P", i, j);
      }
    });
    return checked(std::move(g));
  }
  if (kind == "dv") {
    DvRep d;
    d.graph = read_graph_section(is);
    const Index n = d.graph.nodes();
    d.r = read_dims(is, "r", n);
    for (Index i = 0; i < n; ++i) {
      d.d.push_back(read_node(is, "D", i));
      d.v.push_back(read_node(is, "V", i));
    }
    for_each_edge(d.graph, [&](Index i, Index j) {
      d.w[{i, j}] = read_edge(is, "W", i, j);
      d.u[{i, j}] = read_edge(is, "U", i, j);
    });
    try {
      d.finalize();
    } catch (const ShapeError& e) {
      throw ParseError(std::string("inconsistent representation: ") + e.what());
    }
    return d;
  }
  throw ParseError("unknown representation kind '" + kind + "'");
}

void write_rep(const std::string& path, const Rep& rep) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "' for writing");
  f.precision(17);
  write_rep(f, rep);
  if (!f) throw ParseError("failed writing '" + path + "'");
}

Rep read_rep(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return read_rep(f);
}

std::string rep_kind(const Rep& rep) {
  static const char* names[] = {"sss", "css", "gss", "dv"};
  return names[rep.index()];
}

const BlockPartition& rep_partition(const Rep& rep) {
  return std::visit(overloaded{
                        [](const SssRep& s) -> const BlockPartition& { return s.partition; },
                        [](const CssRep& c) -> const BlockPartition& { return c.partition(); },
                        [](const GssRep& g) -> const BlockPartition& { return g.graph.blocks(); },
                        [](const DvRep& d) -> const BlockPartition& { return d.graph.blocks(); },
                    },
                    rep);
}

Vector rep_matvec(const Rep& rep, const Vector& x) {
  return std::visit(overloaded{
                        [&](const SssRep& s) { return sss_matvec(s, x); },
                        [&](const CssRep& c) { return css_matvec(c, x); },
                        [&](const GssRep& g) { return gss_matvec(g, x); },
                        [&](const DvRep& d) { return dv_apply(d, x); },
                    },
                    rep);
}

Vector rep_solve(const Rep& rep, const Vector& b, const Tolerance& tol) {
  return std::visit(overloaded{
                        [&](const SssRep& s) { return sss_solve(s, b, tol); },
                        [&](const CssRep& c) { return css_solve(c, b, tol); },
                        [&](const GssRep& g) { return gss_solve(g, b, tol); },
                        [&](const DvRep& d) { return dv_solve(d, b, tol); },
                    },
                    rep);
}

Matrix rep_to_dense(const Rep& rep) {
  return std::visit(overloaded{
                        [](const SssRep& s) { return sss_to_dense(s); },
                        [](const CssRep& c) { return css_to_dense(c); },
                        [](const GssRep& g) { return gss_to_dense(g); },
                        [](const DvRep& d) { return dv_to_dense(d); },
                    },
                    rep);
}

Index rep_total_size(const Rep& rep) {
  auto sum = [](const std::vector<Index>& v) { return std::accumulate(v.begin(), v.end(), Index(0)); };
  return std::visit(overloaded{
                        [&](const SssRep& s) { return sum(s.rg) + sum(s.rh); },
                        [&](const CssRep& c) { return sum(c.sss.rg) + sum(c.sss.rh); },
                        [&](const GssRep& g) { return sum(g.rg) + sum(g.rh); },
                        [&](const DvRep& d) { return sum(d.r); },
                    },
                    rep);
}

}  // namespace rsm
