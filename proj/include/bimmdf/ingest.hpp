#pragma once

// Edge-list loading for real directed weighted networks.

#include "bimmdf/core.hpp"
#include "bimmdf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bimmdf {

enum class EdgeFormat { Tsv, Csv };

/// How node ids are numbered. Numeric treats ids as the integers 1..max and
/// declares every one of them, so unreferenced ids show up as isolated nodes.
enum class IdOrder { FirstAppearance, Numeric };

enum class DuplicatePolicy { Error, Sum };

struct Edge {
  Index source = 0;
  Index target = 0;
  double weight = 1.0;
};

/// Directed weighted edges over one shared node-id table.
struct EdgeList {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;

  Index node_count() const { return static_cast<Index>(nodes.size()); }
  Index edge_count() const { return static_cast<Index>(edges.size()); }
};

struct LoadOptions {
  EdgeFormat format = EdgeFormat::Tsv;
  double weight_default = 1.0;
  IdOrder order = IdOrder::FirstAppearance;
};

inline EdgeFormat format_for_path(std::string_view path) {
  return path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? EdgeFormat::Csv : EdgeFormat::Tsv;
}

inline EdgeList read_edge_list(std::istream& is, const LoadOptions& opt = {}) {
  if (!std::isfinite(opt.weight_default)) throw DomainError("weight_default must be finite");
  struct Raw { std::string s, t; double w; };
  std::vector<Raw> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto t = io::trim(line);
    if (t.empty() || t.front() == '%' || t.front() == '#') continue;
    std::vector<std::string_view> fields;
    if (opt.format == EdgeFormat::Csv) {
      for (auto f : io::split(t, ',')) fields.push_back(io::trim(f));
    } else {
      fields = io::split_whitespace(t);
    }
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(where + "expected 2 or 3 columns, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) throw ParseError(where + "empty node id");
    double w = opt.weight_default;
    if (fields.size() == 3) {
      const auto v = io::parse_double(fields[2]);
      if (!v) throw ParseError(where + "cannot parse weight '" + std::string(fields[2]) + "'");
      if (!std::isfinite(*v)) throw ParseError(where + "non-finite weight");
      w = *v;
    }
    raw.push_back({std::string(fields[0]), std::string(fields[1]), w});
  }

  EdgeList out;
  out.edges.reserve(raw.size());
  if (opt.order == IdOrder::Numeric) {
    auto id_of = [&](const std::string& s, std::size_t k) -> Index {
      Index v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 1) {
        throw ParseError("edge " + std::to_string(k + 1) + ": id '" + s +
                         "' is not a positive integer");
      }
      return v;
    };
    Index max_id = 0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      const Index s = id_of(raw[k].s, k), t = id_of(raw[k].t, k);
      max_id = std::max({max_id, s, t});
      out.edges.push_back({s - 1, t - 1, raw[k].w});
    }
    for (Index i = 1; i <= max_id; ++i) out.nodes.push_back(std::to_string(i));
  } else {
    std::unordered_map<std::string, Index> index;
    auto intern = [&](const std::string& s) {
      const auto [it, fresh] = index.try_emplace(s, static_cast<Index>(out.nodes.size()));
      if (fresh) out.nodes.push_back(s);
      return it->second;
    };
    for (const auto& r : raw) {
      const Index s = intern(r.s);
      const Index t = intern(r.t);
      out.edges.push_back({s, t, r.w});
    }
  }
  return out;
}

inline EdgeList load_edge_list(const std::string& path, const LoadOptions& opt) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  try {
    return read_edge_list(f, opt);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline EdgeList load_edge_list(const std::string& path) {
  LoadOptions opt;
  opt.format = format_for_path(path);
  return load_edge_list(path, opt);
}

/// Removes nodes that are the endpoint of no edge; surviving nodes keep
/// their relative order.
inline EdgeList drop_isolated(const EdgeList& in) {
  std::vector<bool> used(in.nodes.size(), false);
  for (const auto& e : in.edges) {
    used[static_cast<std::size_t>(e.source)] = true;
    used[static_cast<std::size_t>(e.target)] = true;
  }
  std::vector<Index> remap(in.nodes.size(), -1);
  EdgeList out;
  for (std::size_t i = 0; i < in.nodes.size(); ++i) {
    if (!used[i]) continue;
    remap[i] = static_cast<Index>(out.nodes.size());
    out.nodes.push_back(in.nodes[i]);
  }
  out.edges.reserve(in.edges.size());
  for (const auto& e : in.edges) {
    out.edges.push_back({remap[static_cast<std::size_t>(e.source)],
                         remap[static_cast<std::size_t>(e.target)], e.weight});
  }
  return out;
}

/// Dense adjacency of the edges plus the node ids labelling its rows and
/// columns.
struct DenseNetwork {
  Matrix adjacency;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
};

/// Square: rows and columns both index the shared node table. Otherwise rows
/// are the distinct sources and columns the distinct targets, each in first
/// appearance order.
inline DenseNetwork to_dense(const EdgeList& el, bool square = true,
                             DuplicatePolicy policy = DuplicatePolicy::Error) {
  DenseNetwork out;
  std::vector<Index> row_of(el.nodes.size(), -1), col_of(el.nodes.size(), -1);
  if (square) {
    out.row_ids = out.col_ids = el.nodes;
    for (std::size_t i = 0; i < el.nodes.size(); ++i) row_of[i] = col_of[i] = static_cast<Index>(i);
  } else {
    for (const auto& e : el.edges) {
      auto& r = row_of[static_cast<std::size_t>(e.source)];
      if (r < 0) {
        r = static_cast<Index>(out.row_ids.size());
        out.row_ids.push_back(el.nodes[static_cast<std::size_t>(e.source)]);
      }
      auto& c = col_of[static_cast<std::size_t>(e.target)];
      if (c < 0) {
        c = static_cast<Index>(out.col_ids.size());
        out.col_ids.push_back(el.nodes[static_cast<std::size_t>(e.target)]);
      }
    }
  }
  out.adjacency = Matrix::Zero(static_cast<Index>(out.row_ids.size()),
                               static_cast<Index>(out.col_ids.size()));
  std::vector<bool> seen(static_cast<std::size_t>(out.adjacency.size()), false);
  for (const auto& e : el.edges) {
    const Index i = row_of[static_cast<std::size_t>(e.source)];
    const Index j = col_of[static_cast<std::size_t>(e.target)];
    const auto flat = static_cast<std::size_t>(i + j * out.adjacency.rows());
    if (seen[flat] && policy == DuplicatePolicy::Error) {
      throw ParseError("duplicate edge " + el.nodes[static_cast<std::size_t>(e.source)] + " -> " +
                       el.nodes[static_cast<std::size_t>(e.target)]);
    }
    seen[flat] = true;
    out.adjacency(i, j) += e.weight;
  }
  return out;
}

/// Dense matrix back to edges (nonzero entries, row-major), ids "1".."n".
inline EdgeList from_dense(const Matrix& a) {
  EdgeList out;
  const Index n = std::max(a.rows(), a.cols());
  for (Index i = 1; i <= n; ++i) out.nodes.push_back(std::to_string(i));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) out.edges.push_back({i, j, a(i, j)});
  return out;
}

struct NetworkSummary {
  Index n_r = 0;
  Index n_c = 0;
  Index edges = 0;           // nonzero entries
  double max_weight = 0.0;   // entrywise, zeros included
  double min_weight = 0.0;
  double positive_percent = 0.0;  // share of nonzero entries that are > 0
};

inline NetworkSummary summarize_network(const Matrix& a) {
  NetworkSummary s;
  s.n_r = a.rows();
  s.n_c = a.cols();
  if (a.size() == 0) return s;
  s.max_weight = a.maxCoeff();
  s.min_weight = a.minCoeff();
  Index positive = 0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != 0.0) ++s.edges;
      if (a(i, j) > 0.0) ++positive;
    }
  }
  if (s.edges > 0) s.positive_percent = 100.0 * static_cast<double>(positive) / static_cast<double>(s.edges);
  return s;
}

inline io::json summary_to_json(const NetworkSummary& s) {
  io::json j{{"n_r", s.n_r},
             {"n_c", s.n_c},
             {"edges", s.edges},
             {"max_weight", s.max_weight},
             {"min_weight", s.min_weight},
             {"positive_percent", s.positive_percent}};
  if (s.n_r == s.n_c) j["n"] = s.n_r;
  return j;
}

}  // namespace bimmdf
