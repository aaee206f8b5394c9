#pragma once

// Text formats: dense CSV matrices, 1-indexed TSV edge lists, and the JSON
// form of a ModelSpec.

#include "bimmdf/core.hpp"
#include "bimmdf/distribution.hpp"
#include "bimmdf/model.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace bimmdf::io {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Splits on runs of spaces/tabs.
inline std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense CSV
// ---------------------------------------------------------------------------

inline void write_csv(std::ostream& os, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

inline Matrix read_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    for (auto field : split(t, ',')) {
      auto v = parse_double(field);
      if (!v) {
        throw ParseError("csv line " + std::to_string(line_no) + ": cannot parse '" +
                         std::string(trim(field)) + "' as a number");
      }
      row.push_back(*v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " fields, got " +
                       std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

// ---------------------------------------------------------------------------
// 1-indexed "row<TAB>col<TAB>weight" edge lists of a dense matrix
// ---------------------------------------------------------------------------

inline void write_edge_tsv(std::ostream& os, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      os << (i + 1) << '\t' << (j + 1) << '\t' << format_double(m(i, j)) << '\n';
    }
  }
}

/// Reads the TSV form back. Without explicit dimensions the shape is the
/// largest row/column index seen.
inline Matrix read_edge_tsv(std::istream& is, std::optional<Index> rows = std::nullopt,
                            std::optional<Index> cols = std::nullopt) {
  struct Entry { Index i, j; double w; };
  std::vector<Entry> entries;
  Index max_i = 0, max_j = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == '%') continue;
    const auto fields = split_whitespace(t);
    if (fields.size() != 3) {
      throw ParseError("edge tsv line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const auto i = parse_double(fields[0]);
    const auto j = parse_double(fields[1]);
    const auto w = parse_double(fields[2]);
    if (!i || !j || !w || *i < 1 || *j < 1 || std::floor(*i) != *i || std::floor(*j) != *j) {
      throw ParseError("edge tsv line " + std::to_string(line_no) + ": malformed entry");
    }
    const auto ii = static_cast<Index>(*i), jj = static_cast<Index>(*j);
    max_i = std::max(max_i, ii);
    max_j = std::max(max_j, jj);
    entries.push_back({ii - 1, jj - 1, *w});
  }
  const Index r = rows.value_or(max_i);
  const Index c = cols.value_or(max_j);
  if (max_i > r || max_j > c) throw ParseError("edge tsv: index exceeds declared dimensions");
  Matrix m = Matrix::Zero(r, c);
  for (const auto& e : entries) m(e.i, e.j) += e.w;
  return m;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "' for reading");
  return f;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  return f;
}

inline Matrix load_csv(const std::string& path) {
  auto f = open_in(path);
  return read_csv(f);
}

inline void save_csv(const std::string& path, const Matrix& m) {
  auto f = open_out(path);
  write_csv(f, m);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, std::string_view what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array of rows");
  const Index r = static_cast<Index>(j.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(j.at(0).size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != c)
      throw ParseError(std::string(what) + ": ragged rows");
    for (Index k = 0; k < c; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

inline json distribution_to_json(const EdgeDistribution& d) {
  json j{{"name", std::string(to_string(d.kind))}};
  if (d.trials) j["m"] = *d.trials;
  if (d.variance) j["sigma2"] = *d.variance;
  if (d.scale) j["beta"] = *d.scale;
  return j;
}

inline EdgeDistribution distribution_from_json(const json& j) {
  try {
    auto d = EdgeDistribution::of(parse_distribution_kind(j.at("name").get<std::string>()));
    if (j.contains("m")) d.trials = j.at("m").get<int>();
    if (j.contains("sigma2")) d.variance = j.at("sigma2").get<double>();
    if (j.contains("beta")) d.scale = j.at("beta").get<double>();
    d.check();
    return d;
  } catch (const json::exception& e) {
    throw ParseError(std::string("distribution json: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("distribution json: ") + e.what());
  }
}

inline json spec_to_json(const ModelSpec& spec) {
  return json{{"n_r", spec.n_r()},
              {"n_c", spec.n_c()},
              {"K", spec.K()},
              {"rho", spec.rho},
              {"P", matrix_to_json(spec.P.entries())},
              {"sign_class", std::string(to_string(spec.P.sign_class()))},
              {"Pi_r", matrix_to_json(spec.Pi_r.weights())},
              {"Pi_c", matrix_to_json(spec.Pi_c.weights())},
              {"distribution", distribution_to_json(spec.dist)}};
}

/// Parses and validates a ModelSpec document. The sign class is inferred
/// from P when absent.
inline ModelSpec spec_from_json(const json& j) {
  ModelSpec spec;
  try {
    Matrix p = matrix_from_json(j.at("P"), "P");
    spec.P = j.contains("sign_class")
                 ? BlockMatrix(std::move(p), parse_sign_class(j.at("sign_class").get<std::string>()))
                 : BlockMatrix::with_inferred_class(std::move(p));
    spec.rho = j.at("rho").get<double>();
    spec.Pi_r = MembershipMatrix(matrix_from_json(j.at("Pi_r"), "Pi_r"));
    spec.Pi_c = MembershipMatrix(matrix_from_json(j.at("Pi_c"), "Pi_c"));
    spec.dist = distribution_from_json(j.at("distribution"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("model spec json: ") + e.what());
  }
  auto check_count = [&](const char* key, Index actual) {
    if (j.contains(key) && j.at(key).get<Index>() != actual) {
      throw ParseError(std::string("model spec json: '") + key + "' disagrees with matrix shapes");
    }
  };
  check_count("n_r", spec.n_r());
  check_count("n_c", spec.n_c());
  check_count("K", spec.K());
  const auto report = validate_model(spec);
  if (!report.ok()) throw InvalidSpecError("model spec json: " + report.summary());
  return spec;
}

}  // namespace bimmdf::io
