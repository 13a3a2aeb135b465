#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "slq/errors.hpp"
#include "slq/linop.hpp"

namespace slq {

namespace detail {

inline std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline double parse_mm_value(const std::string& tok, long line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("matrix market: non-numeric value '" + tok + "'", line);
  }
  if (pos != tok.size())
    throw ParseError("matrix market: non-numeric value '" + tok + "'", line);
  return v;
}

inline long parse_mm_index(const std::string& tok, long line) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("matrix market: non-integer index '" + tok + "'", line);
  }
  if (pos != tok.size())
    throw ParseError("matrix market: non-integer index '" + tok + "'", line);
  return v;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

// Reads `matrix coordinate real/integer/pattern general/symmetric` and
// `matrix array real general`. Indices are 1-based per the format standard;
// `pattern` entries load as 1.0; `symmetric` storage is expanded to full.
inline SparseCsr read_matrix_market(std::istream& in) {
  long line_no = 0;
  std::string line;

  if (!std::getline(in, line)) throw ParseError("matrix market: empty file", 1);
  ++line_no;
  auto header = detail::split_ws(detail::lowercase(line));
  if (header.size() < 4 || header[0] != "%%matrixmarket" || header[1] != "matrix")
    throw ParseError("matrix market: malformed header banner", line_no);
  const std::string layout = header[2];
  const std::string field = header[3];
  const std::string symmetry = header.size() > 4 ? header[4] : "general";
  if (layout != "coordinate" && layout != "array")
    throw ParseError("matrix market: unsupported layout '" + layout + "'", line_no);
  if (field != "real" && field != "integer" && field != "pattern")
    throw ParseError("matrix market: unsupported field '" + field + "'", line_no);
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError("matrix market: unsupported symmetry '" + symmetry + "'", line_no);
  if (layout == "array" && (field != "real" || symmetry != "general"))
    throw ParseError("matrix market: array layout supports only real general", line_no);

  // Skip comments and blank lines up to the size line.
  std::vector<std::string> size_tok;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    size_tok = detail::split_ws(line);
    if (!size_tok.empty()) break;
  }
  if (size_tok.empty())
    throw ParseError("matrix market: missing size line", line_no);

  if (layout == "coordinate") {
    if (size_tok.size() != 3)
      throw ParseError("matrix market: coordinate size line needs 3 fields", line_no);
    const long nr = detail::parse_mm_index(size_tok[0], line_no);
    const long nc = detail::parse_mm_index(size_tok[1], line_no);
    const long nnz = detail::parse_mm_index(size_tok[2], line_no);
    if (nr < 1 || nc < 1 || nnz < 0)
      throw ParseError("matrix market: invalid dimensions", line_no);

    std::vector<std::tuple<std::size_t, std::size_t, double>> t;
    t.reserve(static_cast<std::size_t>(nnz));
    long seen = 0;
    while (seen < nnz) {
      if (!std::getline(in, line))
        throw ParseError("matrix market: expected " + std::to_string(nnz) +
                             " entries, found " + std::to_string(seen),
                         line_no);
      ++line_no;
      if (!line.empty() && line[0] == '%') continue;
      auto tok = detail::split_ws(line);
      if (tok.empty()) continue;
      const std::size_t want = field == "pattern" ? 2 : 3;
      if (tok.size() != want)
        throw ParseError("matrix market: entry needs " + std::to_string(want) +
                             " fields",
                         line_no);
      const long i = detail::parse_mm_index(tok[0], line_no);
      const long j = detail::parse_mm_index(tok[1], line_no);
      if (i < 1 || i > nr || j < 1 || j > nc)
        throw ParseError("matrix market: index out of bounds", line_no);
      const double v =
          field == "pattern" ? 1.0 : detail::parse_mm_value(tok[2], line_no);
      const auto ui = static_cast<std::size_t>(i - 1);
      const auto uj = static_cast<std::size_t>(j - 1);
      t.emplace_back(ui, uj, v);
      if (symmetry == "symmetric" && ui != uj) t.emplace_back(uj, ui, v);
      ++seen;
    }
    return SparseCsr::from_triplets(static_cast<std::size_t>(nr),
                                    static_cast<std::size_t>(nc), std::move(t));
  }

  // array real general: column-major dense listing.
  if (size_tok.size() != 2)
    throw ParseError("matrix market: array size line needs 2 fields", line_no);
  const long nr = detail::parse_mm_index(size_tok[0], line_no);
  const long nc = detail::parse_mm_index(size_tok[1], line_no);
  if (nr < 1 || nc < 1)
    throw ParseError("matrix market: invalid dimensions", line_no);
  std::vector<std::tuple<std::size_t, std::size_t, double>> t;
  long need = nr * nc, got = 0;
  while (got < need) {
    if (!std::getline(in, line))
      throw ParseError("matrix market: expected " + std::to_string(need) +
                           " array values, found " + std::to_string(got),
                       line_no);
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    for (const auto& tok : detail::split_ws(line)) {
      if (got >= need)
        throw ParseError("matrix market: surplus array values", line_no);
      const double v = detail::parse_mm_value(tok, line_no);
      const auto col = static_cast<std::size_t>(got / nr);
      const auto row = static_cast<std::size_t>(got % nr);
      if (v != 0.0) t.emplace_back(row, col, v);
      ++got;
    }
  }
  return SparseCsr::from_triplets(static_cast<std::size_t>(nr),
                                  static_cast<std::size_t>(nc), std::move(t));
}

inline SparseCsr read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_matrix_market(in);
}

// Coordinate real general writer; values keep 17 significant digits so a
// read-back reproduces them bit-for-bit.
inline void write_matrix_market(std::ostream& out, const SparseCsr& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", m.values()[k]);
      out << (i + 1) << " " << (m.col_idx()[k] + 1) << " " << buf << "\n";
    }
}

inline void write_matrix_market(const std::string& path, const SparseCsr& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_matrix_market(out, m);
}

}  // namespace slq
