// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "vecscope/error.hpp"
#include "vecscope/workloads.hpp"

namespace vecscope {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Entry {
  int row;
  int col;
  double value;
};

}  // namespace

CsrMatrix<double> read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("matrix market: empty input");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") throw ParseError("matrix market: missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate")
    throw ParseError("matrix market: only 'matrix coordinate' is supported");
  if (field != "real" && field != "integer" && field != "pattern" && field != "double")
    throw ParseError(fmt::format("matrix market: unsupported field '{}'", field));
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    throw ParseError(fmt::format("matrix market: unsupported symmetry '{}'", symmetry));

  std::size_t line_no = 1;
  auto next_data_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      auto pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos || out[pos] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line(line)) throw ParseError("matrix market: missing size line");
  long long rows = 0, cols = 0, declared = 0;
  {
    std::istringstream size(line);
    if (!(size >> rows >> cols >> declared) || rows < 1 || cols < 1 || declared < 0)
      throw ParseError(fmt::format("matrix market: bad size line {}", line_no));
    if (rows > std::numeric_limits<int>::max() || cols > std::numeric_limits<int>::max())
      throw ParseError("matrix market: dimensions exceed 32-bit indices");
  }

  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(declared) * (symmetry == "general" ? 1 : 2));
  for (long long k = 0; k < declared; ++k) {
    if (!next_data_line(line))
      throw ParseError(fmt::format("matrix market: expected {} entries, found {}", declared, k));
    std::istringstream es(line);
    long long r = 0, c = 0;
    double v = 1.0;
    if (!(es >> r >> c) || (field != "pattern" && !(es >> v)))
      throw ParseError(fmt::format("matrix market: malformed entry on line {}", line_no));
    if (r < 1 || r > rows || c < 1 || c > cols)
      throw ParseError(fmt::format("matrix market: index ({}, {}) out of range on line {}", r, c,
                                   line_no));
    entries.push_back({static_cast<int>(r - 1), static_cast<int>(c - 1), v});
    if (symmetry != "general" && r != c)
      entries.push_back({static_cast<int>(c - 1), static_cast<int>(r - 1),
                         symmetry == "skew-symmetric" ? -v : v});
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });

  CsrMatrix<double> m;
  m.n_rows = static_cast<int>(rows);
  m.n_cols = static_cast<int>(cols);
  m.row_ptr.assign(m.n_rows + 1, 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const Entry& e = entries[k];
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
      m.val.back() += e.value;
      continue;
    }
    m.col_ind.push_back(e.col);
    m.val.push_back(e.value);
    ++m.row_ptr[e.row + 1];
  }
  for (int i = 0; i < m.n_rows; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  return m;
}

CsrMatrix<double> read_matrix_market_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open matrix file '{}'", path.string()));
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix<double>& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n_rows << ' ' << m.n_cols << ' ' << m.nnz() << '\n';
  for (int i = 0; i < m.n_rows; ++i)
    for (std::int64_t j = m.row_ptr[i]; j < m.row_ptr[i + 1]; ++j)
      out << fmt::format("{} {} {:.17g}\n", i + 1, m.col_ind[j] + 1, m.val[j]);
}

}  // namespace vecscope
