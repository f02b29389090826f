#include "betheperm/binary_matrix.hpp"

#include <algorithm>
#include <sstream>

namespace betheperm {

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t token)
    : std::runtime_error(message + " (line " + std::to_string(line) +
                         ", token " + std::to_string(token) + ")"),
      line_(line),
      token_(token) {}

IndexSet::IndexSet(std::initializer_list<int> indices)
    : IndexSet(std::vector<int>(indices)) {}

IndexSet::IndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 1)
      throw std::invalid_argument("IndexSet: indices are 1-based, got " +
                                  std::to_string(indices_[k]));
    if (k > 0 && indices_[k] == indices_[k - 1])
      throw std::invalid_argument("IndexSet: duplicate index " +
                                  std::to_string(indices_[k]));
  }
}

IndexSet IndexSet::full(int n) {
  std::vector<int> v(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  return IndexSet(std::move(v));
}

bool IndexSet::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

int IndexSet::at(int k) const {
  if (k < 1 || k > size()) throw std::out_of_range("IndexSet::at");
  return indices_[static_cast<std::size_t>(k - 1)];
}

IndexSet IndexSet::minus(int i) const {
  std::vector<int> v;
  v.reserve(indices_.size());
  for (int x : indices_)
    if (x != i) v.push_back(x);
  return IndexSet(std::move(v));
}

IndexSet IndexSet::minus(const IndexSet& other) const {
  std::vector<int> v;
  v.reserve(indices_.size());
  for (int x : indices_)
    if (!other.contains(x)) v.push_back(x);
  return IndexSet(std::move(v));
}

std::string IndexSet::to_string() const {
  std::string s = "{";
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k > 0) s += ",";
    s += std::to_string(indices_[k]);
  }
  return s + "}";
}

BinaryMatrix::BinaryMatrix(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
               0) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("BinaryMatrix: dimensions must be positive");
}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("BinaryMatrix: dimensions must be positive");
  BinaryMatrix m(static_cast<int>(rows.size()),
                 static_cast<int>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw std::invalid_argument("BinaryMatrix: ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.set(static_cast<int>(i) + 1, static_cast<int>(j) + 1, rows[i][j]);
  }
  return m;
}

int BinaryMatrix::at(int i, int j) const {
  if (i < 1 || i > rows_ || j < 1 || j > cols_)
    throw std::out_of_range("BinaryMatrix::at(" + std::to_string(i) + "," +
                            std::to_string(j) + ") on " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
  return entries_[static_cast<std::size_t>(i - 1) *
                      static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(j - 1)];
}

void BinaryMatrix::set(int i, int j, int value) {
  if (i < 1 || i > rows_ || j < 1 || j > cols_)
    throw std::out_of_range("BinaryMatrix::set out of range");
  if (value != 0 && value != 1)
    throw std::invalid_argument("BinaryMatrix entries must be 0 or 1");
  entries_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j - 1)] = static_cast<std::uint8_t>(value);
}

int ExponentMatrix::at(int i, int j) const {
  if (i < 1 || i > rows || j < 1 || j > cols)
    throw std::out_of_range("ExponentMatrix::at out of range");
  return exps[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols) +
              static_cast<std::size_t>(j - 1)];
}

namespace {

// Splits into lines, drops '#' comments and blank lines, tokenizes.
std::vector<std::pair<std::size_t, std::vector<std::string>>> tokenize_lines(
    const std::string& text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    out.emplace_back(lineno, std::move(tokens));
  }
  return out;
}

int parse_int_token(const std::string& tok, std::size_t line, std::size_t pos) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid integer '" + tok + "'", line, pos);
  }
}

}  // namespace

BinaryMatrix parse_dense(const std::string& text) {
  const auto lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError("empty input", 1, 1);
  const auto& [hline, header] = lines.front();
  if (header.size() != 2)
    throw ParseError("expected header 'rows cols'", hline, header.size());
  const int m = parse_int_token(header[0], hline, 1);
  const int n = parse_int_token(header[1], hline, 2);
  if (m < 1 || n < 1) throw ParseError("dimensions must be positive", hline, 1);
  if (lines.size() != static_cast<std::size_t>(m) + 1)
    throw ParseError("expected " + std::to_string(m) + " matrix rows, found " +
                         std::to_string(lines.size() - 1),
                     lines.back().first, 1);
  BinaryMatrix mat(m, n);
  for (int i = 1; i <= m; ++i) {
    const auto& [lineno, tokens] = lines[static_cast<std::size_t>(i)];
    if (tokens.size() != static_cast<std::size_t>(n))
      throw ParseError("row " + std::to_string(i) + " has " +
                           std::to_string(tokens.size()) + " entries, expected " +
                           std::to_string(n),
                       lineno, tokens.size());
    for (int j = 1; j <= n; ++j) {
      const auto& tok = tokens[static_cast<std::size_t>(j - 1)];
      const int v =
          parse_int_token(tok, lineno, static_cast<std::size_t>(j));
      if (v != 0 && v != 1)
        throw ParseError("entry must be 0 or 1, got '" + tok + "' at row " +
                             std::to_string(i) + ", token " + std::to_string(j),
                         lineno, static_cast<std::size_t>(j));
      mat.set(i, j, v);
    }
  }
  return mat;
}

ExponentMatrix parse_exponents(const std::string& text) {
  const auto lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError("empty input", 1, 1);
  const auto& [hline, header] = lines.front();
  if (header.size() != 3)
    throw ParseError("expected header 'rows cols M'", hline, header.size());
  ExponentMatrix e;
  e.rows = parse_int_token(header[0], hline, 1);
  e.cols = parse_int_token(header[1], hline, 2);
  e.lift_size = parse_int_token(header[2], hline, 3);
  if (e.rows < 1 || e.cols < 1 || e.lift_size < 1)
    throw ParseError("dimensions and M must be positive", hline, 1);
  if (lines.size() != static_cast<std::size_t>(e.rows) + 1)
    throw ParseError("expected " + std::to_string(e.rows) + " rows",
                     lines.back().first, 1);
  e.exps.reserve(static_cast<std::size_t>(e.rows) *
                 static_cast<std::size_t>(e.cols));
  for (int i = 1; i <= e.rows; ++i) {
    const auto& [lineno, tokens] = lines[static_cast<std::size_t>(i)];
    if (tokens.size() != static_cast<std::size_t>(e.cols))
      throw ParseError("row " + std::to_string(i) + " has wrong width", lineno,
                       tokens.size());
    for (int j = 1; j <= e.cols; ++j) {
      const int v = parse_int_token(tokens[static_cast<std::size_t>(j - 1)],
                                    lineno, static_cast<std::size_t>(j));
      if (v < -1 || v >= e.lift_size)
        throw ParseError("exponent out of range [-1," +
                             std::to_string(e.lift_size - 1) + "]",
                         lineno, static_cast<std::size_t>(j));
      e.exps.push_back(v);
    }
  }
  return e;
}

std::string serialize_dense(const BinaryMatrix& m) {
  std::string out =
      std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (int i = 1; i <= m.rows(); ++i) {
    for (int j = 1; j <= m.cols(); ++j) {
      if (j > 1) out += " ";
      out += std::to_string(m.at(i, j));
    }
    out += "\n";
  }
  return out;
}

BinaryMatrix expand_exponents(const ExponentMatrix& e) {
  const int M = e.lift_size;
  BinaryMatrix out(e.rows * M, e.cols * M);
  for (int i = 1; i <= e.rows; ++i) {
    for (int j = 1; j <= e.cols; ++j) {
      const int s = e.at(i, j);
      if (s < 0) continue;
      for (int r = 1; r <= M; ++r) {
        const int c = (r - 1 + s) % M + 1;
        out.set((i - 1) * M + r, (j - 1) * M + c, 1);
      }
    }
  }
  return out;
}

BinaryMatrix submatrix(const BinaryMatrix& a, const IndexSet& row_set,
                       const IndexSet& col_set) {
  if (row_set.empty() || col_set.empty())
    throw std::invalid_argument("submatrix: empty index set");
  if (row_set.values().back() > a.rows() || col_set.values().back() > a.cols())
    throw std::out_of_range("submatrix: index out of range");
  BinaryMatrix out(row_set.size(), col_set.size());
  for (int i = 1; i <= row_set.size(); ++i)
    for (int j = 1; j <= col_set.size(); ++j)
      out.set(i, j, a.at(row_set.at(i), col_set.at(j)));
  return out;
}

BinaryMatrix columns(const BinaryMatrix& a, const IndexSet& col_set) {
  return submatrix(a, IndexSet::full(a.rows()), col_set);
}

IndexSet row_support(const BinaryMatrix& a, int i) {
  if (i < 1 || i > a.rows()) throw std::out_of_range("row_support: bad row");
  std::vector<int> v;
  for (int j = 1; j <= a.cols(); ++j)
    if (a.at(i, j) != 0) v.push_back(j);
  return IndexSet(std::move(v));
}

BinaryMatrix transpose(const BinaryMatrix& a) {
  BinaryMatrix out(a.cols(), a.rows());
  for (int i = 1; i <= a.rows(); ++i)
    for (int j = 1; j <= a.cols(); ++j) out.set(j, i, a.at(i, j));
  return out;
}

}  // namespace betheperm
