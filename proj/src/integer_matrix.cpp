#include "betheperm/integer_matrix.hpp"

#include <stdexcept>

namespace betheperm {

IntegerMatrix::IntegerMatrix(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("IntegerMatrix: dimensions must be positive");
}

IntegerMatrix IntegerMatrix::from_rows(
    const std::vector<std::vector<Integer>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw std::invalid_argument("IntegerMatrix: dimensions must be positive");
  IntegerMatrix m(static_cast<int>(rows.size()),
                  static_cast<int>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw std::invalid_argument("IntegerMatrix: ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.set(static_cast<int>(i) + 1, static_cast<int>(j) + 1, rows[i][j]);
  }
  return m;
}

IntegerMatrix IntegerMatrix::from_binary(const BinaryMatrix& b) {
  IntegerMatrix m(b.rows(), b.cols());
  for (int i = 1; i <= b.rows(); ++i)
    for (int j = 1; j <= b.cols(); ++j) m.set(i, j, b.at(i, j));
  return m;
}

IntegerMatrix IntegerMatrix::identity(int n) { return circulant_shift(n, 0); }

IntegerMatrix IntegerMatrix::circulant_shift(int n, int s) {
  if (n < 1) throw std::invalid_argument("circulant_shift: bad size");
  if (s < 0 || s >= n) throw std::invalid_argument("circulant_shift: bad shift");
  IntegerMatrix m(n, n);
  for (int r = 1; r <= n; ++r) m.set(r, (r - 1 + s) % n + 1, 1);
  return m;
}

IntegerMatrix IntegerMatrix::from_permutation(const std::vector<int>& images) {
  const int n = static_cast<int>(images.size());
  IntegerMatrix m(n, n);
  for (int r = 1; r <= n; ++r) m.set(r, images[static_cast<std::size_t>(r - 1)], 1);
  return m;
}

const Integer& IntegerMatrix::at(int i, int j) const {
  if (i < 1 || i > rows_ || j < 1 || j > cols_)
    throw std::out_of_range("IntegerMatrix::at out of range");
  return entries_[static_cast<std::size_t>(i - 1) *
                      static_cast<std::size_t>(cols_) +
                  static_cast<std::size_t>(j - 1)];
}

void IntegerMatrix::set(int i, int j, Integer value) {
  if (i < 1 || i > rows_ || j < 1 || j > cols_)
    throw std::out_of_range("IntegerMatrix::set out of range");
  if (value < 0)
    throw std::invalid_argument("IntegerMatrix entries must be non-negative");
  entries_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j - 1)] = std::move(value);
}

bool IntegerMatrix::is_zero() const {
  for (const auto& e : entries_)
    if (e != 0) return false;
  return true;
}

bool IntegerMatrix::is_permutation() const {
  if (!square()) return false;
  std::vector<bool> col_used(static_cast<std::size_t>(cols_), false);
  for (int i = 1; i <= rows_; ++i) {
    int ones = 0;
    int where = 0;
    for (int j = 1; j <= cols_; ++j) {
      const Integer& v = at(i, j);
      if (v == 1) {
        ++ones;
        where = j;
      } else if (v != 0) {
        return false;
      }
    }
    if (ones != 1 || col_used[static_cast<std::size_t>(where - 1)]) return false;
    col_used[static_cast<std::size_t>(where - 1)] = true;
  }
  return true;
}

std::string IntegerMatrix::to_string() const {
  std::string s;
  for (int i = 1; i <= rows_; ++i) {
    s += "[";
    for (int j = 1; j <= cols_; ++j) {
      if (j > 1) s += " ";
      s += at(i, j).str();
    }
    s += "]";
    if (i < rows_) s += "\n";
  }
  return s;
}

IntegerMatrix add(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("add: shape mismatch");
  IntegerMatrix out(a.rows(), a.cols());
  for (int i = 1; i <= a.rows(); ++i)
    for (int j = 1; j <= a.cols(); ++j) out.set(i, j, a.at(i, j) + b.at(i, j));
  return out;
}

IntegerMatrix multiply(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  IntegerMatrix out(a.rows(), b.cols());
  for (int i = 1; i <= a.rows(); ++i) {
    for (int k = 1; k <= a.cols(); ++k) {
      const Integer& aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 1; j <= b.cols(); ++j) {
        const Integer& bkj = b.at(k, j);
        if (bkj == 0) continue;
        out.set(i, j, out.at(i, j) + aik * bkj);
      }
    }
  }
  return out;
}

IntegerMatrix transpose(const IntegerMatrix& a) {
  IntegerMatrix out(a.cols(), a.rows());
  for (int i = 1; i <= a.rows(); ++i)
    for (int j = 1; j <= a.cols(); ++j) out.set(j, i, a.at(i, j));
  return out;
}

IntegerMatrix scale(const IntegerMatrix& a, const Integer& factor) {
  IntegerMatrix out(a.rows(), a.cols());
  for (int i = 1; i <= a.rows(); ++i)
    for (int j = 1; j <= a.cols(); ++j) out.set(i, j, a.at(i, j) * factor);
  return out;
}

BlockMatrix::BlockMatrix(int block_rows, int block_cols, int block_size)
    : block_rows_(block_rows),
      block_cols_(block_cols),
      block_size_(block_size),
      cells_(static_cast<std::size_t>(block_rows) *
             static_cast<std::size_t>(block_cols)) {
  if (block_rows < 1 || block_cols < 1 || block_size < 1)
    throw std::invalid_argument("BlockMatrix: dimensions must be positive");
}

std::size_t BlockMatrix::index(int i, int j) const {
  if (i < 1 || i > block_rows_ || j < 1 || j > block_cols_)
    throw std::out_of_range("BlockMatrix: cell out of range");
  return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(block_cols_) +
         static_cast<std::size_t>(j - 1);
}

const std::optional<IntegerMatrix>& BlockMatrix::cell(int i, int j) const {
  return cells_[index(i, j)];
}

void BlockMatrix::set_cell(int i, int j, IntegerMatrix value) {
  if (value.rows() != block_size_ || value.cols() != block_size_)
    throw std::invalid_argument("BlockMatrix: cell size mismatch");
  cells_[index(i, j)] = std::move(value);
}

void BlockMatrix::clear_cell(int i, int j) { cells_[index(i, j)].reset(); }

IntegerMatrix BlockMatrix::expand() const {
  const int M = block_size_;
  IntegerMatrix out(block_rows_ * M, block_cols_ * M);
  for (int i = 1; i <= block_rows_; ++i) {
    for (int j = 1; j <= block_cols_; ++j) {
      const auto& c = cell(i, j);
      if (!c) continue;
      for (int r = 1; r <= M; ++r)
        for (int s = 1; s <= M; ++s)
          out.set((i - 1) * M + r, (j - 1) * M + s, c->at(r, s));
    }
  }
  return out;
}

BlockMatrix BlockMatrix::identity_lift(const BinaryMatrix& b, int block_size) {
  BlockMatrix out(b.rows(), b.cols(), block_size);
  const IntegerMatrix id = IntegerMatrix::identity(block_size);
  for (int i = 1; i <= b.rows(); ++i)
    for (int j = 1; j <= b.cols(); ++j)
      if (b.at(i, j) != 0) out.set_cell(i, j, id);
  return out;
}

}  // namespace betheperm
