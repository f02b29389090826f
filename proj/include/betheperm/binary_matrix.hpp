#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace betheperm {

/// Thrown on malformed matrix text. Line and token positions are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t token);
  std::size_t line() const { return line_; }
  std::size_t token() const { return token_; }

 private:
  std::size_t line_;
  std::size_t token_;
};

/// Strictly increasing 1-based indices into [n]. All indexing in this
/// library is 1-based; the API never exposes 0-based positions.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> indices);
  explicit IndexSet(std::vector<int> indices);

  static IndexSet full(int n);

  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  bool contains(int i) const;
  int at(int k) const;  // k-th smallest, 1-based

  IndexSet minus(int i) const;
  IndexSet minus(const IndexSet& other) const;

  const std::vector<int>& values() const { return indices_; }
  std::vector<int>::const_iterator begin() const { return indices_.begin(); }
  std::vector<int>::const_iterator end() const { return indices_.end(); }

  bool operator==(const IndexSet& other) const = default;
  std::string to_string() const;  // "{1,2,5}"

 private:
  std::vector<int> indices_;
};

/// Dense 0/1 matrix. Entries are addressed as at(i, j) with 1 <= i <= rows,
/// 1 <= j <= cols.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(int rows, int cols);
  static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int at(int i, int j) const;
  void set(int i, int j, int value);

  bool operator==(const BinaryMatrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> entries_;
};

/// Exponent description of a block-circulant matrix: entry -1 is an
/// all-zero block, entry s in [0, M-1] the s-step cyclic shift of I.
struct ExponentMatrix {
  int rows = 0;
  int cols = 0;
  int lift_size = 1;
  std::vector<int> exps;  // row-major

  int at(int i, int j) const;
};

// Text formats. Dense: header "m n", then m rows of n 0/1 tokens.
// Exponents: header "m n M", then m rows of n integers in [-1, M-1].
// Lines starting with '#' are comments in both.
BinaryMatrix parse_dense(const std::string& text);
ExponentMatrix parse_exponents(const std::string& text);
std::string serialize_dense(const BinaryMatrix& m);

/// Expands to the (rows*M) x (cols*M) binary matrix. Shift s sends column
/// j of I to column ((j-1+s) mod M)+1, so block row r has its one at
/// column ((r-1+s) mod M)+1.
BinaryMatrix expand_exponents(const ExponentMatrix& e);

BinaryMatrix submatrix(const BinaryMatrix& a, const IndexSet& row_set,
                       const IndexSet& col_set);
BinaryMatrix columns(const BinaryMatrix& a, const IndexSet& col_set);
IndexSet row_support(const BinaryMatrix& a, int i);
BinaryMatrix transpose(const BinaryMatrix& a);

}  // namespace betheperm
