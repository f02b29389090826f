#pragma once

#include <optional>
#include <string>
#include <vector>

#include "betheperm/arith.hpp"
#include "betheperm/binary_matrix.hpp"

namespace betheperm {

/// Dense matrix of non-negative big integers, 1-based access.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(int rows, int cols);
  static IntegerMatrix from_rows(const std::vector<std::vector<Integer>>& rows);
  static IntegerMatrix from_binary(const BinaryMatrix& b);
  static IntegerMatrix identity(int n);
  /// Cyclic shift of the identity: row r has its one at ((r-1+s) mod n)+1.
  static IntegerMatrix circulant_shift(int n, int s);
  static IntegerMatrix from_permutation(const std::vector<int>& images);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_ && rows_ > 0; }
  const Integer& at(int i, int j) const;
  void set(int i, int j, Integer value);

  bool is_zero() const;
  bool is_permutation() const;

  bool operator==(const IntegerMatrix& other) const = default;
  std::string to_string() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Integer> entries_;
};

IntegerMatrix add(const IntegerMatrix& a, const IntegerMatrix& b);
IntegerMatrix multiply(const IntegerMatrix& a, const IntegerMatrix& b);
IntegerMatrix transpose(const IntegerMatrix& a);
IntegerMatrix scale(const IntegerMatrix& a, const Integer& factor);

/// Block matrix with square cells of a common size; an absent cell is an
/// all-zero block.
class BlockMatrix {
 public:
  BlockMatrix(int block_rows, int block_cols, int block_size);

  int block_rows() const { return block_rows_; }
  int block_cols() const { return block_cols_; }
  int block_size() const { return block_size_; }

  const std::optional<IntegerMatrix>& cell(int i, int j) const;
  void set_cell(int i, int j, IntegerMatrix value);
  void clear_cell(int i, int j);

  IntegerMatrix expand() const;

  /// Block restriction of a binary matrix: block (i,j) is the identity
  /// when b(i,j) = 1, zero otherwise.
  static BlockMatrix identity_lift(const BinaryMatrix& b, int block_size);

 private:
  std::size_t index(int i, int j) const;
  int block_rows_;
  int block_cols_;
  int block_size_;
  std::vector<std::optional<IntegerMatrix>> cells_;
};

}  // namespace betheperm
