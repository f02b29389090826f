#pragma once

#include <cstdint>
#include <optional>

#include "betheperm/integer_matrix.hpp"

namespace betheperm {

/// Sum over all permutations, exact. Guarded at n <= 10.
Integer permanent_naive(const IntegerMatrix& a);

/// Inclusion-exclusion with Gray-code subset updates, exact. Guarded at
/// n <= 30. The subset range may be split across workers; partial sums are
/// exact integers, so the result is identical for any worker count.
Integer permanent_ryser(const IntegerMatrix& a, int workers = 1);

/// Ryser with a zero-row/zero-column fast path; the default entry point.
Integer permanent(const IntegerMatrix& a, int workers = 1);

/// Repeated permanents of equal-sized 0/1 matrices without per-call
/// allocation. Row-major entries, values 0 or 1.
class Ryser01 {
 public:
  explicit Ryser01(int n);
  Integer compute(const std::uint8_t* entries);

 private:
  std::int64_t run_range_small(std::uint64_t lo, std::uint64_t hi);
  int n_;
  bool small_;  // accumulation provably fits in int64
  std::vector<std::uint8_t> colrows_;  // row indices of ones, per column
  std::vector<std::uint8_t> colcnt_;
  std::vector<std::int16_t> rowsum_;
};

/// Permanent of a small non-negative matrix given as a row-major buffer.
/// Uses int64 arithmetic when the inclusion-exclusion accumulation provably
/// fits, exact big integers otherwise.
Integer permanent_int64(int n, const std::int64_t* entries);

struct UnitRowMerge {
  bool zero_permanent = false;           // row was all zero
  std::optional<IntegerMatrix> matrix;   // absent iff zero_permanent
};

/// Collapses a 0/1 row of weight 1 or 2: the row is deleted and its
/// support columns are replaced by their single column sum (weight 1
/// deletes the column). The permanent is unchanged. A row of weight 3 or
/// more has no square collapse of this kind and is rejected.
UnitRowMerge merge_columns_by_unit_row(const IntegerMatrix& a, int row);

/// perm(a+b) as the sum over column subsets taken from a vs b. Guarded at
/// n <= 12; agrees with permanent_ryser(a+b).
Integer perm_subset_expansion(const IntegerMatrix& a, const IntegerMatrix& b,
                              int workers = 1);

struct BlockReduction {
  IntegerMatrix matrix;      // same permanent as the input expansion
  bool fully_reduced = false;  // collapsed all the way to one block
  int collapses = 0;
};

/// Repeatedly collapses block rows/columns that hold one or two
/// permutation blocks and zeros elsewhere. Falls back to the (possibly
/// partially reduced) dense expansion when the pattern runs out.
BlockReduction reduce_block_identity(const BlockMatrix& blocks);

struct BlockPermanentResult {
  IntegerMatrix matrix;
  bool commuting = true;  // false: product order (by row index) mattered
};

/// Permanent over the matrix ring: sum over block permutations of the
/// products of cells, factors ordered by block row index.
BlockPermanentResult block_matrix_permanent(const BlockMatrix& blocks);

}  // namespace betheperm
