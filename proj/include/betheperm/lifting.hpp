#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "betheperm/binary_matrix.hpp"
#include "betheperm/integer_matrix.hpp"

namespace betheperm {

/// Permutation of [M] as 1-based images: images[r-1] is where r goes.
using Permutation = std::vector<int>;

Permutation identity_permutation(int M);
/// Lexicographic unranking, rank in [0, M!).
Permutation unrank_permutation(int M, std::uint64_t rank);
std::uint64_t rank_permutation(const Permutation& p);

struct EnumerationBudget {
  std::uint64_t max_evals = 100'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(Integer required, std::uint64_t budget);
  const Integer& required() const { return required_; }

 private:
  Integer required_;
};

/// One permutation per matrix cell.
struct LiftingAssignment {
  int rows = 0;
  int cols = 0;
  int lift_size = 1;
  std::vector<Permutation> cells;  // row-major

  const Permutation& cell(int i, int j) const;
  Permutation& cell(int i, int j);
};

/// Streams all (M!)^(rows*cols) assignments in lexicographic order of the
/// row-major tuple of per-cell permutation ranks.
class LiftingEnumerator {
 public:
  LiftingEnumerator(int rows, int cols, int M,
                    const EnumerationBudget& budget = {});
  const Integer& total() const { return total_; }
  /// Fills `out`; returns false once the stream is exhausted.
  bool next(LiftingAssignment& out);

 private:
  LiftingAssignment state_;
  Integer total_;
  bool done_ = false;
  bool first_ = true;
};

/// Block expansion with block (i,j) = theta(i,j) * P(i,j).
IntegerMatrix lift(const BinaryMatrix& theta, const LiftingAssignment& p);

struct AverageResult {
  Integer sum;     // sum of lifted permanents over the enumerated family
  Integer count;   // (M!)^(cells enumerated)
  Rational mean;   // sum / count, exact
  double root;     // mean^(1/M)
  int degree = 1;  // M
};

/// Exact average of perm over all liftings of a square theta, enumerating
/// one permutation per support cell (zero cells contribute a fixed zero
/// block, so they are not enumerated; the average is unchanged).
AverageResult degree_M_bethe_perm(const BinaryMatrix& theta, int M,
                                  const EnumerationBudget& budget = {},
                                  int workers = 1);

/// Same average, but with the first block row and first block column
/// pinned to identity; requires an all-one first row and first column.
/// Enumerates only the remaining support cells.
AverageResult degree_M_bethe_perm_canonical(const BinaryMatrix& theta, int M,
                                            const EnumerationBudget& budget = {},
                                            int workers = 1);

/// Same average with a spanning forest of the support graph pinned to
/// identity, the cheapest exact reduction of this kind. Works for any
/// square support pattern.
AverageResult degree_M_bethe_perm_reduced(const BinaryMatrix& theta, int M,
                                          const EnumerationBudget& budget = {},
                                          int workers = 1);

/// Average lifted permanent of the m x m all-ones matrix (the mean, not
/// its M-th root).
Rational q(int m, int M, const EnumerationBudget& budget = {}, int workers = 1);

/// Same for the all-ones matrix with a single zero in the top-right corner.
Rational t(int m, int M, const EnumerationBudget& budget = {}, int workers = 1);

/// m = 3 specializations computed by reduced M x M sums:
///   t3(M)    = sum over P,Q,R of perm(I+P+Q+R) / (M!)^3
///   that3(M) = sum over P,Q   of perm(I+P+Q)   / (M!)^2
/// where the second corresponds to the 3 x 3 pattern with zeros at (1,3)
/// and (2,2).
Rational t3(int M, const EnumerationBudget& budget = {}, int workers = 1);
Rational that3(int M, const EnumerationBudget& budget = {}, int workers = 1);

// Closed forms.
Integer q2_closed(int M);
Rational t3_closed(int M);
Rational that3_closed(int M);

}  // namespace betheperm
