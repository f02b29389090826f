#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "betheperm/binary_matrix.hpp"
#include "betheperm/lifting.hpp"

namespace betheperm {

struct CheckFailure {
  std::string witness;  // replayable description: inputs and both sides
};

struct CheckReport {
  std::string name;
  int instances = 0;
  int passes = 0;
  std::vector<CheckFailure> failures;
  std::vector<std::string> findings;  // open-inequality violations, not failures
  std::vector<std::string> notes;     // reported-vs-recomputed reference values
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;

  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

/// q(m,M) <= m^M * q(m-1,M), exact rationals, for 2 <= m <= m_max,
/// 1 <= M <= M_max.
CheckReport check_corollary_q(int m_max, int M_max,
                              const EnumerationBudget& budget = {},
                              int workers = 1);

/// t(m,M) <= (m-1)^M * q(m-1,M), exact, same ranges.
CheckReport check_t_inequality(int m_max, int M_max,
                               const EnumerationBudget& budget = {},
                               int workers = 1);

/// that3(M)^(1/M) <= 1 + (M+1)^(1/M) (floats from exact values) and
/// that3(M) <= 2^(M+1) - 1 (exact), for M = 1..M_max.
CheckReport check_that_case(int M_max, const EnumerationBudget& budget = {},
                            int workers = 1);

/// Column-restricted permanent sums against the unrestricted grid sum for
/// random complement-partitions of [M].
CheckReport check_lemma_partition(int m, int M, int trials, std::uint64_t seed,
                                  const EnumerationBudget& budget = {},
                                  int workers = 1);

/// On random matrices with a weight-one first column, the cone inequality
/// for component one and the row-expansion inequality of the induced
/// square matrix carry the same slack; any violated inequality is recorded
/// as a finding, never a failure.
CheckReport check_reduction_equivalence(int trials, int n_max, std::uint64_t seed,
                                        double tol = 1e-8, int workers = 1);

/// Rebuilds the small worked example: codeword syndrome, block-permanent
/// vector, deleted-block-column permanent vector, their roots, cone
/// verdicts and pseudo-weights, against the published reference values.
CheckReport reproduce_example_motivation(int workers = 1);

/// Five published vector pairs on the lifted 9x12 matrix: permanent rows
/// exactly, limit rows within tol, weights recomputed and compared.
CheckReport reproduce_table1(double tol = 2e-3, int workers = 1);

/// The catalogued vectors for every 2x3 and non-trivial 3x4 pattern.
CheckReport reproduce_small_corollaries(const EnumerationBudget& budget = {},
                                        int workers = 1);

// Shared helpers.
bool mod2_syndrome_zero(const BinaryMatrix& h, const std::vector<int>& v);
/// Bernoulli(density) matrix, resampled until no zero row or column.
BinaryMatrix random_parity_check(int rows, int cols, std::mt19937_64& rng,
                                 double density = 0.6);

/// The worked example inputs (kept together so every check rebuilds them
/// the same way).
ExponentMatrix motivation_exponents();    // 3 x 4 blocks, M = 3
BinaryMatrix motivation_protomatrix();    // 3 x 4
BinaryMatrix example_2x4_matrix();        // [[1,1,1,0],[0,1,1,1]]

}  // namespace betheperm
