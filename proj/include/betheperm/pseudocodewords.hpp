#pragma once

#include <string>
#include <vector>

#include "betheperm/arith.hpp"
#include "betheperm/binary_matrix.hpp"
#include "betheperm/lifting.hpp"

namespace betheperm {

enum class VectorOrigin { raw, perm, bethe_degree, bethe_limit };

/// Non-negative vector with either exact rational or binary64 entries.
struct PseudoVector {
  VectorOrigin origin = VectorOrigin::raw;
  int degree = 0;  // M when origin == bethe_degree
  bool exact = false;
  std::vector<Rational> exact_values;  // populated when exact
  std::vector<double> float_values;    // always populated

  int size() const { return static_cast<int>(float_values.size()); }
  double at(int i) const;               // 1-based
  const Rational& exact_at(int i) const;

  static PseudoVector from_exact(std::vector<Rational> values,
                                 VectorOrigin origin = VectorOrigin::raw,
                                 int degree = 0);
  static PseudoVector from_doubles(std::vector<double> values,
                                   VectorOrigin origin = VectorOrigin::raw,
                                   int degree = 0);
  std::string to_string() const;
};

struct ConeViolation {
  int row;       // 0 for the nonnegativity constraint
  int position;  // the component j being bounded
  double lhs;
  double rhs;
  double slack;  // rhs - lhs
};

struct ConeReport {
  bool member = false;
  std::vector<ConeViolation> violations;
  double tolerance = 0.0;
};

/// Checks nonnegativity plus, for every row and support position, that the
/// component is at most the sum of the row's other support components.
/// Exact vectors are compared exactly; float vectors within
/// tol * max(1, rhs).
ConeReport in_fundamental_cone(const BinaryMatrix& h, const PseudoVector& omega,
                               double tol = 0.0);

struct PseudoWeight {
  bool exact = false;
  Rational exact_value;
  double value = 0.0;
};

/// ||omega||_1^2 / ||omega||_2^2; equals the Hamming weight on 0/1 vectors.
PseudoWeight awgnc_pseudo_weight(const PseudoVector& omega);

/// Component i is the permanent of h with column i removed from beta,
/// zero outside beta. Requires |beta| = rows + 1.
PseudoVector perm_vector(const BinaryMatrix& h, const IndexSet& beta,
                         int workers = 1);

/// Same construction with the degree-M average in place of the permanent;
/// entries are exact at M = 1 and M-th roots otherwise.
PseudoVector bethe_perm_vector_M(const BinaryMatrix& h, const IndexSet& beta,
                                 int M, const EnumerationBudget& budget = {},
                                 int workers = 1);

/// Same construction with the limit value from the free-energy minimizer.
/// Throws when a component fails to converge.
PseudoVector bethe_perm_vector(const BinaryMatrix& h, const IndexSet& beta,
                               double tol = 1e-8);

/// True when some alpha > 0 makes the vectors equal componentwise (exact
/// when both vectors are exact, within tol otherwise).
bool proportional(const PseudoVector& a, const PseudoVector& b, double tol = 0.0);

enum class VectorFamily { perm, bethe_degree, bethe_limit };

struct MinWeightResult {
  PseudoWeight weight;
  IndexSet beta;
};

/// Minimum nonzero AWGNC pseudo-weight over all column sets of size
/// rows + 1, with the first set attaining it.
MinWeightResult min_pseudo_weight_bound(const BinaryMatrix& h, VectorFamily family,
                                        int degree = 1, double tol = 1e-8,
                                        const EnumerationBudget& budget = {},
                                        int workers = 1);

/// Componentwise M-th root; zero stays zero. Identity at M = 1.
PseudoVector root_M_scale(const PseudoVector& v, int M);

}  // namespace betheperm
