#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "betheperm/binary_matrix.hpp"
#include "betheperm/integer_matrix.hpp"

namespace betheperm {

/// Square non-negative marginal matrix; feasible points have every row and
/// column summing to one and vanish off the support of the weight matrix.
struct DoublyStochastic {
  int n = 0;
  std::vector<double> values;  // row-major

  DoublyStochastic() = default;
  explicit DoublyStochastic(int size);
  double at(int i, int j) const;  // 1-based
  void set(int i, int j, double v);
  double max_marginal_residual() const;
};

/// F(gamma) = sum over support of gamma*ln(gamma/theta) - (1-gamma)*ln(1-gamma),
/// with 0*ln(0) = 0. Convex over the doubly stochastic polytope.
double bethe_free_energy(const IntegerMatrix& theta, const DoublyStochastic& gamma);

struct BetheOptions {
  double tol = 1e-8;
  int max_iterations = 50'000;
  int sinkhorn_rounds = 200;
};

/// The minimizer ran out of iterations before certifying the tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BetheResult {
  double value = 0.0;        // exp(-free_energy); 0 when no perfect matching
  double free_energy = 0.0;
  DoublyStochastic minimizer;
  double gap = 0.0;          // linearization gap at the returned point
  int iterations = 0;
  bool converged = false;
  bool feasible = true;      // support admits a perfect matching
};

/// Conditional-gradient minimization with away steps over the doubly
/// stochastic polytope restricted to the support. The linear subproblem is
/// an assignment problem solved exactly, so `gap` upper-bounds the
/// free-energy suboptimality. Rows/columns with a single support entry are
/// propagated out beforehand.
BetheResult minimize_bethe(const IntegerMatrix& theta, const BetheOptions& options);
BetheResult minimize_bethe(const IntegerMatrix& theta, double tol = 1e-8);
BetheResult minimize_bethe(const BinaryMatrix& theta, double tol = 1e-8);

struct CofactorExpansionReport {
  double lhs = 0.0;   // limit value for the full matrix
  double rhs = 0.0;   // expansion along the chosen row
  double slack = 0.0; // rhs - lhs
  bool holds = false; // slack >= -(tol + certificates)
  double lhs_gap = 0.0;
  double rhs_gap = 0.0;  // summed over the expansion terms
};

/// Compares the limit value of T against its permanent-style expansion
/// along `row`, every term computed by the minimizer.
CofactorExpansionReport bethe_cofactor_inequality(const BinaryMatrix& t, int row,
                                                  double tol = 1e-8);

// Building blocks, exposed for tests.
bool has_perfect_matching(const BinaryMatrix& support);
/// Exact min-cost assignment (row -> column, 0-based) on an n x n cost
/// matrix given row-major.
std::vector<int> min_cost_assignment(int n, const std::vector<double>& cost);
DoublyStochastic sinkhorn_scale(const BinaryMatrix& support, int rounds,
                                double residual_target);

}  // namespace betheperm
