#include "betheperm/bethe_free_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace betheperm {

namespace {

// Log guard only; gradients must stay distinct arbitrarily close to the
// polytope boundary, so iterates are kept strictly interior instead of
// being clamped at a coarse threshold.
constexpr double kLogGuard = 1e-300;
constexpr double kBoundaryMargin = 1e-10;
constexpr double kForbidden = 1e30;

double clamped(double x) {
  return std::min(1.0 - kLogGuard, std::max(kLogGuard, x));
}

}  // namespace

DoublyStochastic::DoublyStochastic(int size)
    : n(size), values(static_cast<std::size_t>(size) * size, 0.0) {
  if (size < 1) throw std::invalid_argument("DoublyStochastic: bad size");
}

double DoublyStochastic::at(int i, int j) const {
  if (i < 1 || i > n || j < 1 || j > n)
    throw std::out_of_range("DoublyStochastic::at");
  return values[static_cast<std::size_t>(i - 1) * n + (j - 1)];
}

void DoublyStochastic::set(int i, int j, double v) {
  if (i < 1 || i > n || j < 1 || j > n)
    throw std::out_of_range("DoublyStochastic::set");
  values[static_cast<std::size_t>(i - 1) * n + (j - 1)] = v;
}

double DoublyStochastic::max_marginal_residual() const {
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    double rs = 0.0, cs = 0.0;
    for (int j = 1; j <= n; ++j) {
      rs += at(i, j);
      cs += at(j, i);
    }
    worst = std::max({worst, std::abs(rs - 1.0), std::abs(cs - 1.0)});
  }
  return worst;
}

double bethe_free_energy(const IntegerMatrix& theta, const DoublyStochastic& gamma) {
  if (!theta.square()) throw std::invalid_argument("bethe_free_energy: theta not square");
  if (gamma.n != theta.rows())
    throw std::invalid_argument("bethe_free_energy: size mismatch");
  double f = 0.0;
  for (int i = 1; i <= gamma.n; ++i) {
    for (int j = 1; j <= gamma.n; ++j) {
      const double x = gamma.at(i, j);
      if (x > 1.0 + 1e-12)
        throw std::invalid_argument("bethe_free_energy: entry above one");
      if (theta.at(i, j) == 0) {
        if (x > 0.0)
          throw std::invalid_argument(
              "bethe_free_energy: positive entry off the support");
        continue;
      }
      const double th = theta.at(i, j).convert_to<double>();
      if (x > 0.0) f += x * std::log(x / th);
      const double y = 1.0 - x;
      if (y > 0.0) f -= y * std::log(y);
    }
  }
  return f;
}

bool has_perfect_matching(const BinaryMatrix& support) {
  const int rows = support.rows();
  const int cols = support.cols();
  if (rows != cols) return false;
  std::vector<int> match_col(static_cast<std::size_t>(cols), -1);
  std::vector<char> seen;
  // Kuhn's augmenting paths.
  auto try_row = [&](auto&& self, int r) -> bool {
    for (int c = 0; c < cols; ++c) {
      if (support.at(r + 1, c + 1) == 0 || seen[static_cast<std::size_t>(c)])
        continue;
      seen[static_cast<std::size_t>(c)] = 1;
      if (match_col[static_cast<std::size_t>(c)] < 0 ||
          self(self, match_col[static_cast<std::size_t>(c)])) {
        match_col[static_cast<std::size_t>(c)] = r;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < rows; ++r) {
    seen.assign(static_cast<std::size_t>(cols), 0);
    if (!try_row(try_row, r)) return false;
  }
  return true;
}

std::vector<int> min_cost_assignment(int n, const std::vector<double>& cost) {
  // Shortest augmenting paths with potentials; exact for finite costs.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur =
            cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] -
            u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0)
      row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] =
          j - 1;
  return row_to_col;
}

DoublyStochastic sinkhorn_scale(const BinaryMatrix& support, int rounds,
                                double residual_target) {
  const int n = support.rows();
  DoublyStochastic g(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) g.set(i, j, support.at(i, j));
  for (int round = 0; round < rounds; ++round) {
    for (int i = 1; i <= n; ++i) {
      double rs = 0.0;
      for (int j = 1; j <= n; ++j) rs += g.at(i, j);
      if (rs <= 0.0) throw std::invalid_argument("sinkhorn_scale: zero row");
      for (int j = 1; j <= n; ++j) g.set(i, j, g.at(i, j) / rs);
    }
    for (int j = 1; j <= n; ++j) {
      double cs = 0.0;
      for (int i = 1; i <= n; ++i) cs += g.at(i, j);
      if (cs <= 0.0) throw std::invalid_argument("sinkhorn_scale: zero column");
      for (int i = 1; i <= n; ++i) g.set(i, j, g.at(i, j) / cs);
    }
    if (g.max_marginal_residual() <= residual_target) break;
  }
  return g;
}

namespace {

// State for the reduced problem after degree-one propagation.
struct CoreProblem {
  int n = 0;                       // size of the reduced matrix
  std::vector<double> theta;       // row-major weights, 0 off support
  std::vector<int> row_ids, col_ids;  // original 1-based indices
  double fixed_free_energy = 0.0;  // -sum ln(theta) over pinned ones
  std::vector<std::pair<int, int>> pinned_ones;  // original (i, j), gamma = 1
  bool feasible = true;
};

CoreProblem propagate_forced(const IntegerMatrix& theta) {
  const int n = theta.rows();
  CoreProblem core;
  std::vector<char> row_alive(static_cast<std::size_t>(n), 1);
  std::vector<char> col_alive(static_cast<std::size_t>(n), 1);
  std::vector<std::vector<char>> supp(
      static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      supp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          theta.at(i + 1, j + 1) != 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n && core.feasible; ++i) {
      if (!row_alive[static_cast<std::size_t>(i)]) continue;
      int deg = 0, last = -1;
      for (int j = 0; j < n; ++j)
        if (col_alive[static_cast<std::size_t>(j)] &&
            supp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
          ++deg;
          last = j;
        }
      if (deg == 0) core.feasible = false;
      if (deg == 1) {
        core.pinned_ones.emplace_back(i + 1, last + 1);
        core.fixed_free_energy -=
            std::log(theta.at(i + 1, last + 1).convert_to<double>());
        row_alive[static_cast<std::size_t>(i)] = 0;
        col_alive[static_cast<std::size_t>(last)] = 0;
        changed = true;
      }
    }
    for (int j = 0; j < n && core.feasible; ++j) {
      if (!col_alive[static_cast<std::size_t>(j)]) continue;
      int deg = 0, last = -1;
      for (int i = 0; i < n; ++i)
        if (row_alive[static_cast<std::size_t>(i)] &&
            supp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
          ++deg;
          last = i;
        }
      if (deg == 0) core.feasible = false;
      if (deg == 1) {
        core.pinned_ones.emplace_back(last + 1, j + 1);
        core.fixed_free_energy -=
            std::log(theta.at(last + 1, j + 1).convert_to<double>());
        row_alive[static_cast<std::size_t>(last)] = 0;
        col_alive[static_cast<std::size_t>(j)] = 0;
        changed = true;
      }
    }
  }
  if (!core.feasible) return core;
  for (int i = 0; i < n; ++i)
    if (row_alive[static_cast<std::size_t>(i)]) core.row_ids.push_back(i + 1);
  for (int j = 0; j < n; ++j)
    if (col_alive[static_cast<std::size_t>(j)]) core.col_ids.push_back(j + 1);
  core.n = static_cast<int>(core.row_ids.size());
  core.theta.assign(static_cast<std::size_t>(core.n) * core.n, 0.0);
  for (int i = 0; i < core.n; ++i)
    for (int j = 0; j < core.n; ++j)
      core.theta[static_cast<std::size_t>(i) * core.n + j] =
          theta.at(core.row_ids[static_cast<std::size_t>(i)],
                   core.col_ids[static_cast<std::size_t>(j)])
              .convert_to<double>();
  return core;
}

double core_free_energy(const CoreProblem& c, const std::vector<double>& g) {
  double f = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (c.theta[k] <= 0.0) continue;
    const double x = g[k];
    if (x > 0.0) f += x * std::log(x / c.theta[k]);
    const double y = 1.0 - x;
    if (y > 0.0) f -= y * std::log(y);
  }
  return f;
}

void core_gradient(const CoreProblem& c, const std::vector<double>& g,
                   std::vector<double>& grad) {
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (c.theta[k] <= 0.0) {
      grad[k] = kForbidden;
      continue;
    }
    const double x = clamped(g[k]);
    grad[k] = std::log(x / c.theta[k]) + std::log(1.0 - x) + 2.0;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Exact line search for the convex restriction along d on [0, alpha_max]:
// bisection on the monotone derivative.
double line_search(const CoreProblem& c, const std::vector<double>& g,
                   const std::vector<double>& d, double alpha_max) {
  const auto derivative = [&](double alpha) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (d[k] == 0.0 || c.theta[k] <= 0.0) continue;
      const double x = clamped(g[k] + alpha * d[k]);
      s += d[k] * (std::log(x / c.theta[k]) + std::log(1.0 - x) + 2.0);
    }
    return s;
  };
  if (derivative(0.0) >= 0.0) return 0.0;
  if (derivative(alpha_max) <= 0.0) return alpha_max;
  double lo = 0.0, hi = alpha_max;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (derivative(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BetheResult minimize_bethe(const IntegerMatrix& theta, const BetheOptions& options) {
  if (!theta.square()) throw std::invalid_argument("minimize_bethe: theta not square");
  const int n = theta.rows();
  BetheResult result;
  result.minimizer = DoublyStochastic(n);

  BinaryMatrix support(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) support.set(i, j, theta.at(i, j) != 0 ? 1 : 0);
  if (!has_perfect_matching(support)) {
    result.feasible = false;
    result.converged = true;
    result.value = 0.0;
    return result;
  }

  CoreProblem core = propagate_forced(theta);
  // Propagation cannot make a matchable support infeasible.
  for (const auto& [i, j] : core.pinned_ones) result.minimizer.set(i, j, 1.0);

  double core_f = 0.0;
  double core_gap = 0.0;
  int iterations = 0;
  bool converged = true;
  std::vector<double> gamma;

  if (core.n > 0) {
    const int m = core.n;
    BinaryMatrix core_supp(m, m);
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= m; ++j)
        core_supp.set(i, j,
                      core.theta[static_cast<std::size_t>(i - 1) * m + (j - 1)] > 0
                          ? 1
                          : 0);
    DoublyStochastic init =
        sinkhorn_scale(core_supp, options.sinkhorn_rounds, 1e-12);
    gamma = init.values;

    // Atoms of the current convex decomposition: the scaled start plus
    // assignment vertices discovered by the linear subproblem.
    std::vector<std::vector<double>> atoms{gamma};
    std::vector<double> weights{1.0};
    std::map<std::vector<int>, std::size_t> vertex_index;

    std::vector<double> grad(gamma.size());
    std::vector<double> direction(gamma.size());
    converged = false;
    for (iterations = 0; iterations < options.max_iterations; ++iterations) {
      core_gradient(core, gamma, grad);
      const std::vector<int> assign = min_cost_assignment(m, grad);
      std::vector<double> vertex(gamma.size(), 0.0);
      for (int i = 0; i < m; ++i)
        vertex[static_cast<std::size_t>(i) * m + assign[static_cast<std::size_t>(i)]] = 1.0;
      const double gap = dot(grad, gamma) - dot(grad, vertex);
      core_gap = gap;
      if (gap <= options.tol) {
        converged = true;
        break;
      }
      // Away atom: the one the gradient likes least.
      std::size_t away = 0;
      double away_score = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        const double s = dot(grad, atoms[a]);
        if (s > away_score) {
          away_score = s;
          away = a;
        }
      }
      const double fw_score = dot(grad, gamma) - dot(grad, vertex);
      const double aw_score = away_score - dot(grad, gamma);
      bool fw_step = fw_score >= aw_score || atoms.size() == 1;
      // Steps stop a hair short of the boundary: exactly on a vertex all
      // support gradients coincide and the gap test degenerates.
      double alpha_max;
      if (fw_step) {
        alpha_max = 1.0 - kBoundaryMargin;
        for (std::size_t k = 0; k < gamma.size(); ++k)
          direction[k] = vertex[k] - gamma[k];
      } else {
        const double w = weights[away];
        alpha_max = w < 1.0 - 1e-15 ? (1.0 - kBoundaryMargin) * w / (1.0 - w)
                                    : 0.0;
        if (!std::isfinite(alpha_max) || alpha_max <= 0.0) {
          fw_step = true;
          alpha_max = 1.0 - kBoundaryMargin;
          for (std::size_t k = 0; k < gamma.size(); ++k)
            direction[k] = vertex[k] - gamma[k];
        } else {
          for (std::size_t k = 0; k < gamma.size(); ++k)
            direction[k] = gamma[k] - atoms[away][k];
        }
      }
      const double alpha = line_search(core, gamma, direction, alpha_max);
      if (alpha <= 0.0) {
        converged = gap <= options.tol;
        break;
      }
      for (std::size_t k = 0; k < gamma.size(); ++k)
        gamma[k] += alpha * direction[k];
      if (fw_step) {
        for (double& w : weights) w *= 1.0 - alpha;
        const auto it = vertex_index.find(assign);
        if (it == vertex_index.end()) {
          vertex_index.emplace(assign, atoms.size());
          atoms.push_back(std::move(vertex));
          weights.push_back(alpha);
        } else {
          weights[it->second] += alpha;
        }
      } else {
        for (double& w : weights) w *= 1.0 + alpha;
        weights[away] -= alpha;
        if (weights[away] < 1e-14) {
          // Drop the exhausted atom to keep the active set small.
          if (away != 0 || atoms.size() > 1) {
            atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(away));
            weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(away));
            std::map<std::vector<int>, std::size_t> rebuilt;
            for (auto& [key, idx] : vertex_index) {
              if (idx == away) continue;
              rebuilt.emplace(key, idx > away ? idx - 1 : idx);
            }
            vertex_index = std::move(rebuilt);
          }
        }
      }
      // Periodic resync against drift in the incremental updates.
      if ((iterations & 0x3ff) == 0x3ff) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total > 0.0)
          for (double& w : weights) w /= total;
        std::fill(gamma.begin(), gamma.end(), 0.0);
        for (std::size_t a = 0; a < atoms.size(); ++a)
          for (std::size_t k = 0; k < gamma.size(); ++k)
            gamma[k] += weights[a] * atoms[a][k];
      }
    }
    // Rounding in away steps can leave entries a few ulp below zero.
    for (double& x : gamma) x = std::max(0.0, x);
    core_f = core_free_energy(core, gamma);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        result.minimizer.set(core.row_ids[static_cast<std::size_t>(i)],
                             core.col_ids[static_cast<std::size_t>(j)],
                             gamma[static_cast<std::size_t>(i) * m + j]);
  }

  result.free_energy = core_f + core.fixed_free_energy;
  result.value = std::exp(-result.free_energy);
  result.gap = core_gap;
  result.iterations = iterations;
  result.converged = converged;
  return result;
}

BetheResult minimize_bethe(const IntegerMatrix& theta, double tol) {
  BetheOptions opt;
  opt.tol = tol;
  return minimize_bethe(theta, opt);
}

BetheResult minimize_bethe(const BinaryMatrix& theta, double tol) {
  return minimize_bethe(IntegerMatrix::from_binary(theta), tol);
}

CofactorExpansionReport bethe_cofactor_inequality(const BinaryMatrix& t, int row,
                                                  double tol) {
  if (t.rows() != t.cols())
    throw std::invalid_argument("bethe_cofactor_inequality: matrix not square");
  const int m = t.rows();
  if (row < 1 || row > m)
    throw std::out_of_range("bethe_cofactor_inequality: bad row");
  CofactorExpansionReport report;
  const BetheResult full = minimize_bethe(t, tol);
  report.lhs = full.value;
  report.lhs_gap = full.gap;
  const IndexSet rows = IndexSet::full(m).minus(row);
  for (int l = 1; l <= m; ++l) {
    if (t.at(row, l) == 0) continue;
    if (m == 1) {
      report.rhs += 1.0;  // empty minor
      continue;
    }
    const BetheResult minor =
        minimize_bethe(submatrix(t, rows, IndexSet::full(m).minus(l)), tol);
    report.rhs += minor.value;
    report.rhs_gap += minor.gap;
  }
  report.slack = report.rhs - report.lhs;
  report.holds = report.slack >= -(tol + report.lhs_gap + report.rhs_gap);
  return report;
}

}  // namespace betheperm
