#include "betheperm/lifting.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "betheperm/permanent.hpp"

namespace betheperm {

Permutation identity_permutation(int M) {
  Permutation p(static_cast<std::size_t>(M));
  std::iota(p.begin(), p.end(), 1);
  return p;
}

Permutation unrank_permutation(int M, std::uint64_t rank) {
  std::vector<int> pool(static_cast<std::size_t>(M));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<std::uint64_t> fact(static_cast<std::size_t>(M), 1);
  for (int k = 1; k < M; ++k)
    fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k - 1)] * k;
  Permutation out;
  out.reserve(static_cast<std::size_t>(M));
  for (int k = M - 1; k >= 0; --k) {
    const std::uint64_t f = fact[static_cast<std::size_t>(k)];
    const std::size_t idx = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

std::uint64_t rank_permutation(const Permutation& p) {
  const int M = static_cast<int>(p.size());
  std::uint64_t rank = 0;
  std::uint64_t fact = 1;
  for (int k = 2; k <= M; ++k) fact *= static_cast<std::uint64_t>(k);
  std::vector<int> pool(static_cast<std::size_t>(M));
  std::iota(pool.begin(), pool.end(), 1);
  for (int k = 0; k < M; ++k) {
    if (M - k > 0) fact /= static_cast<std::uint64_t>(M - k);
    const auto it = std::find(pool.begin(), pool.end(), p[static_cast<std::size_t>(k)]);
    rank += static_cast<std::uint64_t>(it - pool.begin()) * fact;
    pool.erase(it);
  }
  return rank;
}

BudgetExceeded::BudgetExceeded(Integer required, std::uint64_t budget)
    : std::runtime_error("enumeration budget exceeded: requires " +
                         required.str() + " permanent evaluations, budget is " +
                         std::to_string(budget)),
      required_(std::move(required)) {}

const Permutation& LiftingAssignment::cell(int i, int j) const {
  return cells[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols) +
               static_cast<std::size_t>(j - 1)];
}

Permutation& LiftingAssignment::cell(int i, int j) {
  return cells[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(cols) +
               static_cast<std::size_t>(j - 1)];
}

LiftingEnumerator::LiftingEnumerator(int rows, int cols, int M,
                                     const EnumerationBudget& budget) {
  if (rows < 1 || cols < 1 || M < 1)
    throw std::invalid_argument("LiftingEnumerator: bad dimensions");
  total_ = ipow(factorial(static_cast<unsigned>(M)),
                static_cast<unsigned>(rows * cols));
  if (total_ > budget.max_evals) throw BudgetExceeded(total_, budget.max_evals);
  state_.rows = rows;
  state_.cols = cols;
  state_.lift_size = M;
  state_.cells.assign(static_cast<std::size_t>(rows) * cols,
                      identity_permutation(M));
}

bool LiftingEnumerator::next(LiftingAssignment& out) {
  if (done_) return false;
  if (first_) {
    first_ = false;
    out = state_;
    return true;
  }
  // Odometer over cells, last cell least significant.
  for (std::size_t k = state_.cells.size(); k-- > 0;) {
    if (std::next_permutation(state_.cells[k].begin(), state_.cells[k].end())) {
      out = state_;
      return true;
    }
    // wrapped back to the identity; carry on
  }
  done_ = true;
  return false;
}

IntegerMatrix lift(const BinaryMatrix& theta, const LiftingAssignment& p) {
  if (p.rows != theta.rows() || p.cols != theta.cols())
    throw std::invalid_argument("lift: assignment shape mismatch");
  const int M = p.lift_size;
  IntegerMatrix out(theta.rows() * M, theta.cols() * M);
  for (int i = 1; i <= theta.rows(); ++i)
    for (int j = 1; j <= theta.cols(); ++j) {
      if (theta.at(i, j) == 0) continue;
      const Permutation& perm = p.cell(i, j);
      for (int r = 1; r <= M; ++r)
        out.set((i - 1) * M + r,
                (j - 1) * M + perm[static_cast<std::size_t>(r - 1)], 1);
    }
  return out;
}

namespace {

struct Cell {
  int i, j;  // 1-based
};

void write_block(std::vector<std::uint8_t>& buf, int big_n, int M, const Cell& c,
                 const Permutation& p) {
  const int r0 = (c.i - 1) * M;
  const int c0 = (c.j - 1) * M;
  for (int r = 0; r < M; ++r) {
    std::uint8_t* row = buf.data() + static_cast<std::size_t>(r0 + r) * big_n + c0;
    std::fill(row, row + M, std::uint8_t{0});
    row[p[static_cast<std::size_t>(r)] - 1] = 1;
  }
}

// Sum of perm over all assignments of the free cells; pinned cells carry
// the identity, everything else is zero. Partitioned into contiguous rank
// ranges per worker; the reduction order is fixed, so the result does not
// depend on the worker count.
Integer sum_over_cells(const BinaryMatrix& theta, int M,
                       const std::vector<Cell>& free_cells,
                       const std::vector<Cell>& pinned_cells,
                       std::uint64_t total, int workers) {
  const int big_n = theta.rows() * M;
  if (big_n > 30)
    throw std::invalid_argument("lifted matrix too large for exact permanents (" +
                                std::to_string(big_n) + " > 30)");
  std::vector<std::uint8_t> base(static_cast<std::size_t>(big_n) * big_n, 0);
  const Permutation id = identity_permutation(M);
  for (const Cell& c : pinned_cells) write_block(base, big_n, M, c, id);

  std::uint64_t mfact = 1;
  for (int k = 2; k <= M; ++k) mfact *= static_cast<std::uint64_t>(k);

  const auto run_range = [&](std::uint64_t lo, std::uint64_t hi) -> Integer {
    std::vector<std::uint8_t> buf = base;
    std::vector<Permutation> perms(free_cells.size());
    std::uint64_t r = lo;
    for (std::size_t k = free_cells.size(); k-- > 0;) {
      perms[k] = unrank_permutation(M, r % mfact);
      r /= mfact;
      write_block(buf, big_n, M, free_cells[k], perms[k]);
    }
    Ryser01 kernel(big_n);
    Integer acc = 0;
    for (std::uint64_t step = lo;;) {
      acc += kernel.compute(buf.data());
      if (++step >= hi) break;
      for (std::size_t k = free_cells.size(); k-- > 0;) {
        const bool advanced =
            std::next_permutation(perms[k].begin(), perms[k].end());
        write_block(buf, big_n, M, free_cells[k], perms[k]);
        if (advanced) break;
      }
    }
    return acc;
  };

  workers = std::max(1, workers);
  if (total < 2 * static_cast<std::uint64_t>(workers)) workers = 1;
  if (workers == 1) return run_range(0, total);
  std::vector<Integer> partial(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = total / workers * w + std::min<std::uint64_t>(w, total % workers);
    const std::uint64_t hi =
        total / workers * (w + 1) + std::min<std::uint64_t>(w + 1, total % workers);
    pool.emplace_back([&, w, lo, hi] {
      if (lo < hi) partial[static_cast<std::size_t>(w)] = run_range(lo, hi);
    });
  }
  for (auto& t : pool) t.join();
  Integer out = 0;
  for (const Integer& p : partial) out += p;
  return out;
}

AverageResult average_over(const BinaryMatrix& theta, int M,
                           const std::vector<Cell>& free_cells,
                           const std::vector<Cell>& pinned_cells,
                           const EnumerationBudget& budget, int workers) {
  const Integer required =
      ipow(factorial(static_cast<unsigned>(M)),
           static_cast<unsigned>(free_cells.size()));
  if (required > budget.max_evals)
    throw BudgetExceeded(required, budget.max_evals);
  const std::uint64_t total = required.convert_to<std::uint64_t>();
  AverageResult out;
  out.degree = M;
  out.sum = sum_over_cells(theta, M, free_cells, pinned_cells, total, workers);
  out.count = required;
  out.mean = Rational(out.sum, out.count);
  out.root = mth_root(out.mean, static_cast<unsigned>(M));
  return out;
}

void require_square_theta(const BinaryMatrix& theta, const char* who) {
  if (theta.rows() != theta.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

std::vector<Cell> support_cells(const BinaryMatrix& theta) {
  std::vector<Cell> cells;
  for (int i = 1; i <= theta.rows(); ++i)
    for (int j = 1; j <= theta.cols(); ++j)
      if (theta.at(i, j) != 0) cells.push_back({i, j});
  return cells;
}

}  // namespace

AverageResult degree_M_bethe_perm(const BinaryMatrix& theta, int M,
                                  const EnumerationBudget& budget, int workers) {
  require_square_theta(theta, "degree_M_bethe_perm");
  if (M < 1) throw std::invalid_argument("degree_M_bethe_perm: M must be >= 1");
  return average_over(theta, M, support_cells(theta), {}, budget, workers);
}

AverageResult degree_M_bethe_perm_canonical(const BinaryMatrix& theta, int M,
                                            const EnumerationBudget& budget,
                                            int workers) {
  require_square_theta(theta, "degree_M_bethe_perm_canonical");
  if (M < 1) throw std::invalid_argument("degree_M_bethe_perm_canonical: M >= 1");
  for (int j = 1; j <= theta.cols(); ++j)
    if (theta.at(1, j) != 1)
      throw std::invalid_argument(
          "degree_M_bethe_perm_canonical: first row must be all ones");
  for (int i = 1; i <= theta.rows(); ++i)
    if (theta.at(i, 1) != 1)
      throw std::invalid_argument(
          "degree_M_bethe_perm_canonical: first column must be all ones");
  std::vector<Cell> pinned, free_cells;
  for (const Cell& c : support_cells(theta)) {
    if (c.i == 1 || c.j == 1)
      pinned.push_back(c);
    else
      free_cells.push_back(c);
  }
  return average_over(theta, M, free_cells, pinned, budget, workers);
}

AverageResult degree_M_bethe_perm_reduced(const BinaryMatrix& theta, int M,
                                          const EnumerationBudget& budget,
                                          int workers) {
  require_square_theta(theta, "degree_M_bethe_perm_reduced");
  if (M < 1) throw std::invalid_argument("degree_M_bethe_perm_reduced: M >= 1");
  const int m = theta.rows();
  const int n = theta.cols();
  // Spanning forest of the bipartite support graph (row vertices 0..m-1,
  // column vertices m..m+n-1), BFS order for determinism. Tree cells get
  // pinned to the identity; the remaining support cells stay free.
  std::vector<bool> visited(static_cast<std::size_t>(m + n), false);
  std::vector<std::vector<std::pair<int, Cell>>> adj(
      static_cast<std::size_t>(m + n));
  for (const Cell& c : support_cells(theta)) {
    adj[static_cast<std::size_t>(c.i - 1)].push_back({m + c.j - 1, c});
    adj[static_cast<std::size_t>(m + c.j - 1)].push_back({c.i - 1, c});
  }
  std::vector<Cell> pinned;
  std::vector<bool> cell_pinned(static_cast<std::size_t>(m) * n, false);
  for (int root = 0; root < m + n; ++root) {
    if (visited[static_cast<std::size_t>(root)]) continue;
    visited[static_cast<std::size_t>(root)] = true;
    std::vector<int> queue{root};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int v = queue[qi];
      for (const auto& [u, c] : adj[static_cast<std::size_t>(v)]) {
        if (visited[static_cast<std::size_t>(u)]) continue;
        visited[static_cast<std::size_t>(u)] = true;
        pinned.push_back(c);
        cell_pinned[static_cast<std::size_t>(c.i - 1) * n + (c.j - 1)] = true;
        queue.push_back(u);
      }
    }
  }
  std::vector<Cell> free_cells;
  for (const Cell& c : support_cells(theta))
    if (!cell_pinned[static_cast<std::size_t>(c.i - 1) * n + (c.j - 1)])
      free_cells.push_back(c);
  return average_over(theta, M, free_cells, pinned, budget, workers);
}

Rational q(int m, int M, const EnumerationBudget& budget, int workers) {
  if (m < 1 || M < 1) throw std::invalid_argument("q: m and M must be >= 1");
  if (m == 1) return Rational(1);
  BinaryMatrix ones(m, m);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) ones.set(i, j, 1);
  return degree_M_bethe_perm_canonical(ones, M, budget, workers).mean;
}

Rational t(int m, int M, const EnumerationBudget& budget, int workers) {
  if (m < 2 || M < 1) throw std::invalid_argument("t: need m >= 2, M >= 1");
  BinaryMatrix theta(m, m);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) theta.set(i, j, 1);
  theta.set(1, m, 0);
  return degree_M_bethe_perm_reduced(theta, M, budget, workers).mean;
}

namespace {

// Sum of perm over (outer, inner...) tuples of permutation matrices added
// to fixed bases; used by the reduced t3/that3 sums.
Integer sum_perm_of_sums(int M, int extra, std::uint64_t total, int workers) {
  // extra = 2: perm(I+P+Q); extra = 3: perm(I+P+Q+R). Tuple rank is
  // lexicographic over (P, Q[, R]) ranks.
  std::uint64_t mfact = 1;
  for (int k = 2; k <= M; ++k) mfact *= static_cast<std::uint64_t>(k);
  const auto run_range = [&](std::uint64_t lo, std::uint64_t hi) -> Integer {
    std::vector<Permutation> perms(static_cast<std::size_t>(extra));
    std::uint64_t r = lo;
    for (std::size_t k = static_cast<std::size_t>(extra); k-- > 0;) {
      perms[k] = unrank_permutation(M, r % mfact);
      r /= mfact;
    }
    std::vector<std::int64_t> entries(static_cast<std::size_t>(M) * M);
    Integer acc = 0;
    for (std::uint64_t step = lo;;) {
      std::fill(entries.begin(), entries.end(), std::int64_t{0});
      for (int i = 0; i < M; ++i) entries[static_cast<std::size_t>(i) * M + i] = 1;
      for (const Permutation& p : perms)
        for (int i = 0; i < M; ++i)
          entries[static_cast<std::size_t>(i) * M + p[static_cast<std::size_t>(i)] - 1] += 1;
      acc += permanent_int64(M, entries.data());
      if (++step >= hi) break;
      for (std::size_t k = static_cast<std::size_t>(extra); k-- > 0;) {
        if (std::next_permutation(perms[k].begin(), perms[k].end())) break;
      }
    }
    return acc;
  };
  workers = std::max(1, workers);
  if (total < 2 * static_cast<std::uint64_t>(workers)) workers = 1;
  if (workers == 1) return run_range(0, total);
  std::vector<Integer> partial(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = total / workers * w + std::min<std::uint64_t>(w, total % workers);
    const std::uint64_t hi =
        total / workers * (w + 1) + std::min<std::uint64_t>(w + 1, total % workers);
    pool.emplace_back([&, w, lo, hi] {
      if (lo < hi) partial[static_cast<std::size_t>(w)] = run_range(lo, hi);
    });
  }
  for (auto& t : pool) t.join();
  Integer out = 0;
  for (const Integer& p : partial) out += p;
  return out;
}

Rational reduced_t_sum(int M, int extra, const EnumerationBudget& budget,
                       int workers) {
  const Integer mfact = factorial(static_cast<unsigned>(M));
  const Integer required = ipow(mfact, static_cast<unsigned>(extra));
  if (required > budget.max_evals)
    throw BudgetExceeded(required, budget.max_evals);
  const Integer sum = sum_perm_of_sums(
      M, extra, required.convert_to<std::uint64_t>(), workers);
  return Rational(sum, required);
}

}  // namespace

Rational t3(int M, const EnumerationBudget& budget, int workers) {
  if (M < 1) throw std::invalid_argument("t3: M must be >= 1");
  return reduced_t_sum(M, 3, budget, workers);
}

Rational that3(int M, const EnumerationBudget& budget, int workers) {
  if (M < 1) throw std::invalid_argument("that3: M must be >= 1");
  return reduced_t_sum(M, 2, budget, workers);
}

Integer q2_closed(int M) {
  if (M < 1) throw std::invalid_argument("q2_closed: M must be >= 1");
  return Integer(M) + 1;
}

Rational t3_closed(int M) {
  if (M < 1) throw std::invalid_argument("t3_closed: M must be >= 1");
  const unsigned m = static_cast<unsigned>(M);
  Integer num = 0;
  for (unsigned r = 0; r <= m; ++r) {
    Integer inner_s = 0;
    for (unsigned s = 0; s <= r; ++s)
      inner_s += binomial(r, s) * factorial(m - r + s) * factorial(m - s);
    Integer inner_t = 0;
    for (unsigned u = 0; u <= m - r; ++u)
      inner_t += binomial(m - r, u) * factorial(m - u) * factorial(r + u);
    num += binomial(m, r) * inner_s * inner_t;
  }
  return Rational(num, ipow(factorial(m), 3));
}

Rational that3_closed(int M) {
  if (M < 1) throw std::invalid_argument("that3_closed: M must be >= 1");
  const unsigned m = static_cast<unsigned>(M);
  Integer num = 0;
  for (unsigned r = 0; r <= m; ++r) {
    Integer inner_s = 0;
    for (unsigned s = 0; s <= r; ++s)
      inner_s += binomial(r, s) * factorial(m - r + s) * factorial(m - s);
    num += binomial(m, r) * inner_s * factorial(r);
  }
  return Rational(num, ipow(factorial(m), 2));
}

}  // namespace betheperm
