#include "betheperm/permanent.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace betheperm {

namespace {

void require_square(const IntegerMatrix& a, const char* who) {
  if (!a.square())
    throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
}

bool has_zero_row_or_col(const IntegerMatrix& a) {
  for (int i = 1; i <= a.rows(); ++i) {
    bool all = true;
    for (int j = 1; j <= a.cols(); ++j)
      if (a.at(i, j) != 0) {
        all = false;
        break;
      }
    if (all) return true;
  }
  for (int j = 1; j <= a.cols(); ++j) {
    bool all = true;
    for (int i = 1; i <= a.rows(); ++i)
      if (a.at(i, j) != 0) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

// Largest possible |partial sum| is bounded by 2^n * prod_i rowsum_i.
Integer ryser_accumulation_bound(const IntegerMatrix& a) {
  Integer bound = 1;
  for (int i = 1; i <= a.rows(); ++i) {
    Integer rs = 0;
    for (int j = 1; j <= a.cols(); ++j) rs += a.at(i, j);
    bound *= rs;
  }
  return bound << a.rows();
}

constexpr std::int64_t kInt64Safe = (std::int64_t{1} << 62);

// One contiguous Gray-code range of the inclusion-exclusion sum,
// sum over k in [lo, hi) of (-1)^(n-|gray(k)|) * prod_i rowsum_i(gray(k)).
template <typename T>
T ryser_range(int n, const std::vector<T>& colmajor, std::uint64_t lo,
              std::uint64_t hi) {
  std::vector<T> rowsum(static_cast<std::size_t>(n));
  std::uint64_t g = lo ^ (lo >> 1);
  int popcnt = std::popcount(g);
  for (int j = 0; j < n; ++j)
    if (g >> j & 1u)
      for (int i = 0; i < n; ++i)
        rowsum[static_cast<std::size_t>(i)] +=
            colmajor[static_cast<std::size_t>(j) * n + i];
  T acc = 0;
  for (std::uint64_t k = lo;;) {
    T prod = 1;
    for (int i = 0; i < n; ++i) {
      prod *= rowsum[static_cast<std::size_t>(i)];
      if (prod == 0) break;
    }
    if ((n - popcnt) & 1)
      acc -= prod;
    else
      acc += prod;
    if (++k >= hi) break;
    const int j = std::countr_zero(k);
    const bool added = !(g >> j & 1u);
    g ^= std::uint64_t{1} << j;
    popcnt += added ? 1 : -1;
    for (int i = 0; i < n; ++i) {
      const T& v = colmajor[static_cast<std::size_t>(j) * n + i];
      if (added)
        rowsum[static_cast<std::size_t>(i)] += v;
      else
        rowsum[static_cast<std::size_t>(i)] -= v;
    }
  }
  return acc;
}

template <typename T>
Integer ryser_run(const IntegerMatrix& a, int workers) {
  const int n = a.rows();
  std::vector<T> colmajor(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      colmajor[static_cast<std::size_t>(j) * n + i] =
          a.at(i + 1, j + 1).convert_to<T>();
  const std::uint64_t total = (std::uint64_t{1} << n) - 1;
  workers = std::max(1, std::min<int>(workers, static_cast<int>(total)));
  if (workers == 1) return Integer(ryser_range<T>(n, colmajor, 1, total + 1));
  std::vector<T> partial(static_cast<std::size_t>(workers), T(0));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = 1 + total * w / workers;
    const std::uint64_t hi = 1 + total * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] {
      if (lo < hi)
        partial[static_cast<std::size_t>(w)] = ryser_range<T>(n, colmajor, lo, hi);
    });
  }
  for (auto& t : pool) t.join();
  Integer out = 0;
  for (const T& p : partial) out += Integer(p);
  return out;
}

template <>
Integer ryser_run<Integer>(const IntegerMatrix& a, int workers) {
  const int n = a.rows();
  std::vector<Integer> colmajor(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      colmajor[static_cast<std::size_t>(j) * n + i] = a.at(i + 1, j + 1);
  const std::uint64_t total = (std::uint64_t{1} << n) - 1;
  workers = std::max(1, std::min<int>(workers, static_cast<int>(total)));
  if (workers == 1)
    return ryser_range<Integer>(n, colmajor, 1, total + 1);
  std::vector<Integer> partial(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = 1 + total * w / workers;
    const std::uint64_t hi = 1 + total * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] {
      if (lo < hi)
        partial[static_cast<std::size_t>(w)] =
            ryser_range<Integer>(n, colmajor, lo, hi);
    });
  }
  for (auto& t : pool) t.join();
  Integer out = 0;
  for (const Integer& p : partial) out += p;
  return out;
}

}  // namespace

Integer permanent_naive(const IntegerMatrix& a) {
  require_square(a, "permanent_naive");
  const int n = a.rows();
  if (n > 10)
    throw std::invalid_argument("permanent_naive: guarded at n <= 10, got n = " +
                                std::to_string(n));
  std::vector<int> cols(static_cast<std::size_t>(n));
  std::iota(cols.begin(), cols.end(), 1);
  Integer total = 0;
  do {
    Integer prod = 1;
    for (int i = 1; i <= n; ++i) {
      prod *= a.at(i, cols[static_cast<std::size_t>(i - 1)]);
      if (prod == 0) break;
    }
    total += prod;
  } while (std::next_permutation(cols.begin(), cols.end()));
  return total;
}

Integer permanent_ryser(const IntegerMatrix& a, int workers) {
  require_square(a, "permanent_ryser");
  const int n = a.rows();
  if (n > 30)
    throw std::invalid_argument("permanent_ryser: guarded at n <= 30, got n = " +
                                std::to_string(n));
  const Integer bound = ryser_accumulation_bound(a);
  if (bound == 0) return 0;
  if (bound < kInt64Safe) return ryser_run<std::int64_t>(a, workers);
  return ryser_run<Integer>(a, workers);
}

Integer permanent(const IntegerMatrix& a, int workers) {
  require_square(a, "permanent");
  if (has_zero_row_or_col(a)) return 0;
  return permanent_ryser(a, workers);
}

Ryser01::Ryser01(int n) : n_(n) {
  if (n < 1 || n > 30) throw std::invalid_argument("Ryser01: bad size");
  // prod of row sums <= n^n; accumulation adds at most 2^n such terms
  Integer bound = ipow(Integer(n), static_cast<unsigned>(n)) << n;
  small_ = bound < kInt64Safe;
  colrows_.resize(static_cast<std::size_t>(n) * n);
  colcnt_.resize(static_cast<std::size_t>(n));
  rowsum_.resize(static_cast<std::size_t>(n));
}

std::int64_t Ryser01::run_range_small(std::uint64_t lo, std::uint64_t hi) {
  const int n = n_;
  std::fill(rowsum_.begin(), rowsum_.end(), std::int16_t{0});
  std::uint64_t g = lo ^ (lo >> 1);
  int popcnt = std::popcount(g);
  int zero_rows = n;
  for (int j = 0; j < n; ++j) {
    if (!(g >> j & 1u)) continue;
    const std::uint8_t* rows = &colrows_[static_cast<std::size_t>(j) * n];
    for (int t = 0; t < colcnt_[static_cast<std::size_t>(j)]; ++t) {
      if (rowsum_[rows[t]]++ == 0) --zero_rows;
    }
  }
  std::int64_t acc = 0;
  for (std::uint64_t k = lo;;) {
    if (zero_rows == 0) {
      std::int64_t prod = 1;
      for (int i = 0; i < n; ++i) prod *= rowsum_[static_cast<std::size_t>(i)];
      acc += ((n - popcnt) & 1) ? -prod : prod;
    }
    if (++k >= hi) break;
    const int j = std::countr_zero(k);
    const bool added = !(g >> j & 1u);
    g ^= std::uint64_t{1} << j;
    popcnt += added ? 1 : -1;
    const std::uint8_t* rows = &colrows_[static_cast<std::size_t>(j) * n];
    const int cnt = colcnt_[static_cast<std::size_t>(j)];
    if (added) {
      for (int t = 0; t < cnt; ++t)
        if (rowsum_[rows[t]]++ == 0) --zero_rows;
    } else {
      for (int t = 0; t < cnt; ++t)
        if (--rowsum_[rows[t]] == 0) ++zero_rows;
    }
  }
  return acc;
}

Integer Ryser01::compute(const std::uint8_t* entries) {
  const int n = n_;
  for (int j = 0; j < n; ++j) {
    int cnt = 0;
    std::uint8_t* rows = &colrows_[static_cast<std::size_t>(j) * n];
    for (int i = 0; i < n; ++i)
      if (entries[static_cast<std::size_t>(i) * n + j])
        rows[cnt++] = static_cast<std::uint8_t>(i);
    if (cnt == 0) return 0;  // zero column
    colcnt_[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(cnt);
  }
  if (small_) {
    const std::uint64_t total = (std::uint64_t{1} << n) - 1;
    return Integer(run_range_small(1, total + 1));
  }
  IntegerMatrix m(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      m.set(i, j, entries[static_cast<std::size_t>(i - 1) * n + (j - 1)]);
  return permanent_ryser(m);
}

Integer permanent_int64(int n, const std::int64_t* entries) {
  if (n < 1 || n > 30) throw std::invalid_argument("permanent_int64: bad size");
  Integer bound = 1;
  for (int i = 0; i < n; ++i) {
    Integer rs = 0;
    for (int j = 0; j < n; ++j) {
      const std::int64_t v = entries[static_cast<std::size_t>(i) * n + j];
      if (v < 0) throw std::invalid_argument("permanent_int64: negative entry");
      rs += v;
    }
    bound *= rs;
  }
  if (bound == 0) return 0;
  if ((bound << n) < kInt64Safe) {
    std::vector<std::int64_t> colmajor(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        colmajor[static_cast<std::size_t>(j) * n + i] =
            entries[static_cast<std::size_t>(i) * n + j];
    const std::uint64_t total = (std::uint64_t{1} << n) - 1;
    return Integer(ryser_range<std::int64_t>(n, colmajor, 1, total + 1));
  }
  IntegerMatrix m(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      m.set(i, j, entries[static_cast<std::size_t>(i - 1) * n + (j - 1)]);
  return permanent_ryser(m);
}

UnitRowMerge merge_columns_by_unit_row(const IntegerMatrix& a, int row) {
  require_square(a, "merge_columns_by_unit_row");
  const int n = a.rows();
  if (row < 1 || row > n)
    throw std::out_of_range("merge_columns_by_unit_row: bad row");
  std::vector<int> support;
  for (int j = 1; j <= n; ++j) {
    const Integer& v = a.at(row, j);
    if (v == 1)
      support.push_back(j);
    else if (v != 0)
      throw std::invalid_argument(
          "merge_columns_by_unit_row: row must be 0/1-valued");
  }
  if (support.empty()) return {.zero_permanent = true, .matrix = std::nullopt};
  if (support.size() > 2)
    throw std::invalid_argument(
        "merge_columns_by_unit_row: row weight " +
        std::to_string(support.size()) +
        " admits no square collapse (weight must be 1 or 2)");
  if (n < 2)
    throw std::invalid_argument("merge_columns_by_unit_row: matrix too small");
  const int j1 = support.front();
  const int j2 = support.back();  // == j1 for weight 1
  IntegerMatrix out(n - 1, n - 1);
  int oi = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == row) continue;
    ++oi;
    int oj = 0;
    for (int j = 1; j <= n; ++j) {
      if (j == j2 && j2 != j1) continue;
      ++oj;
      if (j == j1 && j2 != j1)
        out.set(oi, oj, a.at(i, j1) + a.at(i, j2));
      else if (j == j1)
        --oj;  // weight 1: the column is deleted outright
      else
        out.set(oi, oj, a.at(i, j));
    }
  }
  return {.zero_permanent = false, .matrix = std::move(out)};
}

Integer perm_subset_expansion(const IntegerMatrix& a, const IntegerMatrix& b,
                              int workers) {
  require_square(a, "perm_subset_expansion");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("perm_subset_expansion: shape mismatch");
  const int n = a.rows();
  if (n > 12)
    throw std::invalid_argument("perm_subset_expansion: guarded at n <= 12");
  Integer total = 0;
  IntegerMatrix c(n, n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (int j = 1; j <= n; ++j) {
      const bool from_a = mask >> (j - 1) & 1u;
      for (int i = 1; i <= n; ++i)
        c.set(i, j, from_a ? a.at(i, j) : b.at(i, j));
    }
    total += permanent_ryser(c, workers);
  }
  return total;
}

namespace {

// Mutable view of the block matrix while collapsing.
struct BlockWork {
  int bm, bn, M;
  std::vector<std::optional<IntegerMatrix>> cells;
  std::optional<IntegerMatrix>& cell(int i, int j) {
    return cells[static_cast<std::size_t>(i) * bn + j];  // 0-based here
  }
  void drop_row(int i) {
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(i) * bn,
                cells.begin() + static_cast<std::ptrdiff_t>(i + 1) * bn);
    --bm;
  }
  void drop_col(int j) {
    for (int i = bm - 1; i >= 0; --i)
      cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(i) * bn + j);
    --bn;
  }
  IntegerMatrix expand() const {
    BlockMatrix b(bm, bn, M);
    for (int i = 0; i < bm; ++i)
      for (int j = 0; j < bn; ++j)
        if (cells[static_cast<std::size_t>(i) * bn + j])
          b.set_cell(i + 1, j + 1, *cells[static_cast<std::size_t>(i) * bn + j]);
    return b.expand();
  }
};

IntegerMatrix times_transpose(const IntegerMatrix& x, const IntegerMatrix& p) {
  return multiply(x, transpose(p));
}

// Attempts one collapse; returns false when no row/column fits the pattern.
bool collapse_once(BlockWork& w) {
  // Block rows holding only zeros and 1..2 permutation blocks.
  for (int i = 0; i < w.bm; ++i) {
    std::vector<int> supp;
    bool ok = true;
    for (int j = 0; j < w.bn && ok; ++j) {
      auto& c = w.cell(i, j);
      if (!c) continue;
      if (!c->is_permutation()) {
        ok = false;
        break;
      }
      supp.push_back(j);
    }
    if (!ok || supp.empty() || supp.size() > 2) continue;
    if (supp.size() == 1) {
      // Each scalar row of this block row has weight one: the block row
      // and its support column both go away.
      w.drop_row(i);
      w.drop_col(supp[0]);
      return true;
    }
    const int j1 = supp[0], j2 = supp[1];
    const IntegerMatrix p1 = *w.cell(i, j1), p2 = *w.cell(i, j2);
    for (int r = 0; r < w.bm; ++r) {
      if (r == i) continue;
      const auto& c1 = w.cell(r, j1);
      const auto& c2 = w.cell(r, j2);
      std::optional<IntegerMatrix> merged;
      if (c1 && c2)
        merged = add(times_transpose(*c1, p1), times_transpose(*c2, p2));
      else if (c1)
        merged = times_transpose(*c1, p1);
      else if (c2)
        merged = times_transpose(*c2, p2);
      w.cell(r, j1) = std::move(merged);
    }
    w.drop_col(j2);
    w.drop_row(i);
    return true;
  }
  // Column analogue: merges two block rows.
  for (int j = 0; j < w.bn; ++j) {
    std::vector<int> supp;
    bool ok = true;
    for (int i = 0; i < w.bm && ok; ++i) {
      auto& c = w.cell(i, j);
      if (!c) continue;
      if (!c->is_permutation()) {
        ok = false;
        break;
      }
      supp.push_back(i);
    }
    if (!ok || supp.empty() || supp.size() > 2) continue;
    if (supp.size() == 1) {
      w.drop_row(supp[0]);
      w.drop_col(j);
      return true;
    }
    const int i1 = supp[0], i2 = supp[1];
    const IntegerMatrix p1t = transpose(*w.cell(i1, j));
    const IntegerMatrix p2t = transpose(*w.cell(i2, j));
    for (int c = 0; c < w.bn; ++c) {
      if (c == j) continue;
      const auto& c1 = w.cell(i1, c);
      const auto& c2 = w.cell(i2, c);
      std::optional<IntegerMatrix> merged;
      if (c1 && c2)
        merged = add(multiply(p1t, *c1), multiply(p2t, *c2));
      else if (c1)
        merged = multiply(p1t, *c1);
      else if (c2)
        merged = multiply(p2t, *c2);
      w.cell(i1, c) = std::move(merged);
    }
    w.drop_col(j);
    w.drop_row(i2);
    return true;
  }
  return false;
}

}  // namespace

BlockReduction reduce_block_identity(const BlockMatrix& blocks) {
  if (blocks.block_rows() != blocks.block_cols())
    throw std::invalid_argument(
        "reduce_block_identity: block structure must be square");
  BlockWork w{blocks.block_rows(), blocks.block_cols(), blocks.block_size(), {}};
  w.cells.reserve(static_cast<std::size_t>(w.bm) * w.bn);
  for (int i = 1; i <= w.bm; ++i)
    for (int j = 1; j <= w.bn; ++j) w.cells.push_back(blocks.cell(i, j));
  int collapses = 0;
  while (w.bm > 1) {
    if (!collapse_once(w)) break;
    ++collapses;
  }
  if (w.bm == 1 && w.bn == 1) {
    IntegerMatrix out =
        w.cell(0, 0) ? *w.cell(0, 0) : IntegerMatrix(w.M, w.M);
    return {.matrix = std::move(out), .fully_reduced = true, .collapses = collapses};
  }
  return {.matrix = w.expand(), .fully_reduced = false, .collapses = collapses};
}

BlockPermanentResult block_matrix_permanent(const BlockMatrix& blocks) {
  if (blocks.block_rows() != blocks.block_cols())
    throw std::invalid_argument(
        "block_matrix_permanent: block structure must be square");
  const int m = blocks.block_rows();
  const int M = blocks.block_size();
  IntegerMatrix total(M, M);
  std::vector<int> cols(static_cast<std::size_t>(m));
  std::iota(cols.begin(), cols.end(), 1);
  do {
    std::optional<IntegerMatrix> prod;
    bool zero = false;
    for (int i = 1; i <= m && !zero; ++i) {
      const auto& c = blocks.cell(i, cols[static_cast<std::size_t>(i - 1)]);
      if (!c)
        zero = true;
      else
        prod = prod ? multiply(*prod, *c) : *c;
    }
    if (!zero && prod) total = add(total, *prod);
  } while (std::next_permutation(cols.begin(), cols.end()));

  bool commuting = true;
  std::vector<const IntegerMatrix*> nonzero;
  for (int i = 1; i <= m && commuting; ++i)
    for (int j = 1; j <= m; ++j)
      if (blocks.cell(i, j)) nonzero.push_back(&*blocks.cell(i, j));
  for (std::size_t x = 0; x < nonzero.size() && commuting; ++x)
    for (std::size_t y = x + 1; y < nonzero.size() && commuting; ++y)
      if (multiply(*nonzero[x], *nonzero[y]) != multiply(*nonzero[y], *nonzero[x]))
        commuting = false;
  return {.matrix = std::move(total), .commuting = commuting};
}

}  // namespace betheperm
