#include "betheperm/checks.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "betheperm/bethe_free_energy.hpp"
#include "betheperm/permanent.hpp"
#include "betheperm/pseudocodewords.hpp"

namespace betheperm {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void record(CheckReport& report, bool pass, const std::string& witness) {
  ++report.instances;
  if (pass)
    ++report.passes;
  else
    report.failures.push_back({witness});
}

std::string rat(const Rational& r) { return to_fraction_string(r); }

BinaryMatrix all_ones(int m, int n) {
  BinaryMatrix b(m, n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) b.set(i, j, 1);
  return b;
}

}  // namespace

std::string CheckReport::summary() const {
  std::ostringstream out;
  out << name << ": " << passes << "/" << instances << " instances pass";
  if (!failures.empty()) out << ", " << failures.size() << " FAILURES";
  if (!findings.empty()) out << ", " << findings.size() << " findings";
  if (!notes.empty()) out << ", " << notes.size() << " notes";
  out << " (seed " << seed << ", " << to_float_string(wall_seconds) << " s)";
  return out.str();
}

CheckReport check_corollary_q(int m_max, int M_max, const EnumerationBudget& budget,
                              int workers) {
  Stopwatch watch;
  CheckReport report;
  report.name = "corollary-q";
  for (int m = 2; m <= m_max; ++m) {
    for (int M = 1; M <= M_max; ++M) {
      const Rational lhs = q(m, M, budget, workers);
      const Rational rhs =
          Rational(ipow(Integer(m), static_cast<unsigned>(M))) *
          q(m - 1, M, budget, workers);
      std::ostringstream w;
      w << "m=" << m << " M=" << M << ": q(m,M)=" << rat(lhs)
        << " vs m^M*q(m-1,M)=" << rat(rhs);
      record(report, lhs <= rhs, w.str());
    }
  }
  report.wall_seconds = watch.seconds();
  return report;
}

CheckReport check_t_inequality(int m_max, int M_max, const EnumerationBudget& budget,
                               int workers) {
  Stopwatch watch;
  CheckReport report;
  report.name = "t-inequality";
  for (int m = 2; m <= m_max; ++m) {
    for (int M = 1; M <= M_max; ++M) {
      const Rational lhs =
          m == 3 ? t3(M, budget, workers) : t(m, M, budget, workers);
      const Rational rhs =
          Rational(ipow(Integer(m - 1), static_cast<unsigned>(M))) *
          q(m - 1, M, budget, workers);
      std::ostringstream w;
      w << "m=" << m << " M=" << M << ": t(m,M)=" << rat(lhs)
        << " vs (m-1)^M*q(m-1,M)=" << rat(rhs);
      record(report, lhs <= rhs, w.str());
    }
  }
  report.wall_seconds = watch.seconds();
  return report;
}

CheckReport check_that_case(int M_max, const EnumerationBudget& budget,
                            int workers) {
  Stopwatch watch;
  CheckReport report;
  report.name = "that-case";
  for (int M = 1; M <= M_max; ++M) {
    const Rational value = that3(M, budget, workers);
    const double lhs = mth_root(value, static_cast<unsigned>(M));
    const double rhs =
        1.0 + std::pow(static_cast<double>(M + 1), 1.0 / static_cast<double>(M));
    {
      std::ostringstream w;
      w << "M=" << M << ": that3^(1/M)=" << to_float_string(lhs)
        << " vs 1+(M+1)^(1/M)=" << to_float_string(rhs)
        << " slack=" << to_float_string(rhs - lhs);
      record(report, lhs <= rhs + 1e-12, w.str());
    }
    {
      const Integer bound = (Integer(1) << static_cast<unsigned>(M + 1)) - 1;
      std::ostringstream w;
      w << "M=" << M << ": that3=" << rat(value) << " vs 2^(M+1)-1=" << bound.str();
      record(report, value <= Rational(bound), w.str());
    }
  }
  report.wall_seconds = watch.seconds();
  return report;
}

namespace {

// Average permanent of the column-restricted grid over every assignment of
// the cells that appear in the restriction (an all-of-[M] complement leaves
// its block column empty, so those cells carry no permutation to enumerate).
// The averages are the right objects here: with empty complements the two
// sides enumerate different family sizes.
Rational partition_average(int m, int M, const std::vector<IndexSet>& beta,
                           const EnumerationBudget& budget, int workers) {
  int width = 0;
  for (const IndexSet& b : beta) width += b.size();
  if (width != (m - 1) * M)
    throw std::invalid_argument("partition_average: not a complement-partition");
  std::vector<int> visible;
  for (int j = 1; j <= m; ++j)
    if (!beta[static_cast<std::size_t>(j - 1)].empty()) visible.push_back(j);
  LiftingEnumerator stream(m - 1, static_cast<int>(visible.size()), M, budget);
  LiftingAssignment assignment;
  Integer total = 0;
  const int n = (m - 1) * M;
  IntegerMatrix mat(n, n);
  while (stream.next(assignment)) {
    int col = 0;
    for (std::size_t vj = 0; vj < visible.size(); ++vj) {
      const int j = visible[vj];
      for (int c : beta[static_cast<std::size_t>(j - 1)]) {
        ++col;
        for (int bi = 1; bi <= m - 1; ++bi) {
          const Permutation& p = assignment.cell(bi, static_cast<int>(vj) + 1);
          for (int r = 1; r <= M; ++r)
            mat.set((bi - 1) * M + r, col,
                    p[static_cast<std::size_t>(r - 1)] == c ? 1 : 0);
        }
      }
    }
    total += permanent(mat, workers);
  }
  return Rational(total, stream.total());
}

Rational full_grid_average(int rows, int cols, int M,
                           const EnumerationBudget& budget, int workers) {
  LiftingEnumerator stream(rows, cols, M, budget);
  LiftingAssignment assignment;
  Integer total = 0;
  const BinaryMatrix ones = all_ones(rows, cols);
  while (stream.next(assignment)) total += permanent(lift(ones, assignment), workers);
  return Rational(total, stream.total());
}

}  // namespace

CheckReport check_lemma_partition(int m, int M, int trials, std::uint64_t seed,
                                  const EnumerationBudget& budget, int workers) {
  Stopwatch watch;
  CheckReport report;
  report.name = "partition-lemma";
  report.seed = seed;
  if (m < 2) throw std::invalid_argument("check_lemma_partition: m >= 2");
  const Rational rhs = full_grid_average(m - 1, m - 1, M, budget, workers);
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    // Random complement-partition: each element of [M] lands in one part.
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(m));
    if (trial == 0) {
      // Degenerate split first: everything in part one.
      for (int e = 1; e <= M; ++e) parts[0].push_back(e);
    } else {
      for (int e = 1; e <= M; ++e)
        parts[rng() % static_cast<std::uint64_t>(m)].push_back(e);
    }
    std::vector<IndexSet> beta;
    std::ostringstream desc;
    for (int j = 0; j < m; ++j) {
      std::vector<int> complement;
      for (int e = 1; e <= M; ++e) {
        bool in_part = false;
        for (int x : parts[static_cast<std::size_t>(j)])
          if (x == e) in_part = true;
        if (!in_part) complement.push_back(e);
      }
      beta.emplace_back(complement);
      desc << (j ? " " : "") << "beta" << j + 1 << "=" << beta.back().to_string();
    }
    const Rational lhs = partition_average(m, M, beta, budget, workers);
    std::ostringstream w;
    w << "m=" << m << " M=" << M << " " << desc.str() << ": lhs=" << rat(lhs)
      << " rhs=" << rat(rhs);
    record(report, lhs <= rhs, w.str());
  }
  report.wall_seconds = watch.seconds();
  return report;
}

CheckReport check_reduction_equivalence(int trials, int n_max, std::uint64_t seed,
                                        double tol, int workers) {
  (void)workers;
  Stopwatch watch;
  CheckReport report;
  report.name = "reduction-equiv";
  report.seed = seed;
  if (n_max < 3 || n_max > 6)
    throw std::invalid_argument("check_reduction_equivalence: n_max in [3,6]");
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    const int m = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(n_max - 2));
    const int n = m + 1;
    // First column [1 0 ... 0]^T, the rest random without zero rows/columns.
    const BinaryMatrix inner = random_parity_check(m, n - 1, rng);
    BinaryMatrix h(m, n);
    h.set(1, 1, 1);
    for (int i = 1; i <= m; ++i)
      for (int j = 2; j <= n; ++j) h.set(i, j, inner.at(i, j - 1));

    const PseudoVector omega = bethe_perm_vector(h, IndexSet::full(n), tol);
    const IndexSet supp1 = row_support(h, 1);
    double rhs3 = 0.0;
    for (int l : supp1)
      if (l != 1) rhs3 += omega.at(l);
    const double slack3 = rhs3 - omega.at(1);

    const BinaryMatrix t_mat = columns(h, IndexSet::full(n).minus(1));
    const CofactorExpansionReport expansion =
        bethe_cofactor_inequality(t_mat, 1, tol);

    const double scale = std::max(1.0, std::abs(expansion.lhs) + expansion.rhs);
    const double agree_tol = 1e-6 * scale;
    std::ostringstream w;
    w << "trial " << trial << " m=" << m << " H=" << serialize_dense(h)
      << "slack3=" << to_float_string(slack3)
      << " slack4=" << to_float_string(expansion.slack);
    record(report, std::abs(slack3 - expansion.slack) <= agree_tol, w.str());

    // The inequality itself concerns the open question: violations become
    // findings after a re-run at a tighter tolerance.
    const double threshold =
        10.0 * std::max(tol, expansion.lhs_gap + expansion.rhs_gap);
    if (expansion.slack < -threshold) {
      const CofactorExpansionReport retry =
          bethe_cofactor_inequality(t_mat, 1, tol / 100.0);
      const double retry_threshold =
          10.0 * std::max(tol / 100.0, retry.lhs_gap + retry.rhs_gap);
      if (retry.slack < -retry_threshold) {
        std::ostringstream f;
        f << "possible counterexample: H=" << serialize_dense(h)
          << "slack=" << to_float_string(retry.slack)
          << " certificates=" << to_float_string(retry.lhs_gap + retry.rhs_gap);
        report.findings.push_back(f.str());
      }
    }
  }
  report.wall_seconds = watch.seconds();
  return report;
}

ExponentMatrix motivation_exponents() {
  return parse_exponents(
      "3 4 3\n"
      "0 0 0 0\n"
      "-1 0 1 2\n"
      "-1 0 2 1\n");
}

BinaryMatrix motivation_protomatrix() {
  return BinaryMatrix::from_rows({{1, 1, 1, 1}, {0, 1, 1, 1}, {0, 1, 1, 1}});
}

BinaryMatrix example_2x4_matrix() {
  return BinaryMatrix::from_rows({{1, 1, 1, 0}, {0, 1, 1, 1}});
}

bool mod2_syndrome_zero(const BinaryMatrix& h, const std::vector<int>& v) {
  if (static_cast<int>(v.size()) != h.cols())
    throw std::invalid_argument("mod2_syndrome_zero: length mismatch");
  for (int i = 1; i <= h.rows(); ++i) {
    int s = 0;
    for (int j = 1; j <= h.cols(); ++j)
      s ^= h.at(i, j) & (v[static_cast<std::size_t>(j - 1)] & 1);
    if (s != 0) return false;
  }
  return true;
}

BinaryMatrix random_parity_check(int rows, int cols, std::mt19937_64& rng,
                                 double density) {
  const std::uint64_t cut =
      static_cast<std::uint64_t>(density * 1048576.0);
  while (true) {
    BinaryMatrix h(rows, cols);
    for (int i = 1; i <= rows; ++i)
      for (int j = 1; j <= cols; ++j)
        h.set(i, j, (rng() % 1048576) < cut ? 1 : 0);
    bool ok = true;
    for (int i = 1; i <= rows && ok; ++i)
      if (row_support(h, i).empty()) ok = false;
    for (int j = 1; j <= cols && ok; ++j) {
      bool any = false;
      for (int i = 1; i <= rows; ++i)
        if (h.at(i, j) != 0) any = true;
      if (!any) ok = false;
    }
    if (ok) return h;
  }
}

namespace {

BlockMatrix motivation_blocks(const ExponentMatrix& e, const IndexSet& block_cols) {
  BlockMatrix out(e.rows, block_cols.size(), e.lift_size);
  for (int i = 1; i <= e.rows; ++i) {
    for (int k = 1; k <= block_cols.size(); ++k) {
      const int s = e.at(i, block_cols.at(k));
      if (s >= 0)
        out.set_cell(i, k, IntegerMatrix::circulant_shift(e.lift_size, s));
    }
  }
  return out;
}

IndexSet flat_columns(const IndexSet& block_cols, int M) {
  std::vector<int> cols;
  for (int b : block_cols)
    for (int r = 1; r <= M; ++r) cols.push_back((b - 1) * M + r);
  return IndexSet(std::move(cols));
}

}  // namespace

CheckReport reproduce_example_motivation(int workers) {
  Stopwatch watch;
  CheckReport report;
  report.name = "motivation";
  const ExponentMatrix exps = motivation_exponents();
  const BinaryMatrix h = expand_exponents(exps);
  const BinaryMatrix theta = motivation_protomatrix();
  const int M = exps.lift_size;

  // Codeword from a weight-one selector column.
  std::vector<int> v;
  for (int rep = 0; rep < 4; ++rep) {
    v.push_back(0);
    v.push_back(1);
    v.push_back(1);
  }
  record(report, mod2_syndrome_zero(h, v), "syndrome of (0,1,1|...) not zero");

  // Block-permanent vector w and the deleted-block-column vector.
  const IndexSet all_blocks = IndexSet::full(exps.cols);
  std::vector<Rational> w_values, wt_values;
  bool commuting = true;
  for (int i = 1; i <= exps.cols; ++i) {
    const IndexSet rest = all_blocks.minus(i);
    const BlockPermanentResult d = block_matrix_permanent(motivation_blocks(exps, rest));
    commuting = commuting && d.commuting;
    w_values.emplace_back(permanent(d.matrix, workers));
    const BinaryMatrix sub = columns(h, flat_columns(rest, M));
    wt_values.emplace_back(permanent(IntegerMatrix::from_binary(sub), workers));
  }
  const PseudoVector w = PseudoVector::from_exact(w_values, VectorOrigin::raw);
  const PseudoVector wt = PseudoVector::from_exact(wt_values, VectorOrigin::raw);
  record(report, commuting, "circulant blocks flagged as non-commuting");

  const PseudoVector w_expected = PseudoVector::from_exact(
      {Rational(54), Rational(2), Rational(2), Rational(2)});
  record(report, w.exact_values == w_expected.exact_values,
         "block-permanent vector: computed " + w.to_string() +
             ", reference (54, 2, 2, 2)");

  // The first block-permanent matrix itself: 3P + 3P^2.
  {
    const BlockPermanentResult d1 =
        block_matrix_permanent(motivation_blocks(exps, all_blocks.minus(1)));
    const IntegerMatrix expected =
        add(scale(IntegerMatrix::circulant_shift(M, 1), 3),
            scale(IntegerMatrix::circulant_shift(M, 2), 3));
    record(report, d1.matrix == expected,
           "ring permanent of the deleted-first-block grid is not 3P+3P^2");
  }

  // Reference vector for the deleted-block-column permanents. The published
  // value for the first component is 48; the displayed matrix evaluates to
  // 42 (Ryser and full permutation enumeration agree), so this comparison
  // records the discrepancy.
  {
    const BinaryMatrix sub1 = columns(h, flat_columns(all_blocks.minus(1), M));
    const Integer by_naive = permanent_naive(IntegerMatrix::from_binary(sub1));
    const Integer by_ryser = permanent_ryser(IntegerMatrix::from_binary(sub1));
    std::ostringstream wit;
    wit << "deleted-block-column vector: computed " << wt.to_string()
        << ", reference (48, 2, 2, 2); first component recomputed two ways: "
        << "ryser=" << by_ryser.str() << ", enumeration=" << by_naive.str();
    const bool matches_reference =
        wt.exact_values == std::vector<Rational>{Rational(48), Rational(2),
                                                 Rational(2), Rational(2)};
    record(report, matches_reference, wit.str());
    if (!matches_reference)
      report.notes.push_back(
          "reference first component 48 is inconsistent with the displayed "
          "matrix; both exact algorithms give " + by_ryser.str());
  }

  // Cone verdicts for the protomatrix.
  record(report, !in_fundamental_cone(theta, w).member,
         "block-permanent vector should violate the cone");
  const PseudoVector w_root = root_M_scale(w, M);
  record(report, in_fundamental_cone(theta, w_root, 1e-9).member,
         "componentwise cube root should satisfy the cone");
  const PseudoVector unscaled = PseudoVector::from_doubles({3.0, 1.0, 1.0, 1.0});
  record(report, proportional(w_root, unscaled, 1e-9),
         "cube-rooted vector not proportional to (3,1,1,1)");
  const PseudoVector wt_root = root_M_scale(wt, M);
  record(report, in_fundamental_cone(theta, wt_root, 1e-9).member,
         "cube root of the deleted-column vector should satisfy the cone");

  // Pseudo-weights.
  {
    const PseudoWeight w3 = awgnc_pseudo_weight(PseudoVector::from_exact(
        {Rational(3), Rational(1), Rational(1), Rational(1)}));
    record(report, w3.exact && w3.exact_value == 3,
           "weight of (3,1,1,1) is " + rat(w3.exact_value) + ", expected 3");
    const PseudoWeight w4 = awgnc_pseudo_weight(PseudoVector::from_exact(
        {Rational(1), Rational(1), Rational(1), Rational(1)}));
    record(report, w4.exact && w4.exact_value == 4,
           "weight of (1,1,1,1) is " + rat(w4.exact_value) + ", expected 4");
    const PseudoVector printed_root = root_M_scale(
        PseudoVector::from_exact({Rational(48), Rational(2), Rational(2),
                                  Rational(2)}),
        M);
    const PseudoWeight w58 = awgnc_pseudo_weight(printed_root);
    report.notes.push_back(
        "reference weight 3.58 for the rooted (48,2,2,2) vector; the ratio "
        "formula gives " + to_float_string(w58.value));
  }
  report.wall_seconds = watch.seconds();
  return report;
}

CheckReport reproduce_table1(double tol, int workers) {
  Stopwatch watch;
  CheckReport report;
  report.name = "table1";
  const BinaryMatrix h = expand_exponents(motivation_exponents());
  const std::vector<std::vector<int>> betas = {
      {1, 2, 3, 4, 5, 6, 7, 8, 9, 10},  {1, 2, 3, 4, 5, 6, 7, 8, 9, 11},
      {1, 2, 3, 4, 5, 6, 7, 8, 9, 12},  {1, 2, 3, 4, 5, 6, 7, 8, 10, 12},
      {1, 2, 3, 4, 5, 6, 7, 8, 11, 12}};
  const int perm_rows[5][12] = {{6, 4, 4, 2, 2, 2, 2, 2, 2, 2, 0, 0},
                                {4, 6, 4, 2, 2, 2, 2, 2, 2, 0, 2, 0},
                                {4, 4, 6, 2, 2, 2, 2, 2, 2, 0, 0, 2},
                                {4, 4, 4, 0, 2, 2, 2, 2, 0, 2, 0, 2},
                                {4, 4, 4, 2, 0, 2, 2, 2, 0, 0, 2, 2}};
  const double bethe_rows[5][12] = {
      {2.3704, 1.6875, 1.6875, 1.1250, 1.1250, 1.1250, 1.1250, 1.1250, 1.1250,
       1.0000, 0, 0},
      {1.6875, 2.3704, 1.6875, 1.1250, 1.1250, 1.1250, 1.1250, 1.1250, 1.1250, 0,
       1.0000, 0},
      {1.6875, 1.6875, 2.3704, 1.1250, 1.1250, 1.1250, 1.1250, 1.1250, 1.1250, 0,
       0, 1.0000},
      {1.6875, 1.6875, 1.6875, 0.0000, 1.1250, 1.1250, 1.1250, 1.1250, 0, 1.1250,
       0, 1.1250},
      {1.6875, 1.6875, 1.6875, 1.1250, 0.0000, 1.1250, 1.1250, 1.1250, 0, 0,
       1.1250, 1.1250}};
  const double printed_perm_weights[5] = {8.1667, 8.1667, 8.1667, 8.0000, 8.0000};
  const double printed_bethe_weights[5] = {8.8947, 8.8947, 8.8947, 8.0000, 8.0000};

  for (int row = 0; row < 5; ++row) {
    const IndexSet beta(betas[static_cast<std::size_t>(row)]);
    const PseudoVector pv = perm_vector(h, beta, workers);
    bool perm_ok = true;
    for (int j = 1; j <= 12; ++j)
      if (pv.exact_at(j) != perm_rows[row][j - 1]) perm_ok = false;
    record(report, perm_ok,
           "permanent row " + std::to_string(row + 1) + ": computed " +
               pv.to_string());

    const PseudoWeight pw = awgnc_pseudo_weight(pv);
    record(report,
           std::abs(pw.value - printed_perm_weights[row]) <= 1e-3,
           "permanent row " + std::to_string(row + 1) + " weight " +
               to_float_string(pw.value) + " vs printed " +
               to_float_string(printed_perm_weights[row]));

    const PseudoVector bv = bethe_perm_vector(h, beta, 1e-6);
    bool bethe_ok = true;
    std::ostringstream bw;
    bw << "limit row " << row + 1 << ": computed " << bv.to_string()
       << " vs printed (";
    for (int j = 1; j <= 12; ++j) {
      if (j > 1) bw << ", ";
      bw << bethe_rows[row][j - 1];
      if (std::abs(bv.at(j) - bethe_rows[row][j - 1]) > tol) bethe_ok = false;
    }
    bw << ")";
    record(report, bethe_ok, bw.str());

    const PseudoWeight bweight = awgnc_pseudo_weight(bv);
    report.notes.push_back("limit row " + std::to_string(row + 1) +
                           " weight by formula " + to_float_string(bweight.value) +
                           ", printed " +
                           to_float_string(printed_bethe_weights[row]));
  }
  // Evidence for the recurring 1.1250-vs-1.0 disagreement: the exact
  // degree-M averages of one such component. Its support reduces to an
  // eight-cycle, the averages are M+1, and their M-th roots fall to one,
  // which is the value the minimizer reports.
  {
    const IndexSet beta(betas[0]);
    const BinaryMatrix component = columns(h, beta.minus(4));
    std::string evidence = "the position-4 component of row 1 has exact "
                           "degree-M averages";
    for (int M = 1; M <= 2; ++M)
      evidence += " " + to_fraction_string(
                            degree_M_bethe_perm_reduced(component, M).mean);
    evidence += " (M = 1, 2), matching the eight-cycle reduction M+1; the "
                "limit of their roots is 1, not the printed 1.1250";
    report.notes.push_back(evidence);
  }
  report.wall_seconds = watch.seconds();
  return report;
}

namespace {

struct CorollaryCase {
  BinaryMatrix h;
  // expected degree-M components as symbols resolved per M
  enum class Component { one, zero, root_q2, root_q3, root_t3, root_that3 };
  std::vector<Component> expected;
  std::vector<double> expected_limit;  // limit values per component
  bool positional;  // compare componentwise (else as sorted multisets)
};

double resolve(CorollaryCase::Component c, int M, const EnumerationBudget& budget,
               int workers) {
  switch (c) {
    case CorollaryCase::Component::one:
      return 1.0;
    case CorollaryCase::Component::zero:
      return 0.0;
    case CorollaryCase::Component::root_q2:
      return mth_root(q(2, M, budget, workers), static_cast<unsigned>(M));
    case CorollaryCase::Component::root_q3:
      return mth_root(q(3, M, budget, workers), static_cast<unsigned>(M));
    case CorollaryCase::Component::root_t3:
      return mth_root(t3(M, budget, workers), static_cast<unsigned>(M));
    case CorollaryCase::Component::root_that3:
      return mth_root(that3(M, budget, workers), static_cast<unsigned>(M));
  }
  return 0.0;
}

}  // namespace

CheckReport reproduce_small_corollaries(const EnumerationBudget& budget,
                                        int workers) {
  Stopwatch watch;
  CheckReport report;
  report.name = "small-corollaries";
  using C = CorollaryCase::Component;

  std::vector<CorollaryCase> cases;
  // 2 x 3 patterns.
  cases.push_back({all_ones(2, 3),
                   {C::root_q2, C::root_q2, C::root_q2},
                   {1, 1, 1},
                   true});
  // Catalogued as (1, 1, (M+1)^(1/M)); with the zero in position (2,1) the
  // large component sits first, so this case compares sorted multisets.
  cases.push_back({BinaryMatrix::from_rows({{1, 1, 1}, {0, 1, 1}}),
                   {C::root_q2, C::one, C::one},
                   {1, 1, 1},
                   false});
  cases.push_back({BinaryMatrix::from_rows({{1, 0, 1}, {1, 1, 0}}),
                   {C::one, C::one, C::one},
                   {1, 1, 1},
                   true});
  cases.push_back({BinaryMatrix::from_rows({{1, 1, 1}, {1, 0, 0}}),
                   {C::zero, C::one, C::one},
                   {0, 1, 1},
                   true});
  cases.push_back({BinaryMatrix::from_rows({{0, 1, 1}, {1, 0, 0}}),
                   {C::zero, C::one, C::one},
                   {0, 1, 1},
                   true});
  // 3 x 4 patterns.
  cases.push_back({BinaryMatrix::from_rows({{1, 1, 1, 1}, {0, 1, 1, 1}, {0, 1, 1, 1}}),
                   {C::root_q3, C::root_q2, C::root_q2, C::root_q2},
                   {64.0 / 27.0, 1, 1, 1},
                   true});
  cases.push_back({BinaryMatrix::from_rows({{1, 1, 1, 0}, {0, 1, 1, 1}, {0, 1, 1, 1}}),
                   {C::root_t3, C::root_q2, C::root_q2, C::root_q2},
                   {-1, 1, 1, 1},  // limit of the first component not catalogued
                   true});
  cases.push_back({BinaryMatrix::from_rows({{1, 1, 1, 0}, {0, 1, 0, 1}, {0, 1, 1, 1}}),
                   {C::root_that3, C::one, C::root_q2, C::one},
                   {-1, 1, 1, 1},
                   true});
  cases.push_back({BinaryMatrix::from_rows({{1, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}}),
                   {C::root_q2, C::one, C::one, C::one},
                   {1, 1, 1, 1},
                   true});

  for (std::size_t idx = 0; idx < cases.size(); ++idx) {
    const CorollaryCase& c = cases[idx];
    const IndexSet beta = IndexSet::full(c.h.cols());
    for (int M = 1; M <= 3; ++M) {
      const PseudoVector v = bethe_perm_vector_M(c.h, beta, M, budget, workers);
      std::vector<double> got, want;
      for (int j = 1; j <= v.size(); ++j) got.push_back(v.at(j));
      for (const auto comp : c.expected)
        want.push_back(resolve(comp, M, budget, workers));
      if (!c.positional) {
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
      }
      bool match = got.size() == want.size();
      for (std::size_t k = 0; match && k < got.size(); ++k)
        if (std::abs(got[k] - want[k]) > 1e-12) match = false;
      std::ostringstream wtn;
      wtn << "case " << idx + 1 << " M=" << M << ": computed " << v.to_string();
      record(report, match, wtn.str());
      record(report, in_fundamental_cone(c.h, v, 1e-9).member,
             "case " + std::to_string(idx + 1) + " M=" + std::to_string(M) +
                 ": degree vector not in the cone: " + v.to_string());
    }
    // Limit vector: cone membership always, values where catalogued.
    const PseudoVector limit = bethe_perm_vector(c.h, beta, 1e-8);
    record(report, in_fundamental_cone(c.h, limit, 1e-7).member,
           "case " + std::to_string(idx + 1) +
               ": limit vector not in the cone: " + limit.to_string());
    bool limit_ok = true;
    for (int j = 1; j <= limit.size(); ++j) {
      const double want = c.expected_limit[static_cast<std::size_t>(j - 1)];
      if (want >= 0.0 && std::abs(limit.at(j) - want) > 1e-5) limit_ok = false;
    }
    record(report, limit_ok,
           "case " + std::to_string(idx + 1) +
               ": limit vector " + limit.to_string() + " off the catalogued values");
  }
  report.wall_seconds = watch.seconds();
  return report;
}

}  // namespace betheperm
