// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its tolerance and, where stated, a wall
// clock budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "betheperm/bethe_free_energy.hpp"
#include "betheperm/checks.hpp"
#include "betheperm/lifting.hpp"
#include "betheperm/permanent.hpp"
#include "betheperm/pseudocodewords.hpp"

using namespace betheperm;
using json = nlohmann::json;

namespace {

int failures_total = 0;

struct Criterion {
  std::string label;
  double time_limit_seconds = 0.0;  // 0 = no limit
  std::vector<std::string> details;
  bool ok = true;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      details.push_back("failed: " + what);
    }
  }
  void note(const std::string& what) { details.push_back("note: " + what); }
};

void run_criterion(int number, const std::string& label, double time_limit,
                   const std::function<void(Criterion&)>& body) {
  Criterion c;
  c.label = label;
  c.time_limit_seconds = time_limit;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.details.push_back(std::string("exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (time_limit > 0 && elapsed > time_limit) {
    c.ok = false;
    c.details.push_back("time limit exceeded: " + std::to_string(elapsed) +
                        " s > " + std::to_string(time_limit) + " s");
  }
  std::printf("[%s] criterion %2d (%7.2f s): %s\n", c.ok ? "PASS" : "FAIL",
              number, elapsed, label.c_str());
  for (const std::string& d : c.details) std::printf("         %s\n", d.c_str());
  if (!c.ok) ++failures_total;
}

BinaryMatrix ones(int m, int n) {
  BinaryMatrix b(m, n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) b.set(i, j, 1);
  return b;
}

double mroot(int base, int M) {
  return std::pow(static_cast<double>(base), 1.0 / static_cast<double>(M));
}

// ---- criterion 11 helpers -------------------------------------------------

std::string run_cli(const std::string& args, int& exit_code) {
  const std::string cmd = std::string(BETHEPERM_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  exit_code = WEXITSTATUS(status);
  return out;
}

void strip_timing(json& j) {
  if (j.is_object()) {
    j.erase("timing_ms");
    j.erase("timing");
    j.erase("wall_seconds");
    for (auto& [key, value] : j.items()) {
      (void)key;
      strip_timing(value);
    }
  } else if (j.is_array()) {
    for (auto& item : j) strip_timing(item);
  }
}

}  // namespace

int main() {
  run_criterion(1, "q(2,M) = M+1 exactly for M = 1..5 by canonical enumeration",
                60.0, [](Criterion& c) {
    for (int M = 1; M <= 5; ++M) {
      const Rational value = q(2, M);
      c.require(value == M + 1, "q(2," + std::to_string(M) + ") = " +
                                    to_fraction_string(value));
    }
  });

  run_criterion(2,
                "t3/that3 closed forms equal reduced enumeration (M = 1..3); "
                "that3(M) <= 2^(M+1)-1 for M = 1..5",
                300.0, [](Criterion& c) {
    for (int M = 1; M <= 3; ++M) {
      c.require(t3_closed(M) == t3(M), "t3 closed form at M=" + std::to_string(M));
      c.require(that3_closed(M) == that3(M),
                "that3 closed form at M=" + std::to_string(M));
    }
    for (int M = 1; M <= 5; ++M) {
      const Rational bound((Integer(1) << static_cast<unsigned>(M + 1)) - 1);
      c.require(that3(M) <= bound,
                "that3(" + std::to_string(M) + ") above 2^(M+1)-1");
    }
  });

  run_criterion(3,
                "q(m,M) <= m^M q(m-1,M) for m in {2,3}, M in {1,2,3}; "
                "t3(M) <= 2^M q(2,M) for M = 1..3",
                0.0, [](Criterion& c) {
    for (int m = 2; m <= 3; ++m)
      for (int M = 1; M <= 3; ++M) {
        const Rational lhs = q(m, M);
        const Rational rhs =
            Rational(ipow(Integer(m), static_cast<unsigned>(M))) * q(m - 1, M);
        c.require(lhs <= rhs, "q monotonicity at m=" + std::to_string(m) +
                                  " M=" + std::to_string(M));
      }
    for (int M = 1; M <= 3; ++M) {
      const Rational rhs =
          Rational(Integer(1) << static_cast<unsigned>(M)) * q(2, M);
      c.require(t3(M) <= rhs, "t3 bound at M=" + std::to_string(M));
    }
  });

  run_criterion(4,
                "2x4 example: perm vectors, min weight 8/3, degree vector "
                "patterns to 1e-12 for M = 1..4",
                0.0, [](Criterion& c) {
    const BinaryMatrix h = example_2x4_matrix();
    const std::vector<std::pair<IndexSet, std::vector<Rational>>> expected = {
        {IndexSet{1, 2, 3}, {2, 1, 1, 0}},
        {IndexSet{1, 2, 4}, {1, 1, 0, 1}},
        {IndexSet{1, 3, 4}, {1, 0, 1, 1}},
        {IndexSet{2, 3, 4}, {0, 1, 1, 2}}};
    for (const auto& [beta, want] : expected) {
      const PseudoVector v = perm_vector(h, beta);
      c.require(v.exact_values == want,
                "perm vector for beta " + beta.to_string() + ": " + v.to_string());
    }
    const MinWeightResult min = min_pseudo_weight_bound(h, VectorFamily::perm);
    c.require(min.weight.exact && min.weight.exact_value == Rational(8, 3),
              "min pseudo-weight " + to_fraction_string(min.weight.exact_value));
    for (int M = 1; M <= 4; ++M) {
      const double big = mroot(M + 1, M);
      const std::vector<std::pair<IndexSet, std::vector<double>>> patterns = {
          {IndexSet{1, 2, 3}, {big, 1, 1, 0}},
          {IndexSet{1, 2, 4}, {1, 1, 0, 1}},
          {IndexSet{1, 3, 4}, {1, 0, 1, 1}},
          {IndexSet{2, 3, 4}, {0, 1, 1, big}}};
      for (const auto& [beta, want] : patterns) {
        const PseudoVector v = bethe_perm_vector_M(h, beta, M);
        for (int j = 1; j <= 4; ++j)
          c.require(std::abs(v.at(j) - want[static_cast<std::size_t>(j - 1)]) <=
                        1e-12,
                    "degree vector M=" + std::to_string(M) + " beta " +
                        beta.to_string() + ": " + v.to_string());
      }
    }
  });

  run_criterion(5,
                "lifted 9x12 example: w, deleted-block-column vector, syndrome, "
                "cone verdicts, weights",
                0.0, [](Criterion& c) {
    const CheckReport r = reproduce_example_motivation();
    for (const CheckFailure& f : r.failures) c.require(false, f.witness);
    for (const std::string& n : r.notes) c.note(n);
    c.require(r.instances > 0, "no instances ran");
  });

  run_criterion(6,
                "published table: perm rows exact, weights to 1e-3, limit "
                "entries to 2e-3",
                600.0, [](Criterion& c) {
    const CheckReport r = reproduce_table1(2e-3);
    for (const CheckFailure& f : r.failures) c.require(false, f.witness);
    for (const std::string& n : r.notes) c.note(n);
    c.require(r.instances == 15, "expected 15 comparisons");
  });

  run_criterion(7,
                "minimizer sanity: 64/27, ones, permutation matrices, and the "
                "permanent upper bound on 100 random matrices",
                0.0, [](Criterion& c) {
    const BetheResult j3 = minimize_bethe(IntegerMatrix::from_binary(ones(3, 3)),
                                          1e-9);
    c.require(std::abs(j3.value - 64.0 / 27.0) <= 1e-6,
              "value for the 3x3 all-ones matrix: " + to_float_string(j3.value));
    const BetheResult j2 = minimize_bethe(IntegerMatrix::from_binary(ones(2, 2)),
                                          1e-10);
    c.require(std::abs(j2.value - 1.0) <= 1e-8,
              "value for the 2x2 all-ones matrix: " + to_float_string(j2.value));
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 7);
      std::vector<int> images(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i + 1;
      std::shuffle(images.begin(), images.end(), rng);
      const BetheResult r =
          minimize_bethe(IntegerMatrix::from_permutation(images), 1e-10);
      c.require(std::abs(r.value - 1.0) <= 1e-10,
                "permutation matrix value: " + to_float_string(r.value));
    }
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 7);
      BinaryMatrix b(n, n);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) b.set(i, j, static_cast<int>(rng() % 2));
      const IntegerMatrix theta = IntegerMatrix::from_binary(b);
      const BetheResult r = minimize_bethe(theta, 1e-6);
      const double p = permanent(theta).convert_to<double>();
      c.require(r.value <= p + 1e-6,
                "limit value above the permanent on trial " +
                    std::to_string(trial) + ": " + to_float_string(r.value) +
                    " vs " + to_float_string(p));
    }
  });

  run_criterion(8,
                "200 seeded random matrices (m <= 5): every column-set vector "
                "passes the exact cone check",
                0.0, [](Criterion& c) {
    std::mt19937_64 rng(20260810);
    for (int trial = 0; trial < 200; ++trial) {
      const int m = 2 + static_cast<int>(rng() % 4);
      const int n = m + 1 + static_cast<int>(rng() % 3);
      const BinaryMatrix h = random_parity_check(m, n, rng);
      std::vector<int> pick(static_cast<std::size_t>(m + 1));
      for (int i = 0; i <= m; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
      while (true) {
        const PseudoVector v = perm_vector(h, IndexSet(pick));
        const ConeReport cone = in_fundamental_cone(h, v, 0.0);
        if (!cone.member)
          c.require(false, "cone violation at trial " + std::to_string(trial) +
                               " H=" + serialize_dense(h));
        int i = m;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - (m - i)) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j <= m; ++j)
          pick[static_cast<std::size_t>(j)] =
              pick[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  });

  run_criterion(9,
                "oracle equivalence: Ryser vs enumeration on 500 matrices; the "
                "three structural reductions preserve the permanent",
                0.0, [](Criterion& c) {
    std::mt19937_64 rng(987654321);
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 8);
      IntegerMatrix a(n, n);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          a.set(i, j, Integer(rng() % (trial % 2 ? 2 : 4)));
      if (permanent_ryser(a) != permanent_naive(a))
        c.require(false, "ryser/naive mismatch at trial " + std::to_string(trial));
    }
    // merge reductions
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 7);
      IntegerMatrix a(n, n);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) a.set(i, j, Integer(rng() % 3));
      const int row = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      for (int j = 1; j <= n; ++j) a.set(row, j, 0);
      const int w = 1 + static_cast<int>(rng() % 2);
      for (int placed = 0; placed < w;) {
        const int col = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        if (a.at(row, col) == 0) {
          a.set(row, col, 1);
          ++placed;
        }
      }
      const UnitRowMerge m = merge_columns_by_unit_row(a, row);
      if (m.zero_permanent || permanent_ryser(*m.matrix) != permanent_ryser(a))
        c.require(false, "unit-row merge mismatch at trial " + std::to_string(trial));
    }
    // subset expansion
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 6);
      IntegerMatrix a(n, n), b(n, n);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          a.set(i, j, Integer(rng() % 2));
          b.set(i, j, Integer(rng() % 2));
        }
      if (perm_subset_expansion(a, b) != permanent_ryser(add(a, b)))
        c.require(false, "subset expansion mismatch at trial " + std::to_string(trial));
    }
    // block collapses against the dense expansion
    for (int M = 1; M <= 4; ++M) {
      std::vector<int> im(static_cast<std::size_t>(M));
      for (int i = 0; i < M; ++i) im[static_cast<std::size_t>(i)] = i + 1;
      std::shuffle(im.begin(), im.end(), rng);
      const IntegerMatrix p = IntegerMatrix::from_permutation(im);
      std::shuffle(im.begin(), im.end(), rng);
      const IntegerMatrix qq = IntegerMatrix::from_permutation(im);
      std::shuffle(im.begin(), im.end(), rng);
      const IntegerMatrix r = IntegerMatrix::from_permutation(im);
      const IntegerMatrix id = IntegerMatrix::identity(M);
      BlockMatrix blocks(3, 3, M);
      blocks.set_cell(1, 1, id);
      blocks.set_cell(1, 2, id);
      blocks.set_cell(2, 1, id);
      blocks.set_cell(2, 2, p);
      blocks.set_cell(2, 3, id);
      blocks.set_cell(3, 1, qq);
      blocks.set_cell(3, 2, r);
      blocks.set_cell(3, 3, id);
      const BlockReduction red = reduce_block_identity(blocks);
      if (!red.fully_reduced ||
          permanent_ryser(red.matrix) != permanent_ryser(blocks.expand()))
        c.require(false, "block collapse mismatch at M=" + std::to_string(M));
    }
  });

  run_criterion(10,
                "degree-1 averages and vectors collapse to permanents exactly",
                0.0, [](Criterion& c) {
    std::vector<BinaryMatrix> corpus = {
        ones(2, 2),
        ones(3, 3),
        BinaryMatrix::from_rows({{1, 1}, {1, 0}}),
        BinaryMatrix::from_rows({{1, 1, 0}, {1, 0, 1}, {1, 1, 1}}),
        BinaryMatrix::from_rows({{1, 1, 0}, {1, 1, 1}, {1, 1, 1}}),
    };
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 4);
      BinaryMatrix b(n, n);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) b.set(i, j, static_cast<int>(rng() % 2));
      corpus.push_back(b);
    }
    for (const BinaryMatrix& b : corpus) {
      const Integer p = permanent(IntegerMatrix::from_binary(b));
      c.require(degree_M_bethe_perm(b, 1).mean == Rational(p),
                "full degree-1 mean mismatch");
      c.require(degree_M_bethe_perm_reduced(b, 1).mean == Rational(p),
                "reduced degree-1 mean mismatch");
    }
    std::vector<BinaryMatrix> checks = {example_2x4_matrix(),
                                        motivation_protomatrix()};
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 2 + static_cast<int>(rng() % 3);
      checks.push_back(random_parity_check(m, m + 2, rng));
    }
    for (const BinaryMatrix& h : checks) {
      std::vector<int> pick(static_cast<std::size_t>(h.rows() + 1));
      for (int i = 0; i <= h.rows(); ++i) pick[static_cast<std::size_t>(i)] = i + 1;
      const IndexSet beta(pick);
      const PseudoVector a = perm_vector(h, beta);
      const PseudoVector b = bethe_perm_vector_M(h, beta, 1);
      c.require(b.exact && a.exact_values == b.exact_values,
                "vector collapse mismatch for H=" + serialize_dense(h));
    }
  });

  run_criterion(11,
                "verify --suite all is reproducible across worker counts "
                "(identical fields besides timing)",
                0.0, [](Criterion& c) {
    int code1 = 0, code2 = 0;
    const std::string out1 =
        run_cli("--seed 42 --workers 1 verify --suite all", code1);
    const std::string out2 =
        run_cli("--seed 42 --workers 2 verify --suite all", code2);
    c.require(code1 == code2, "exit codes differ: " + std::to_string(code1) +
                                  " vs " + std::to_string(code2));
    json a = json::parse(out1);
    json b = json::parse(out2);
    strip_timing(a);
    strip_timing(b);
    a.erase("workers");
    b.erase("workers");
    c.require(a == b, "records differ beyond timing fields");
    c.note("verify exit code " + std::to_string(code1) +
           " (the lifted-example suite carries one catalogued reference "
           "discrepancy)");
  });

  std::printf("%s: %d criterion(s) failed\n",
              failures_total == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              failures_total);
  return failures_total;
}
