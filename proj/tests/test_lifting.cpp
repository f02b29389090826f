#include <doctest.h>

#include <cmath>
#include <random>

#include "betheperm/lifting.hpp"
#include "betheperm/permanent.hpp"

using namespace betheperm;

namespace {

BinaryMatrix ones(int m, int n) {
  BinaryMatrix b(m, n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) b.set(i, j, 1);
  return b;
}

BinaryMatrix random_binary(std::mt19937_64& rng, int m, int n) {
  BinaryMatrix b(m, n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) b.set(i, j, static_cast<int>(rng() % 2));
  return b;
}

}  // namespace

TEST_CASE("permutation ranking round-trips in lexicographic order") {
  CHECK(unrank_permutation(3, 0) == Permutation{1, 2, 3});
  CHECK(unrank_permutation(3, 5) == Permutation{3, 2, 1});
  Permutation p = identity_permutation(4);
  std::uint64_t rank = 0;
  do {
    CHECK(rank_permutation(p) == rank);
    CHECK(unrank_permutation(4, rank) == p);
    ++rank;
  } while (std::next_permutation(p.begin(), p.end()));
  CHECK(rank == 24);
}

TEST_CASE("enumerate_liftings counts and order") {
  SUBCASE("1x1 cells") {
    LiftingEnumerator e(1, 1, 3);
    CHECK(e.total() == 6);
    LiftingAssignment a;
    int count = 0;
    std::uint64_t prev_rank = 0;
    while (e.next(a)) {
      const std::uint64_t r = rank_permutation(a.cell(1, 1));
      CHECK(r == static_cast<std::uint64_t>(count));
      prev_rank = r;
      ++count;
    }
    (void)prev_rank;
    CHECK(count == 6);
  }
  SUBCASE("2x2 cells, M=2") {
    LiftingEnumerator e(2, 2, 2);
    CHECK(e.total() == 16);
    LiftingAssignment a;
    int count = 0;
    while (e.next(a)) ++count;
    CHECK(count == 16);
  }
  SUBCASE("M=1 collapses to a single assignment") {
    LiftingEnumerator e(2, 3, 1);
    CHECK(e.total() == 1);
    LiftingAssignment a;
    int count = 0;
    while (e.next(a)) ++count;
    CHECK(count == 1);
  }
  SUBCASE("budget refusal carries the exact count") {
    try {
      LiftingEnumerator e(3, 3, 3, {1000});
      FAIL("expected budget refusal");
    } catch (const BudgetExceeded& ex) {
      CHECK(ex.required() == ipow(Integer(6), 9));
      CHECK(std::string(ex.what()).find(ipow(Integer(6), 9).str()) !=
            std::string::npos);
    }
  }
}

TEST_CASE("lift") {
  SUBCASE("single cell is the permutation itself") {
    LiftingAssignment a{1, 1, 3, {Permutation{2, 3, 1}}};
    CHECK(lift(ones(1, 1), a) == IntegerMatrix::circulant_shift(3, 1));
  }
  SUBCASE("M=1 reproduces the base matrix") {
    std::mt19937_64 rng(3);
    const BinaryMatrix b = random_binary(rng, 3, 4);
    LiftingAssignment a{3, 4, 1, std::vector<Permutation>(12, Permutation{1})};
    CHECK(lift(b, a) == IntegerMatrix::from_binary(b));
  }
  SUBCASE("all-identity lifting of the 2x2 all-ones matrix") {
    LiftingAssignment a{2, 2, 2, std::vector<Permutation>(4, Permutation{1, 2})};
    const IntegerMatrix l = lift(ones(2, 2), a);
    CHECK(l == IntegerMatrix::from_rows(
                   {{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}}));
    CHECK(permanent_ryser(l) == 4);
  }
}

TEST_CASE("degree_M averages at M = 1 collapse to the permanent") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const BinaryMatrix b = random_binary(rng, n, n);
    const AverageResult r = degree_M_bethe_perm(b, 1);
    CHECK(r.mean == Rational(permanent_ryser(IntegerMatrix::from_binary(b))));
    CHECK(r.count == 1);
  }
}

TEST_CASE("degree_M average of the 2x2 all-ones matrix") {
  const AverageResult r = degree_M_bethe_perm(ones(2, 2), 2);
  CHECK(r.count == 16);
  CHECK(r.sum == 48);
  CHECK(r.mean == 3);
  CHECK(r.root == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("degree_M average with a zero cell") {
  const BinaryMatrix b = BinaryMatrix::from_rows({{1, 1}, {1, 0}});
  const AverageResult r = degree_M_bethe_perm(b, 2);
  CHECK(r.mean == 1);
  const AverageResult r3 = degree_M_bethe_perm(b, 3);
  CHECK(r3.mean == 1);
}

TEST_CASE("canonical enumeration") {
  SUBCASE("examples") {
    CHECK(degree_M_bethe_perm_canonical(ones(2, 2), 3).mean == 4);
    CHECK(degree_M_bethe_perm_canonical(ones(3, 3), 1).mean == 6);
    const AverageResult r = degree_M_bethe_perm_canonical(ones(2, 2), 2);
    CHECK(r.count == 2);
    CHECK(r.sum == 6);  // perm of the identity pair plus the swapped pair: 4 + 2
    CHECK(r.mean == 3);
  }
  SUBCASE("equals the full average on all-ones matrices") {
    for (const auto& [m, M] : {std::pair{2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
      const AverageResult full = degree_M_bethe_perm(ones(m, m), M);
      const AverageResult canon = degree_M_bethe_perm_canonical(ones(m, m), M);
      CHECK(full.mean == canon.mean);
    }
  }
  SUBCASE("requires an all-one first row and column") {
    CHECK_THROWS_AS(
        degree_M_bethe_perm_canonical(BinaryMatrix::from_rows({{1, 0}, {1, 1}}), 2),
        std::invalid_argument);
  }
}

TEST_CASE("spanning-forest reduction equals the full average") {
  std::mt19937_64 rng(77);
  int done = 0;
  while (done < 25) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const int M = 2;
    const BinaryMatrix b = random_binary(rng, n, n);
    const AverageResult full = degree_M_bethe_perm(b, M);
    const AverageResult reduced = degree_M_bethe_perm_reduced(b, M);
    CHECK(full.mean == reduced.mean);
    CHECK(reduced.count <= full.count);
    ++done;
  }
  // the one-zero 3x3 pattern at M = 2, where pinning saves a factor (M!)^6
  const BinaryMatrix t3_pattern =
      BinaryMatrix::from_rows({{1, 1, 0}, {1, 1, 1}, {1, 1, 1}});
  CHECK(degree_M_bethe_perm(t3_pattern, 2).mean ==
        degree_M_bethe_perm_reduced(t3_pattern, 2).mean);
}

TEST_CASE("q values") {
  for (int M = 1; M <= 5; ++M) CHECK(q(2, M) == M + 1);
  CHECK(q(1, 4) == 1);
  CHECK(q(3, 1) == 6);
  CHECK(q(3, 2) == 21);
  CHECK(q(3, 3) == Rational(1684, 27));
}

TEST_CASE("t values") {
  // For the one-zero pattern the first block row pins to [I ... I 0] and the
  // permanent factors through the identity column, so the average is one.
  for (int M = 1; M <= 4; ++M) CHECK(t(2, M) == 1);
  CHECK(t(3, 1) == 4);
  CHECK(t(3, 2) == 10);
  for (int M = 1; M <= 2; ++M) {
    CHECK(t(3, M) == t3(M));
    // direct full enumeration over all cells of the defining pattern
    const BinaryMatrix pattern =
        BinaryMatrix::from_rows({{1, 1, 0}, {1, 1, 1}, {1, 1, 1}});
    CHECK(degree_M_bethe_perm(pattern, M).mean == t3(M));
  }
}

TEST_CASE("t3 and that3 reduced sums") {
  CHECK(t3(1) == 4);
  CHECK(that3(1) == 3);
  CHECK(t3(2) == 10);
  CHECK(that3(2) == 6);
  CHECK(t3(3) == Rational(64, 3));
  CHECK(that3(3) == Rational(31, 3));
  // direct full enumeration of the two-zero pattern
  const BinaryMatrix pattern =
      BinaryMatrix::from_rows({{1, 1, 0}, {1, 0, 1}, {1, 1, 1}});
  for (int M = 1; M <= 2; ++M)
    CHECK(degree_M_bethe_perm(pattern, M).mean == that3(M));
}

TEST_CASE("closed forms match the enumerations") {
  for (int M = 1; M <= 5; ++M) CHECK(q2_closed(M) == M + 1);
  for (int M = 1; M <= 3; ++M) {
    CHECK(t3_closed(M) == t3(M));
    CHECK(that3_closed(M) == that3(M));
  }
  CHECK(t3_closed(1) == 4);
  CHECK(that3_closed(1) == 3);
}

TEST_CASE("inequalities at desk scale") {
  for (int m = 2; m <= 3; ++m)
    for (int M = 1; M <= 3; ++M)
      CHECK(q(m, M) <= Rational(ipow(Integer(m), static_cast<unsigned>(M))) *
                           q(m - 1, M));
  for (int M = 1; M <= 4; ++M)
    CHECK(t3(M) <= Rational(Integer(M + 1) << static_cast<unsigned>(M)));
  for (int M = 1; M <= 5; ++M)
    CHECK(that3_closed(M) <=
          Rational((Integer(1) << static_cast<unsigned>(M + 1)) - 1));
}

TEST_CASE("average results are exact rationals with a floating root") {
  const AverageResult r = degree_M_bethe_perm_canonical(ones(2, 2), 3);
  CHECK(r.mean == Rational(r.sum, r.count));
  CHECK(r.root == doctest::Approx(std::pow(4.0, 1.0 / 3.0)).epsilon(1e-15));
  const double newton_check = std::pow(r.root, 3);
  CHECK(newton_check == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("budget refusal for oversized averages") {
  try {
    degree_M_bethe_perm(ones(3, 3), 4, {1000});
    FAIL("expected budget refusal");
  } catch (const BudgetExceeded& ex) {
    CHECK(ex.required() == ipow(Integer(24), 9));
  }
}

TEST_CASE("enumeration sums are identical for any worker count") {
  const BinaryMatrix b = ones(3, 3);
  const AverageResult one = degree_M_bethe_perm_canonical(b, 2, {}, 1);
  const AverageResult two = degree_M_bethe_perm_canonical(b, 2, {}, 2);
  const AverageResult five = degree_M_bethe_perm_canonical(b, 2, {}, 5);
  CHECK(one.sum == two.sum);
  CHECK(one.sum == five.sum);
  CHECK(t3(2, {}, 3) == t3(2, {}, 1));
}
