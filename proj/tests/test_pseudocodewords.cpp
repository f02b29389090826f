#include <doctest.h>

#include <cmath>
#include <random>

#include "betheperm/checks.hpp"
#include "betheperm/pseudocodewords.hpp"

using namespace betheperm;

namespace {

PseudoVector exact_vec(std::initializer_list<int> values) {
  std::vector<Rational> v;
  for (int x : values) v.emplace_back(x);
  return PseudoVector::from_exact(std::move(v));
}

}  // namespace

TEST_CASE("fundamental cone membership") {
  const BinaryMatrix h = example_2x4_matrix();
  SUBCASE("catalogued member") {
    const ConeReport r = in_fundamental_cone(h, exact_vec({2, 1, 1, 0}));
    CHECK(r.member);
    CHECK(r.violations.empty());
  }
  SUBCASE("catalogued non-member") {
    const BinaryMatrix theta = motivation_protomatrix();
    const ConeReport r = in_fundamental_cone(theta, exact_vec({54, 2, 2, 2}));
    CHECK(!r.member);
    REQUIRE(!r.violations.empty());
    CHECK(r.violations.front().row == 1);
    CHECK(r.violations.front().position == 1);
    CHECK(r.violations.front().lhs == doctest::Approx(54.0));
    CHECK(r.violations.front().rhs == doctest::Approx(6.0));
  }
  SUBCASE("zero vector is always a member") {
    CHECK(in_fundamental_cone(h, exact_vec({0, 0, 0, 0})).member);
  }
  SUBCASE("negative entries violate nonnegativity") {
    std::vector<Rational> v{Rational(-1), Rational(0), Rational(0), Rational(0)};
    const ConeReport r = in_fundamental_cone(h, PseudoVector::from_exact(v));
    CHECK(!r.member);
    CHECK(r.violations.front().row == 0);
  }
  SUBCASE("float vectors use the relative tolerance") {
    const PseudoVector v =
        PseudoVector::from_doubles({3.0 + 1e-12, 1.0, 1.0, 1.0});
    CHECK(in_fundamental_cone(motivation_protomatrix(), v, 1e-9).member);
    CHECK(!in_fundamental_cone(motivation_protomatrix(),
                               PseudoVector::from_doubles({3.1, 1.0, 1.0, 1.0}),
                               1e-9)
               .member);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(in_fundamental_cone(h, exact_vec({1, 1})),
                    std::invalid_argument);
  }
}

TEST_CASE("awgnc pseudo-weight") {
  CHECK(awgnc_pseudo_weight(exact_vec({1, 1, 2})).exact_value == Rational(8, 3));
  CHECK(awgnc_pseudo_weight(exact_vec({3, 1, 1, 1})).exact_value == 3);
  CHECK(awgnc_pseudo_weight(exact_vec({1, 1, 1, 1})).exact_value == 4);
  CHECK_THROWS_AS(awgnc_pseudo_weight(exact_vec({0, 0})), std::invalid_argument);

  SUBCASE("scale invariance, exact") {
    std::mt19937_64 rng(64);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<Rational> v;
      const int n = 2 + static_cast<int>(rng() % 5);
      bool nonzero = false;
      for (int i = 0; i < n; ++i) {
        v.emplace_back(static_cast<int>(rng() % 5));
        if (v.back() != 0) nonzero = true;
      }
      if (!nonzero) continue;
      const Rational alpha(static_cast<int>(1 + rng() % 9),
                           static_cast<int>(1 + rng() % 9));
      std::vector<Rational> scaled;
      for (const Rational& x : v) scaled.push_back(alpha * x);
      CHECK(awgnc_pseudo_weight(PseudoVector::from_exact(v)).exact_value ==
            awgnc_pseudo_weight(PseudoVector::from_exact(scaled)).exact_value);
    }
  }
  SUBCASE("0/1 vectors give the Hamming weight") {
    CHECK(awgnc_pseudo_weight(exact_vec({1, 0, 1, 1, 0})).exact_value == 3);
  }
}

TEST_CASE("perm_vector on catalogued matrices") {
  const BinaryMatrix h = example_2x4_matrix();
  CHECK(perm_vector(h, IndexSet{1, 2, 3}).exact_values ==
        std::vector<Rational>{2, 1, 1, 0});
  CHECK(perm_vector(h, IndexSet{1, 2, 4}).exact_values ==
        std::vector<Rational>{1, 1, 0, 1});
  CHECK(perm_vector(h, IndexSet{1, 3, 4}).exact_values ==
        std::vector<Rational>{1, 0, 1, 1});
  CHECK(perm_vector(h, IndexSet{2, 3, 4}).exact_values ==
        std::vector<Rational>{0, 1, 1, 2});
  CHECK_THROWS_AS(perm_vector(h, IndexSet{1, 2}), std::invalid_argument);

  // the staircase 3x4 pattern
  const BinaryMatrix eq11 =
      BinaryMatrix::from_rows({{1, 1, 1, 1}, {0, 1, 1, 1}, {0, 1, 1, 1}});
  CHECK(perm_vector(eq11, IndexSet::full(4)).exact_values ==
        std::vector<Rational>{6, 2, 2, 2});
}

TEST_CASE("degree vectors collapse to perm vectors at M = 1") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 3);
    const int n = m + 1 + static_cast<int>(rng() % 2);
    const BinaryMatrix h = random_parity_check(m, n, rng);
    // every valid beta
    std::vector<int> pick(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    const IndexSet beta(pick);
    const PseudoVector pv = perm_vector(h, beta);
    const PseudoVector bv = bethe_perm_vector_M(h, beta, 1);
    REQUIRE(bv.exact);
    CHECK(bv.exact_values == pv.exact_values);
  }
}

TEST_CASE("degree vectors of the catalogued 2x4 matrix") {
  const BinaryMatrix h = example_2x4_matrix();
  for (int M = 1; M <= 4; ++M) {
    const PseudoVector v = bethe_perm_vector_M(h, IndexSet{1, 2, 3}, M);
    const double expected =
        std::pow(static_cast<double>(M + 1), 1.0 / static_cast<double>(M));
    CHECK(v.at(1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(v.at(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.at(3) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.at(4) == 0.0);
    CHECK(in_fundamental_cone(h, v, 1e-9).member);
  }
}

TEST_CASE("limit vectors of the catalogued 2x4 matrix") {
  const BinaryMatrix h = example_2x4_matrix();
  const PseudoVector v = bethe_perm_vector(h, IndexSet{1, 2, 3}, 1e-8);
  CHECK(v.at(1) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(v.at(2) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(v.at(3) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(v.at(4) == 0.0);
  // the one-zero 2x3 pattern
  const BinaryMatrix case4 = BinaryMatrix::from_rows({{1, 1, 1}, {1, 0, 0}});
  const PseudoVector v4 = bethe_perm_vector(case4, IndexSet::full(3), 1e-8);
  CHECK(v4.at(1) == 0.0);
  CHECK(v4.at(2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(v4.at(3) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("proportional") {
  const PseudoVector a = PseudoVector::from_doubles(
      {std::pow(54.0, 1.0 / 3.0), std::pow(2.0, 1.0 / 3.0),
       std::pow(2.0, 1.0 / 3.0), std::pow(2.0, 1.0 / 3.0)});
  CHECK(proportional(a, PseudoVector::from_doubles({3, 1, 1, 1}), 1e-12));
  CHECK(proportional(exact_vec({1, 1, 1}), exact_vec({2, 2, 2})));
  CHECK(!proportional(exact_vec({1, 0}), exact_vec({0, 1})));
  CHECK(proportional(exact_vec({0, 0}), exact_vec({0, 0})));
  CHECK(!proportional(exact_vec({1, 2}), exact_vec({2, 1})));
}

TEST_CASE("min pseudo-weight bound") {
  const BinaryMatrix h = example_2x4_matrix();
  const MinWeightResult perm_min = min_pseudo_weight_bound(h, VectorFamily::perm);
  CHECK(perm_min.weight.exact);
  CHECK(perm_min.weight.exact_value == Rational(8, 3));
  CHECK(perm_min.beta == IndexSet{1, 2, 3});

  const MinWeightResult limit_min =
      min_pseudo_weight_bound(h, VectorFamily::bethe_limit, 1, 1e-8);
  CHECK(limit_min.weight.value == doctest::Approx(3.0).epsilon(1e-6));

  const BinaryMatrix tiny = BinaryMatrix::from_rows({{1, 1}});
  const MinWeightResult tiny_min = min_pseudo_weight_bound(tiny, VectorFamily::perm);
  CHECK(tiny_min.weight.exact_value == 2);
}

TEST_CASE("root_M_scale") {
  const PseudoVector v = exact_vec({54, 2, 2, 2});
  const PseudoVector r = root_M_scale(v, 3);
  CHECK(r.at(1) == doctest::Approx(std::pow(54.0, 1.0 / 3.0)).epsilon(1e-15));
  CHECK(r.at(2) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-15));
  const PseudoVector w = root_M_scale(exact_vec({48, 2, 2, 2}), 3);
  CHECK(w.at(1) ==
        doctest::Approx(2.0 * std::pow(2.0, 1.0 / 3.0) * std::pow(3.0, 1.0 / 3.0))
            .epsilon(1e-14));
  const PseudoVector id = root_M_scale(v, 1);
  CHECK(id.exact);
  CHECK(id.exact_values == v.exact_values);
  CHECK(root_M_scale(exact_vec({0, 4}), 2).at(1) == 0.0);
}

TEST_CASE("perm vectors always satisfy the exact cone check") {
  std::mt19937_64 rng(5150);
  int done = 0;
  while (done < 40) {
    const int m = 2 + static_cast<int>(rng() % 4);
    const int n = m + 1 + static_cast<int>(rng() % 3);
    const BinaryMatrix h = random_parity_check(m, n, rng);
    std::vector<int> pick(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
      const PseudoVector v = perm_vector(h, IndexSet(pick));
      const ConeReport r = in_fundamental_cone(h, v, 0.0);
      CHECK(r.member);
      int i = m;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - (m - i)) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j <= m; ++j)
        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    ++done;
  }
}

TEST_CASE("weight-two first rows force equal leading components") {
  // All matrices [[1,1,0...],[c1,c2,A]] at m = 2, 3: the two leading degree
  // averages agree exactly, making the first-row inequalities tight.
  for (int m = 2; m <= 3; ++m) {
    const int inner = m - 1;
    const int combos = 1 << (inner * (inner + 2));
    for (int bits = 0; bits < combos; ++bits) {
      BinaryMatrix h(m, m + 1);
      h.set(1, 1, 1);
      h.set(1, 2, 1);
      int b = bits;
      for (int i = 2; i <= m; ++i)
        for (int j = 1; j <= m + 1; ++j) {
          if (j > 2 && i == 1) continue;
          h.set(i, j, b & 1);
          b >>= 1;
        }
      for (int M = 1; M <= 2; ++M) {
        const IndexSet beta = IndexSet::full(m + 1);
        const AverageResult r1 =
            degree_M_bethe_perm_reduced(columns(h, beta.minus(1)), M);
        const AverageResult r2 =
            degree_M_bethe_perm_reduced(columns(h, beta.minus(2)), M);
        CHECK(r1.mean == r2.mean);
      }
    }
  }
}

TEST_CASE("one-zero and staircase families stay in the cone") {
  // First-row-all-ones family with a free first column.
  for (int m = 2; m <= 3; ++m) {
    for (int stars = 0; stars < (1 << (m - 1)); ++stars) {
      BinaryMatrix h(m, m + 1);
      for (int j = 1; j <= m + 1; ++j) h.set(1, j, 1);
      for (int i = 2; i <= m; ++i) {
        h.set(i, 1, (stars >> (i - 2)) & 1);
        for (int j = 2; j <= m + 1; ++j) h.set(i, j, 1);
      }
      for (int M = 1; M <= 3; ++M) {
        const PseudoVector v = bethe_perm_vector_M(h, IndexSet::full(m + 1), M);
        CHECK(in_fundamental_cone(h, v, v.exact ? 0.0 : 1e-9).member);
      }
    }
    // One extra zero in the top-right corner.
    BinaryMatrix h(m, m + 1);
    for (int j = 1; j <= m; ++j) h.set(1, j, 1);
    for (int i = 2; i <= m; ++i)
      for (int j = 2; j <= m + 1; ++j) h.set(i, j, 1);
    for (int M = 1; M <= 3; ++M) {
      const PseudoVector v = bethe_perm_vector_M(h, IndexSet::full(m + 1), M);
      CHECK(in_fundamental_cone(h, v, v.exact ? 0.0 : 1e-9).member);
    }
  }
}
