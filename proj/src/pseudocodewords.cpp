#include "betheperm/pseudocodewords.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "betheperm/bethe_free_energy.hpp"
#include "betheperm/permanent.hpp"

namespace betheperm {

double PseudoVector::at(int i) const {
  if (i < 1 || i > size()) throw std::out_of_range("PseudoVector::at");
  return float_values[static_cast<std::size_t>(i - 1)];
}

const Rational& PseudoVector::exact_at(int i) const {
  if (!exact) throw std::logic_error("PseudoVector: no exact entries");
  if (i < 1 || i > size()) throw std::out_of_range("PseudoVector::exact_at");
  return exact_values[static_cast<std::size_t>(i - 1)];
}

PseudoVector PseudoVector::from_exact(std::vector<Rational> values,
                                      VectorOrigin origin, int degree) {
  PseudoVector v;
  v.origin = origin;
  v.degree = degree;
  v.exact = true;
  v.float_values.reserve(values.size());
  for (const Rational& r : values)
    v.float_values.push_back(r.convert_to<double>());
  v.exact_values = std::move(values);
  return v;
}

PseudoVector PseudoVector::from_doubles(std::vector<double> values,
                                        VectorOrigin origin, int degree) {
  PseudoVector v;
  v.origin = origin;
  v.degree = degree;
  v.exact = false;
  v.float_values = std::move(values);
  return v;
}

std::string PseudoVector::to_string() const {
  std::string s = "(";
  for (int i = 1; i <= size(); ++i) {
    if (i > 1) s += ", ";
    if (exact)
      s += to_fraction_string(exact_at(i));
    else
      s += to_float_string(at(i));
  }
  return s + ")";
}

ConeReport in_fundamental_cone(const BinaryMatrix& h, const PseudoVector& omega,
                               double tol) {
  if (omega.size() != h.cols())
    throw std::invalid_argument("in_fundamental_cone: length mismatch");
  if (tol < 0.0) throw std::invalid_argument("in_fundamental_cone: tol < 0");
  ConeReport report;
  report.tolerance = omega.exact ? 0.0 : tol;

  const auto record = [&](int row, int j, double lhs, double rhs) {
    report.violations.push_back({row, j, lhs, rhs, rhs - lhs});
  };

  if (omega.exact) {
    for (int j = 1; j <= h.cols(); ++j)
      if (omega.exact_at(j) < 0)
        record(0, j, omega.at(j), 0.0);
    for (int i = 1; i <= h.rows(); ++i) {
      const IndexSet supp = row_support(h, i);
      Rational total = 0;
      for (int j : supp) total += omega.exact_at(j);
      for (int j : supp) {
        const Rational rhs = total - omega.exact_at(j);
        if (omega.exact_at(j) > rhs)
          record(i, j, omega.at(j), rhs.convert_to<double>());
      }
    }
  } else {
    for (int j = 1; j <= h.cols(); ++j)
      if (omega.at(j) < -tol) record(0, j, omega.at(j), 0.0);
    for (int i = 1; i <= h.rows(); ++i) {
      const IndexSet supp = row_support(h, i);
      double total = 0.0;
      for (int j : supp) total += omega.at(j);
      for (int j : supp) {
        const double rhs = total - omega.at(j);
        if (omega.at(j) > rhs + tol * std::max(1.0, rhs))
          record(i, j, omega.at(j), rhs);
      }
    }
  }
  report.member = report.violations.empty();
  return report;
}

PseudoWeight awgnc_pseudo_weight(const PseudoVector& omega) {
  PseudoWeight w;
  if (omega.exact) {
    Rational s1 = 0, s2 = 0;
    for (int i = 1; i <= omega.size(); ++i) {
      const Rational& x = omega.exact_at(i);
      s1 += x < 0 ? -x : x;
      s2 += x * x;
    }
    if (s2 == 0) throw std::invalid_argument("awgnc_pseudo_weight: zero vector");
    w.exact = true;
    w.exact_value = s1 * s1 / s2;
    w.value = w.exact_value.convert_to<double>();
    return w;
  }
  double s1 = 0.0, s2 = 0.0;
  for (int i = 1; i <= omega.size(); ++i) {
    s1 += std::abs(omega.at(i));
    s2 += omega.at(i) * omega.at(i);
  }
  if (s2 == 0.0) throw std::invalid_argument("awgnc_pseudo_weight: zero vector");
  w.value = s1 * s1 / s2;
  return w;
}

namespace {

void check_beta(const BinaryMatrix& h, const IndexSet& beta) {
  if (beta.size() != h.rows() + 1)
    throw std::invalid_argument("beta must have size rows + 1 = " +
                                std::to_string(h.rows() + 1) + ", got " +
                                std::to_string(beta.size()));
  if (!beta.empty() && beta.values().back() > h.cols())
    throw std::out_of_range("beta index exceeds column count");
}

}  // namespace

PseudoVector perm_vector(const BinaryMatrix& h, const IndexSet& beta,
                         int workers) {
  check_beta(h, beta);
  std::vector<Rational> values(static_cast<std::size_t>(h.cols()), Rational(0));
  for (int i : beta) {
    const BinaryMatrix sub = columns(h, beta.minus(i));
    values[static_cast<std::size_t>(i - 1)] =
        Rational(permanent(IntegerMatrix::from_binary(sub), workers));
  }
  return PseudoVector::from_exact(std::move(values), VectorOrigin::perm);
}

PseudoVector bethe_perm_vector_M(const BinaryMatrix& h, const IndexSet& beta,
                                 int M, const EnumerationBudget& budget,
                                 int workers) {
  check_beta(h, beta);
  if (M < 1) throw std::invalid_argument("bethe_perm_vector_M: M must be >= 1");
  if (M == 1) {
    std::vector<Rational> values(static_cast<std::size_t>(h.cols()), Rational(0));
    for (int i : beta) {
      const BinaryMatrix sub = columns(h, beta.minus(i));
      values[static_cast<std::size_t>(i - 1)] =
          degree_M_bethe_perm_reduced(sub, 1, budget, workers).mean;
    }
    return PseudoVector::from_exact(std::move(values), VectorOrigin::bethe_degree,
                                    1);
  }
  std::vector<double> values(static_cast<std::size_t>(h.cols()), 0.0);
  for (int i : beta) {
    const BinaryMatrix sub = columns(h, beta.minus(i));
    values[static_cast<std::size_t>(i - 1)] =
        degree_M_bethe_perm_reduced(sub, M, budget, workers).root;
  }
  return PseudoVector::from_doubles(std::move(values), VectorOrigin::bethe_degree,
                                    M);
}

PseudoVector bethe_perm_vector(const BinaryMatrix& h, const IndexSet& beta,
                               double tol) {
  check_beta(h, beta);
  std::vector<double> values(static_cast<std::size_t>(h.cols()), 0.0);
  for (int i : beta) {
    const BinaryMatrix sub = columns(h, beta.minus(i));
    const BetheResult r = minimize_bethe(sub, tol);
    if (!r.converged)
      throw NonConvergence(
          "bethe_perm_vector: minimizer did not reach tolerance on component " +
          std::to_string(i) + " (gap " + to_float_string(r.gap) + ")");
    values[static_cast<std::size_t>(i - 1)] = r.value;
  }
  return PseudoVector::from_doubles(std::move(values), VectorOrigin::bethe_limit);
}

bool proportional(const PseudoVector& a, const PseudoVector& b, double tol) {
  if (a.size() != b.size())
    throw std::invalid_argument("proportional: length mismatch");
  if (a.exact && b.exact) {
    int pivot = 0;
    for (int i = 1; i <= b.size(); ++i)
      if (b.exact_at(i) != 0) {
        pivot = i;
        break;
      }
    if (pivot == 0) {
      for (int i = 1; i <= a.size(); ++i)
        if (a.exact_at(i) != 0) return false;
      return true;
    }
    const Rational alpha = a.exact_at(pivot) / b.exact_at(pivot);
    if (alpha <= 0) return false;
    for (int i = 1; i <= a.size(); ++i)
      if (a.exact_at(i) != alpha * b.exact_at(i)) return false;
    return true;
  }
  int pivot = 0;
  double best = 0.0;
  for (int i = 1; i <= b.size(); ++i)
    if (std::abs(b.at(i)) > best) {
      best = std::abs(b.at(i));
      pivot = i;
    }
  if (pivot == 0) {
    for (int i = 1; i <= a.size(); ++i)
      if (std::abs(a.at(i)) > tol) return false;
    return true;
  }
  const double alpha = a.at(pivot) / b.at(pivot);
  if (!(alpha > 0.0)) return false;
  for (int i = 1; i <= a.size(); ++i)
    if (std::abs(a.at(i) - alpha * b.at(i)) > tol * std::max(1.0, std::abs(a.at(i))))
      return false;
  return true;
}

namespace {

bool is_zero_vector(const PseudoVector& v) {
  if (v.exact) {
    for (int i = 1; i <= v.size(); ++i)
      if (v.exact_at(i) != 0) return false;
    return true;
  }
  for (int i = 1; i <= v.size(); ++i)
    if (v.at(i) != 0.0) return false;
  return true;
}

}  // namespace

MinWeightResult min_pseudo_weight_bound(const BinaryMatrix& h, VectorFamily family,
                                        int degree, double tol,
                                        const EnumerationBudget& budget,
                                        int workers) {
  const int n = h.cols();
  const int k = h.rows() + 1;
  if (k > n)
    throw std::invalid_argument("min_pseudo_weight_bound: needs cols > rows");
  const Integer combos = binomial(static_cast<unsigned>(n), static_cast<unsigned>(k));
  if (combos > budget.max_evals) throw BudgetExceeded(combos, budget.max_evals);

  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
  bool have = false;
  MinWeightResult best;
  while (true) {
    const IndexSet beta(pick);
    PseudoVector v;
    switch (family) {
      case VectorFamily::perm:
        v = perm_vector(h, beta, workers);
        break;
      case VectorFamily::bethe_degree:
        v = bethe_perm_vector_M(h, beta, degree, budget, workers);
        break;
      case VectorFamily::bethe_limit:
        v = bethe_perm_vector(h, beta, tol);
        break;
    }
    if (!is_zero_vector(v)) {
      const PseudoWeight w = awgnc_pseudo_weight(v);
      const bool better =
          !have || (w.exact && best.weight.exact
                        ? w.exact_value < best.weight.exact_value
                        : w.value < best.weight.value);
      if (better) {
        best.weight = w;
        best.beta = beta;
        have = true;
      }
    }
    // next combination in lexicographic order
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  if (!have)
    throw std::runtime_error(
        "min_pseudo_weight_bound: every candidate vector is zero");
  return best;
}

PseudoVector root_M_scale(const PseudoVector& v, int M) {
  if (M < 1) throw std::invalid_argument("root_M_scale: M must be >= 1");
  if (M == 1) return v;
  std::vector<double> out(static_cast<std::size_t>(v.size()), 0.0);
  for (int i = 1; i <= v.size(); ++i) {
    if (v.exact) {
      const Rational& x = v.exact_at(i);
      if (x < 0) throw std::invalid_argument("root_M_scale: negative entry");
      out[static_cast<std::size_t>(i - 1)] =
          mth_root(x, static_cast<unsigned>(M));
    } else {
      const double x = v.at(i);
      if (x < 0.0) throw std::invalid_argument("root_M_scale: negative entry");
      out[static_cast<std::size_t>(i - 1)] =
          x == 0.0 ? 0.0 : std::pow(x, 1.0 / static_cast<double>(M));
    }
  }
  PseudoVector r = PseudoVector::from_doubles(std::move(out), v.origin, v.degree);
  return r;
}

}  // namespace betheperm
