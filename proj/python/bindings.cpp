#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "betheperm/bethe_free_energy.hpp"
#include "betheperm/checks.hpp"
#include "betheperm/lifting.hpp"
#include "betheperm/permanent.hpp"
#include "betheperm/pseudocodewords.hpp"

namespace py = pybind11;
using namespace betheperm;

namespace {

py::object to_py_int(const Integer& v) {
  return py::module_::import("builtins").attr("int")(v.str());
}

py::object to_fraction(const Rational& r) {
  auto fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(to_py_int(numerator(r)), to_py_int(denominator(r)));
}

BinaryMatrix matrix_from_rows(const std::vector<std::vector<int>>& rows) {
  return BinaryMatrix::from_rows(rows);
}

std::vector<std::vector<int>> matrix_to_rows(const BinaryMatrix& m) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m.rows()));
  for (int i = 1; i <= m.rows(); ++i)
    for (int j = 1; j <= m.cols(); ++j)
      rows[static_cast<std::size_t>(i - 1)].push_back(m.at(i, j));
  return rows;
}

PseudoVector vector_from_object(const py::object& omega, bool exact) {
  if (exact) {
    std::vector<Rational> values;
    for (const auto& item : omega)
      values.emplace_back(py::str(item).cast<std::string>());
    return PseudoVector::from_exact(std::move(values));
  }
  return PseudoVector::from_doubles(omega.cast<std::vector<double>>());
}

py::dict cone_to_dict(const ConeReport& r) {
  py::dict out;
  out["member"] = r.member;
  out["tolerance"] = r.tolerance;
  py::list violations;
  for (const ConeViolation& v : r.violations) {
    py::dict item;
    item["row"] = v.row;
    item["position"] = v.position;
    item["lhs"] = v.lhs;
    item["rhs"] = v.rhs;
    item["slack"] = v.slack;
    violations.append(item);
  }
  out["violations"] = violations;
  return out;
}

py::dict average_to_dict(const AverageResult& r) {
  py::dict out;
  out["sum"] = to_py_int(r.sum);
  out["count"] = to_py_int(r.count);
  out["mean"] = to_fraction(r.mean);
  out["root"] = r.root;
  out["degree"] = r.degree;
  return out;
}

py::object vector_to_list(const PseudoVector& v) {
  py::list out;
  for (int i = 1; i <= v.size(); ++i) {
    if (v.exact)
      out.append(to_fraction(v.exact_at(i)));
    else
      out.append(v.at(i));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact permanents, lifting averages, free-energy limits, and "
            "fundamental-cone checks for binary matrices";

  m.def("parse_dense", [](const std::string& text) {
    return matrix_to_rows(parse_dense(text));
  });
  m.def("serialize_dense", [](const std::vector<std::vector<int>>& rows) {
    return serialize_dense(matrix_from_rows(rows));
  });
  m.def("expand_exponents",
        [](const std::vector<std::vector<int>>& exps, int lift_size) {
          ExponentMatrix e;
          e.rows = static_cast<int>(exps.size());
          e.cols = e.rows ? static_cast<int>(exps.front().size()) : 0;
          e.lift_size = lift_size;
          for (const auto& row : exps)
            for (int x : row) e.exps.push_back(x);
          return matrix_to_rows(expand_exponents(e));
        },
        py::arg("exponents"), py::arg("lift_size"));

  m.def("permanent",
        [](const std::vector<std::vector<int>>& rows, const std::string& algo,
           int workers) {
          const IntegerMatrix a =
              IntegerMatrix::from_binary(matrix_from_rows(rows));
          if (algo == "naive") return to_py_int(permanent_naive(a));
          if (algo == "ryser") return to_py_int(permanent_ryser(a, workers));
          return to_py_int(permanent(a, workers));
        },
        py::arg("matrix"), py::arg("algo") = "auto", py::arg("workers") = 1);

  m.def("degree_bethe_permanent",
        [](const std::vector<std::vector<int>>& rows, int degree,
           std::uint64_t budget, int workers) {
          return average_to_dict(degree_M_bethe_perm_reduced(
              matrix_from_rows(rows), degree, {budget}, workers));
        },
        py::arg("matrix"), py::arg("degree"),
        py::arg("budget") = std::uint64_t{100'000'000}, py::arg("workers") = 1);

  m.def("bethe_permanent",
        [](const std::vector<std::vector<int>>& rows, double tol) {
          const BetheResult r = minimize_bethe(matrix_from_rows(rows), tol);
          py::dict out;
          out["value"] = r.value;
          out["free_energy"] = r.free_energy;
          out["gap"] = r.gap;
          out["iterations"] = r.iterations;
          out["converged"] = r.converged;
          out["feasible"] = r.feasible;
          return out;
        },
        py::arg("matrix"), py::arg("tol") = 1e-8);

  m.def("perm_vector",
        [](const std::vector<std::vector<int>>& rows, const std::vector<int>& beta,
           int workers) {
          return vector_to_list(
              perm_vector(matrix_from_rows(rows), IndexSet(beta), workers));
        },
        py::arg("matrix"), py::arg("beta"), py::arg("workers") = 1);

  m.def("bethe_perm_vector_degree",
        [](const std::vector<std::vector<int>>& rows, const std::vector<int>& beta,
           int degree, std::uint64_t budget, int workers) {
          return vector_to_list(bethe_perm_vector_M(
              matrix_from_rows(rows), IndexSet(beta), degree, {budget}, workers));
        },
        py::arg("matrix"), py::arg("beta"), py::arg("degree"),
        py::arg("budget") = std::uint64_t{100'000'000}, py::arg("workers") = 1);

  m.def("bethe_perm_vector",
        [](const std::vector<std::vector<int>>& rows, const std::vector<int>& beta,
           double tol) {
          return vector_to_list(
              bethe_perm_vector(matrix_from_rows(rows), IndexSet(beta), tol));
        },
        py::arg("matrix"), py::arg("beta"), py::arg("tol") = 1e-8);

  m.def("in_fundamental_cone",
        [](const std::vector<std::vector<int>>& rows, const py::object& omega,
           double tol, bool exact) {
          return cone_to_dict(in_fundamental_cone(
              matrix_from_rows(rows), vector_from_object(omega, exact), tol));
        },
        py::arg("matrix"), py::arg("omega"), py::arg("tol") = 1e-9,
        py::arg("exact") = false);

  m.def("awgnc_pseudo_weight",
        [](const py::object& omega, bool exact) -> py::object {
          const PseudoWeight w =
              awgnc_pseudo_weight(vector_from_object(omega, exact));
          if (w.exact) return to_fraction(w.exact_value);
          return py::float_(w.value);
        },
        py::arg("omega"), py::arg("exact") = false);

  m.def("min_pseudo_weight",
        [](const std::vector<std::vector<int>>& rows, const std::string& family,
           int degree, double tol, std::uint64_t budget, int workers) {
          VectorFamily fam = VectorFamily::perm;
          if (family == "betheM") fam = VectorFamily::bethe_degree;
          else if (family == "bethe") fam = VectorFamily::bethe_limit;
          else if (family != "perm")
            throw std::invalid_argument("family must be perm|betheM|bethe");
          const MinWeightResult r = min_pseudo_weight_bound(
              matrix_from_rows(rows), fam, degree, tol, {budget}, workers);
          py::dict out;
          out["beta"] = r.beta.values();
          out["weight"] = r.weight.exact
                              ? to_fraction(r.weight.exact_value)
                              : py::cast(r.weight.value).cast<py::object>();
          return out;
        },
        py::arg("matrix"), py::arg("family") = "perm", py::arg("degree") = 1,
        py::arg("tol") = 1e-8, py::arg("budget") = std::uint64_t{100'000'000},
        py::arg("workers") = 1);

  m.def("cofactor_inequality",
        [](const std::vector<std::vector<int>>& rows, int row, double tol) {
          const CofactorExpansionReport r =
              bethe_cofactor_inequality(matrix_from_rows(rows), row, tol);
          py::dict out;
          out["lhs"] = r.lhs;
          out["rhs"] = r.rhs;
          out["slack"] = r.slack;
          out["holds"] = r.holds;
          return out;
        },
        py::arg("matrix"), py::arg("row") = 1, py::arg("tol") = 1e-8);

  m.def("q", [](int m, int M, std::uint64_t budget, int workers) {
          return to_fraction(q(m, M, {budget}, workers));
        },
        py::arg("m"), py::arg("M"), py::arg("budget") = std::uint64_t{100'000'000},
        py::arg("workers") = 1);
  m.def("t3", [](int M, std::uint64_t budget, int workers) {
          return to_fraction(t3(M, {budget}, workers));
        },
        py::arg("M"), py::arg("budget") = std::uint64_t{100'000'000},
        py::arg("workers") = 1);
  m.def("that3", [](int M, std::uint64_t budget, int workers) {
          return to_fraction(that3(M, {budget}, workers));
        },
        py::arg("M"), py::arg("budget") = std::uint64_t{100'000'000},
        py::arg("workers") = 1);
  m.def("q2_closed", [](int M) { return to_py_int(q2_closed(M)); });
  m.def("t3_closed", [](int M) { return to_fraction(t3_closed(M)); });
  m.def("that3_closed", [](int M) { return to_fraction(that3_closed(M)); });

  m.attr("__version__") = "0.1.0";
}
