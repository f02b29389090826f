#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "betheperm/bethe_free_energy.hpp"
#include "betheperm/checks.hpp"
#include "betheperm/lifting.hpp"
#include "betheperm/permanent.hpp"
#include "betheperm/pseudocodewords.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace betheperm;

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 ok, 2 parse/usage, 3 shape, 4 non-convergence, 5 budget,
// 10 findings from the open-inequality suites.
enum ExitCode {
  kOk = 0,
  kFailures = 1,
  kParse = 2,
  kShape = 3,
  kNoConvergence = 4,
  kBudget = 5,
  kFindings = 10,
};

json exact_field(const Rational& r) {
  return json{{"kind", "exact"}, {"value", to_fraction_string(r)}};
}

json exact_field(const Integer& v) {
  return json{{"kind", "exact"}, {"value", v.str()}};
}

json float_field(double v, double tol) {
  return json{{"kind", "float"},
              {"value", to_float_string(v)},
              {"tol", to_float_string(tol)}};
}

struct MatrixInput {
  BinaryMatrix matrix;
  std::string text;
  std::string path;
  bool from_exponents = false;
};

MatrixInput load_matrix(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  MatrixInput m;
  m.path = path;
  m.text = buffer.str();
  std::string fmt = format;
  if (fmt == "auto") {
    // First non-comment line: two header tokens means dense, three means
    // exponents.
    std::istringstream probe(m.text);
    std::string line;
    fmt = "dense";
    while (std::getline(probe, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ls(line);
      std::string tok;
      int count = 0;
      while (ls >> tok) ++count;
      fmt = count >= 3 ? "exponent" : "dense";
      break;
    }
  }
  if (fmt == "exponent") {
    m.matrix = expand_exponents(parse_exponents(m.text));
    m.from_exponents = true;
  } else {
    m.matrix = parse_dense(m.text);
  }
  return m;
}

std::uint64_t parse_budget(const std::string& text) {
  if (text == "small") return 1'000'000;
  if (text == "default") return 100'000'000;
  if (text == "large") return 10'000'000'000ull;
  return std::stoull(text);
}

struct Common {
  std::string budget_text = "default";
  int workers = 0;
  std::uint64_t seed = 12345;

  EnumerationBudget budget() const { return {parse_budget(budget_text)}; }
  int worker_count() const {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
};

json record_header(const std::string& command, const Common& common) {
  return json{{"command", command},
              {"version", kVersion},
              {"seed", common.seed},
              {"workers", common.worker_count()}};
}

void emit(const json& record, const std::string& human) {
  std::cout << record.dump(2) << std::endl;
  std::cerr << human << std::endl;
}

json vector_json(const PseudoVector& v, double tol) {
  json entries = json::array();
  for (int i = 1; i <= v.size(); ++i) {
    if (v.exact)
      entries.push_back(exact_field(v.exact_at(i)));
    else
      entries.push_back(float_field(v.at(i), tol));
  }
  return entries;
}

json cone_json(const ConeReport& report) {
  json out{{"member", report.member},
           {"tolerance", to_float_string(report.tolerance)}};
  json viols = json::array();
  for (const ConeViolation& v : report.violations)
    viols.push_back(json{{"row", v.row},
                         {"position", v.position},
                         {"lhs", to_float_string(v.lhs)},
                         {"rhs", to_float_string(v.rhs)},
                         {"slack", to_float_string(v.slack)}});
  out["violations"] = viols;
  return out;
}

json weight_json(const PseudoWeight& w, double tol) {
  if (w.exact) return exact_field(w.exact_value);
  return float_field(w.value, tol);
}

json report_json(const CheckReport& r) {
  json out{{"name", r.name},
           {"instances", r.instances},
           {"passes", r.passes},
           {"seed", r.seed}};
  out["failures"] = json::array();
  for (const CheckFailure& f : r.failures) out["failures"].push_back(f.witness);
  out["findings"] = r.findings;
  out["notes"] = r.notes;
  out["timing"] = json{{"wall_seconds", r.wall_seconds}};
  return out;
}

int run_perm(const MatrixInput& input, const std::string& algo,
             const Common& common) {
  const auto start = std::chrono::steady_clock::now();
  const IntegerMatrix a = IntegerMatrix::from_binary(input.matrix);
  Integer value;
  if (algo == "naive")
    value = permanent_naive(a);
  else if (algo == "ryser")
    value = permanent_ryser(a, common.worker_count());
  else
    value = permanent(a, common.worker_count());
  json record = record_header("perm", common);
  record["inputs"] = {{"matrix_path", input.path},
                      {"matrix_text", input.text},
                      {"algo", algo}};
  record["outputs"] = {{"permanent", exact_field(value)}};
  record["timing_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  emit(record, "perm = " + value.str());
  return kOk;
}

int run_bethe(const MatrixInput& input, const std::vector<std::string>& mode,
              double tol, const Common& common) {
  const auto start = std::chrono::steady_clock::now();
  json record = record_header("bethe", common);
  record["inputs"] = {{"matrix_path", input.path},
                      {"matrix_text", input.text},
                      {"mode", mode},
                      {"tol", to_float_string(tol)}};
  if (mode.empty() || mode[0] == "limit") {
    const BetheResult r = minimize_bethe(input.matrix, tol);
    record["outputs"] = {
        {"value", float_field(r.value, tol)},
        {"free_energy", float_field(r.free_energy, tol)},
        {"gap", to_float_string(r.gap)},
        {"iterations", r.iterations},
        {"feasible", r.feasible},
    };
    record["timing_ms"] = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    if (!r.converged) {
      emit(record, "did not converge: gap " + to_float_string(r.gap));
      return kNoConvergence;
    }
    emit(record, "limit value = " + to_float_string(r.value));
    return kOk;
  }
  if (mode[0] == "degree") {
    if (mode.size() < 2) throw CLI::ValidationError("--mode degree needs M");
    const int M = std::stoi(mode[1]);
    const AverageResult r = degree_M_bethe_perm_reduced(
        input.matrix, M, common.budget(), common.worker_count());
    record["outputs"] = {
        {"degree", M},
        {"sum", exact_field(r.sum)},
        {"count", exact_field(r.count)},
        {"mean", exact_field(r.mean)},
        {"root", float_field(r.root, 0.0)},
    };
    record["timing_ms"] = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    emit(record, "degree-" + std::to_string(M) + " mean = " +
                     to_fraction_string(r.mean) + ", root = " +
                     to_float_string(r.root));
    return kOk;
  }
  throw CLI::ValidationError("unknown --mode '" + mode[0] + "'");
}

int run_vectors(const MatrixInput& input, std::vector<int> beta, bool all_beta,
                const std::string& family, int degree, double tol,
                const Common& common) {
  const auto start = std::chrono::steady_clock::now();
  const BinaryMatrix& h = input.matrix;
  VectorFamily fam;
  if (family == "perm")
    fam = VectorFamily::perm;
  else if (family == "betheM")
    fam = VectorFamily::bethe_degree;
  else if (family == "bethe")
    fam = VectorFamily::bethe_limit;
  else
    throw CLI::ValidationError("unknown --family '" + family + "'");

  std::vector<IndexSet> betas;
  if (all_beta) {
    const int n = h.cols();
    const int k = h.rows() + 1;
    if (k > n) throw std::invalid_argument("vectors: needs cols > rows");
    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
      betas.emplace_back(pick);
      int i = k - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        pick[static_cast<std::size_t>(j)] =
            pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  } else {
    betas.emplace_back(beta);
  }

  json rows = json::array();
  for (const IndexSet& b : betas) {
    PseudoVector v;
    switch (fam) {
      case VectorFamily::perm:
        v = perm_vector(h, b, common.worker_count());
        break;
      case VectorFamily::bethe_degree:
        v = bethe_perm_vector_M(h, b, degree, common.budget(),
                                common.worker_count());
        break;
      case VectorFamily::bethe_limit:
        v = bethe_perm_vector(h, b, tol);
        break;
    }
    json row{{"beta", b.values()}};
    row["vector"] = vector_json(v, tol);
    row["cone"] = cone_json(in_fundamental_cone(h, v, v.exact ? 0.0 : 1e-9));
    bool zero = true;
    for (int i = 1; i <= v.size(); ++i)
      if (v.at(i) != 0.0) zero = false;
    if (!zero)
      row["pseudo_weight"] = weight_json(awgnc_pseudo_weight(v), tol);
    rows.push_back(std::move(row));
  }

  json record = record_header("vectors", common);
  record["inputs"] = {{"matrix_path", input.path},
                      {"matrix_text", input.text},
                      {"family", family},
                      {"degree", degree},
                      {"tol", to_float_string(tol)},
                      {"all_beta", all_beta}};
  record["outputs"] = {{"vectors", rows}};
  std::string human = "computed " + std::to_string(rows.size()) + " vector(s)";
  if (all_beta) {
    const MinWeightResult best = min_pseudo_weight_bound(
        h, fam, degree, tol, common.budget(), common.worker_count());
    record["outputs"]["min_pseudo_weight"] =
        json{{"beta", best.beta.values()},
             {"weight", weight_json(best.weight, tol)}};
    human += ", min weight " + (best.weight.exact
                                    ? to_fraction_string(best.weight.exact_value)
                                    : to_float_string(best.weight.value)) +
             " at beta " + best.beta.to_string();
  }
  record["timing_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  emit(record, human);
  return kOk;
}

int run_verify(const std::string& suite, double tol, const Common& common) {
  const auto start = std::chrono::steady_clock::now();
  const EnumerationBudget budget = common.budget();
  const int workers = common.worker_count();
  std::vector<CheckReport> reports;
  const auto want = [&](const char* name) {
    return suite == name || suite == "all";
  };
  if (want("corollary-q")) reports.push_back(check_corollary_q(3, 3, budget, workers));
  if (want("t-inequality"))
    reports.push_back(check_t_inequality(3, 3, budget, workers));
  if (want("that-case")) reports.push_back(check_that_case(5, budget, workers));
  if (want("partition-lemma")) {
    reports.push_back(check_lemma_partition(2, 2, 4, common.seed, budget, workers));
    reports.push_back(check_lemma_partition(3, 2, 5, common.seed, budget, workers));
  }
  if (want("reduction-equiv"))
    reports.push_back(
        check_reduction_equivalence(30, 5, common.seed, tol, workers));
  if (want("table1")) reports.push_back(reproduce_table1(2e-3, workers));
  if (want("motivation")) reports.push_back(reproduce_example_motivation(workers));
  if (want("small-corollaries"))
    reports.push_back(reproduce_small_corollaries(budget, workers));
  if (reports.empty()) {
    std::cerr << "unknown suite '" << suite << "'" << std::endl;
    return kParse;
  }

  json record = record_header("verify", common);
  record["inputs"] = {{"suite", suite},
                      {"budget", common.budget_text},
                      {"tol", to_float_string(tol)}};
  json out = json::array();
  bool ok = true;
  bool findings = false;
  std::string human;
  for (const CheckReport& r : reports) {
    out.push_back(report_json(r));
    ok = ok && r.ok();
    findings = findings || !r.findings.empty();
    human += r.summary() + "\n";
  }
  record["outputs"] = {{"reports", out}};
  record["timing_ms"] = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  emit(record, human);
  if (!ok) return kFailures;
  return findings ? kFindings : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and limit permanent averages, cone checks, and "
               "reference reproductions for binary matrices"};
  app.require_subcommand(1);

  Common common;
  if (const char* env = std::getenv("BETHEPERM_BUDGET")) common.budget_text = env;
  app.add_option("--budget", common.budget_text,
                 "enumeration budget: integer or small|default|large");
  app.add_option("--workers", common.workers, "worker threads (default: all)");
  app.add_option("--seed", common.seed, "seed for randomized suites");

  std::string matrix_path, format = "auto";
  std::string algo = "auto";
  auto* perm_cmd = app.add_subcommand("perm", "exact permanent of a matrix");
  perm_cmd->add_option("matrix", matrix_path, "matrix file")->required();
  perm_cmd->add_option("--format", format, "auto|dense|exponent");
  perm_cmd->add_option("--algo", algo, "naive|ryser|auto");

  std::vector<std::string> mode{"limit"};
  double tol = 1e-8;
  auto* bethe_cmd = app.add_subcommand("bethe", "limit or degree-M average value");
  bethe_cmd->add_option("matrix", matrix_path, "matrix file")->required();
  bethe_cmd->add_option("--format", format, "auto|dense|exponent");
  bethe_cmd->add_option("--mode", mode, "limit | degree M")->expected(1, 2);
  bethe_cmd->add_option("--tol", tol, "convergence tolerance");

  std::vector<int> beta;
  bool all_beta = false;
  std::string family = "perm";
  int degree = 1;
  auto* vectors_cmd =
      app.add_subcommand("vectors", "column-set vectors, cone checks, weights");
  vectors_cmd->add_option("matrix", matrix_path, "matrix file")->required();
  vectors_cmd->add_option("--format", format, "auto|dense|exponent");
  vectors_cmd->add_option("--beta", beta, "1-based column set")->delimiter(',');
  vectors_cmd->add_flag("--all-beta", all_beta, "every column set of size m+1");
  vectors_cmd->add_option("--family", family, "perm|betheM|bethe");
  vectors_cmd->add_option("-M,--degree", degree, "degree for --family betheM");
  vectors_cmd->add_option("--tol", tol, "tolerance for --family bethe");

  std::string suite = "all";
  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  verify_cmd->add_option("--suite", suite,
                         "corollary-q|t-inequality|that-case|partition-lemma|"
                         "reduction-equiv|table1|motivation|small-corollaries|all");
  verify_cmd->add_option("--tol", tol, "minimizer tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }

  try {
    if (perm_cmd->parsed())
      return run_perm(load_matrix(matrix_path, format), algo, common);
    if (bethe_cmd->parsed())
      return run_bethe(load_matrix(matrix_path, format), mode, tol, common);
    if (vectors_cmd->parsed())
      return run_vectors(load_matrix(matrix_path, format), beta, all_beta, family,
                         degree, tol, common);
    if (verify_cmd->parsed()) return run_verify(suite, tol, common);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << std::endl;
    return kParse;
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << std::endl;
    return kBudget;
  } catch (const NonConvergence& e) {
    std::cerr << e.what() << std::endl;
    return kNoConvergence;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << std::endl;
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << std::endl;
    return kShape;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid input: " << e.what() << std::endl;
    return kShape;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kFailures;
  }
  return kParse;
}
