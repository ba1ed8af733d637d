#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "raspen/harness.hpp"

using namespace raspen;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ResultRow row(const std::string& method, int I, int k, int outer, int ls, bool conv = true) {
  ResultRow r;
  r.method = method;
  r.I = I;
  r.k = k;
  r.beta = 1.0;
  r.outer_iters = outer;
  r.ls_total = ls;
  r.converged = conv;
  return r;
}

// Splits a CSV body (header dropped) into rows of fields.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    out.push_back(f);
  }
  return out;
}

const char* kSmall =
    "problem = forchheimer1d\n"
    "cells_per_subdomain = 25\n"
    "subdomains = 4\n"
    "overlap = 1, 3\n"
    "beta = 1\n"
    "methods = newton, ras-fp, raspen1, aspin1, raspen2, aspin2\n"
    "max_fixed_point_steps = 30\n";

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config parsing") {
    const auto c = parse(
        "# comment\n"
        "problem = diffusion2d\n"
        "subdomains = 2, 4\n"
        "overlap = 1\n"
        "methods = raspen1, aspin1\n"
        "aspin1_jacobian = exact\n"
        "coarse_test = owned-sum\n"
        "outer_tol = 1e-9\n");
    CHECK(c.problem == ProblemKind::diffusion2d);
    CHECK(c.subdomains == std::vector<int>{2, 4});
    CHECK(c.methods == std::vector<MethodKind>{MethodKind::raspen1, MethodKind::aspin1});
    CHECK(c.aspin1_jacobian == JacobianMode::exact);
    CHECK(c.coarse_test == CoarseTest::owned_sum);
    CHECK(c.settings.outer_tol == 1e-9);
    CHECK(c.echo.size() == 7);
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse("methods = raspen1\nwat = 3\n"), SolverError);
    CHECK_THROWS_AS(parse("beta = 1\nbeta = 2\n"), SolverError);
    CHECK_THROWS_AS(parse("beta = one\n"), SolverError);
    CHECK_THROWS_AS(parse("subdomains = 4,,8\n"), SolverError);
    CHECK_THROWS_AS(parse("methods = raspen3\n"), SolverError);
    CHECK_THROWS_AS(parse("no equals sign\n"), SolverError);
    CHECK_THROWS_AS(load_config("/nonexistent/raspen.cfg"), SolverError);

    CHECK_THROWS_AS(parse("beta = 1\n").validate(), SolverError);  // no methods
    CHECK_THROWS_AS(parse("methods = raspen1\nbeta = -1\n").validate(), SolverError);
    CHECK_THROWS_AS(parse("methods = raspen1\ncontinuation = 0, 0.5, 0.2\n").validate(),
                    SolverError);
    CHECK_THROWS_AS(parse("methods = raspen1\nsubdomains = 10\ncells_per_subdomain = 2\n"
                          "overlap = 3\n")
                        .validate(),
                    SolverError);
    CHECK_THROWS_AS(parse("problem = diffusion2d\nmethods = raspen1\ninitial_guess = darcy\n")
                        .validate(),
                    SolverError);
    CHECK_THROWS_AS(parse("methods = raspen1\ninner_tol = 0\n").validate(), SolverError);
  }

  TEST_CASE("empty method list produces no output") {
    auto c = parse("beta = 1\n");
    CHECK_THROWS_AS(run_experiment(c), SolverError);
  }

  TEST_CASE("shipped configs validate") {
    for (const auto& entry : fs::directory_iterator(fs::path(RASPEN_DATA_DIR).parent_path() / "configs")) {
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(load_config(entry.path()).validate());
    }
  }

  TEST_CASE("compare rules") {
    const std::vector<ResultRow> ref{row("raspen1", 10, 3, 4, 92)};
    CHECK(compare_table(ref, ref).all_pass());
    CHECK(compare_table({row("raspen1", 10, 3, 5, 92)}, ref).all_pass());
    CHECK_FALSE(compare_table({row("raspen1", 10, 3, 6, 92)}, ref).all_pass());
    const auto bad = compare_table({row("raspen1", 10, 3, 4, 120)}, ref);
    CHECK_FALSE(bad.all_pass());
    CHECK(bad.cells[0].outer_ok);
    CHECK_FALSE(bad.cells[0].ls_ok);
    CHECK(compare_table({row("raspen1", 10, 3, 4, 105)}, ref).all_pass());
    CHECK_FALSE(compare_table({row("raspen1", 10, 1, 4, 92)}, ref).all_pass());
    CHECK_FALSE(compare_table({row("raspen1", 10, 3, 4, 92, false)}, ref).all_pass());
    CHECK(bad.format().find("FAIL") != std::string::npos);
  }

  TEST_CASE("reference tables are self-consistent") {
    const fs::path data(RASPEN_DATA_DIR);
    const auto summary = read_summary_csv(data / "smooth_forchheimer_summary.csv");
    CHECK(summary.size() == 36);
    CHECK(read_summary_csv(data / "hard_forchheimer_summary.csv").size() == 35);

    std::ifstream in(data / "smooth_forchheimer_iterations.csv");
    std::stringstream buf;
    buf << in.rdbuf();
    std::map<std::pair<std::string, int>, int> sums;
    for (const auto& f : csv_rows(buf.str())) {
      sums[{f[0], std::stoi(f[1])}] += std::stoi(f[5]) + std::stoi(f[6]);
    }
    CHECK(sums.size() == 12);
    for (const auto& [key, ls] : sums) {
      const auto it = std::find_if(summary.begin(), summary.end(), [&](const ResultRow& r) {
        return r.method == key.first && r.I == key.second && r.k == 3;
      });
      REQUIRE(it != summary.end());
      CAPTURE(key.first);
      CAPTURE(key.second);
      CHECK(it->ls_total == ls);
    }
    CHECK_THROWS_AS(read_summary_csv(data / "diffusion2d_iterations.csv"), SolverError);
  }

  TEST_CASE("runs are deterministic and ledgers add up") {
    const auto c = parse(kSmall);
    const auto a = run_experiment(c, 1);
    const auto b = run_experiment(c, 4);
    CHECK(results_csv(a.rows) == results_csv(b.rows));
    CHECK(iterations_csv(a.rows) == iterations_csv(b.rows));
    // newton x 1 overlap + 5 methods x 2 overlaps.
    REQUIRE(a.rows.size() == 11);
    CHECK(a.rows[0].method == "newton");
    CHECK(a.rows[0].k == 0);

    std::map<std::string, int> sums;
    for (const auto& f : csv_rows(iterations_csv(a.rows))) {
      sums[f[0] + "/" + f[2]] += std::stoi(f[5]) + std::stoi(f[6]);
    }
    for (const auto& r : a.rows) {
      CAPTURE(r.method);
      if (r.method != "ras-fp") CHECK(r.converged);
      CHECK(r.reason.empty() == r.converged);
      CHECK(r.ls_total == sums[r.method + "/" + std::to_string(r.k)]);
      CHECK(r.ledger.size() == static_cast<std::size_t>(r.outer_iters));
    }
  }

  TEST_CASE("first RAS step leaves residual only near interfaces") {
    const auto c = parse(kSmall);
    const auto result = run_experiment(c, 2);
    const auto it = std::find_if(result.rows.begin(), result.rows.end(),
                                 [](const ResultRow& r) { return r.method == "ras-fp" && r.k == 3; });
    REQUIRE(it != result.rows.end());
    const Vector& r = it->first_step_residual;
    REQUIRE(r.size() == 100);
    // Owned blocks are [25 i, 25 i + 25); a cell whose stencil stays inside
    // one block sees only that subdomain's solution.
    int interior = 0;
    for (Index cell = 0; cell < 100; ++cell) {
      const Index block = cell / 25;
      const bool inside = (cell == 0 || (cell - 1) / 25 == block) &&
                          (cell == 99 || (cell + 1) / 25 == block);
      if (inside) {
        ++interior;
        CHECK(std::abs(r[cell]) <= c.settings.inner_tol);
      }
    }
    CHECK(interior == 94);
    CHECK(r.lpNorm<Eigen::Infinity>() > 1e-4);
  }

  TEST_CASE("outputs are written") {
    auto c = parse(kSmall);
    c.methods = {MethodKind::raspen1, MethodKind::ras_fp};
    const auto result = run_experiment(c);
    const fs::path dir = fs::temp_directory_path() / "raspen_harness_test";
    fs::remove_all(dir);
    write_outputs(c, result, dir);
    CHECK(fs::exists(dir / "results.csv"));
    CHECK(fs::exists(dir / "iterations.csv"));
    CHECK(fs::exists(dir / "curves" / "raspen1_I4_k3_beta1.csv"));
    CHECK(fs::exists(dir / "first_step_residual_ras-fp_I4_k1_beta1.csv"));
    std::ifstream js(dir / "summary.json");
    const auto summary = nlohmann::json::parse(js);
    CHECK(summary["rows"].size() == result.rows.size());
    CHECK(summary["config"]["methods"] == "newton, ras-fp, raspen1, aspin1, raspen2, aspin2");
    CHECK(summary["seed"] == 1);

    // Round trip through results.csv; the capped ras-fp row is unconverged
    // and therefore fails the comparison.
    const auto back = read_summary_csv(dir / "results.csv");
    const auto report = compare_table(back, result.rows);
    REQUIRE(report.cells.size() == 4);
    for (const auto& cell : report.cells) CHECK(cell.found);
    CHECK(report.cells[0].outer_ok);
    CHECK(report.cells[1].outer_ok);
    CHECK_FALSE(report.cells[2].outer_ok);
    fs::remove_all(dir);
  }

  TEST_CASE("failures stay in their row") {
    auto c = parse(kSmall);
    c.methods = {MethodKind::raspen1, MethodKind::newton};
    c.settings.max_inner_iterations = 1;
    const auto result = run_experiment(c);
    REQUIRE(result.rows.size() == 3);
    CHECK_FALSE(result.rows[0].converged);
    CHECK(result.rows[0].reason.find("subdomain") != std::string::npos);
    CHECK(result.rows[2].method == "newton");
    CHECK(result.rows[2].converged);
  }

  TEST_CASE("diffusion2d Newton baseline") {
    const auto c = parse("problem = diffusion2d\ncells_per_subdomain = 4\nsubdomains = 2\n"
                         "overlap = 1\nmethods = newton\n");
    const auto result = run_experiment(c);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].converged);
    CHECK(result.rows[0].cells == 64);
    CHECK(result.rows[0].beta == 0.0);
  }

  TEST_CASE("continuation gives one row per stage") {
    const auto c = parse("cells_per_subdomain = 25\nsubdomains = 4\noverlap = 3\n"
                         "continuation = 0, 0.5, 1\nmethods = raspen1\n");
    const auto result = run_experiment(c);
    REQUIRE(result.rows.size() == 3);
    CHECK(result.rows[0].beta == 0.0);
    CHECK(result.rows[0].outer_iters == 1);
    CHECK(result.rows[2].beta == 1.0);
    for (const auto& r : result.rows) CHECK(r.converged);
  }
}
