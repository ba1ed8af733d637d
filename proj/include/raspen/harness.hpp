#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "raspen/forchheimer.hpp"
#include "raspen/newton.hpp"

namespace raspen {

enum class ProblemKind { forchheimer1d, diffusion2d };
enum class FieldKind { smooth, random_contrast };
enum class InitialGuess { zero, darcy };

/// newton: plain Newton on F. *-fp: Schwarz fixed-point iterations
/// (ras = raspen1, as = aspin1, ras2 = raspen2, as2 = aspin2 residuals).
/// The rest: Newton on the preconditioned function.
enum class MethodKind { newton, ras_fp, as_fp, ras2_fp, as2_fp, raspen1, aspin1, raspen2, aspin2 };

std::string to_string(MethodKind method);
MethodKind parse_method(const std::string& name);

/// One experiment: the cross product subdomains x overlaps x betas x methods.
///
/// For forchheimer1d, `subdomains` is I and the mesh has
/// cells_per_subdomain * I cells unless `cells` fixes it. For diffusion2d,
/// `subdomains` is N (N x N blocks), the grid is n x n with
/// n = cells_per_subdomain * N unless `cells` fixes n, and beta is unused.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::forchheimer1d;
  FieldKind field = FieldKind::smooth;
  double length = 1.5;
  std::optional<Index> cells;
  Index cells_per_subdomain = 25;
  std::vector<int> subdomains{10};
  std::vector<int> overlaps{3};
  std::vector<double> betas{1.0};
  /// When set, every preconditioned Newton method runs this beta sequence
  /// warm-started stage to stage, and `betas` is ignored for them.
  std::vector<double> continuation;
  std::vector<MethodKind> methods;
  JacobianMode aspin1_jacobian = JacobianMode::inexact;
  JacobianMode aspin2_jacobian = JacobianMode::inexact;
  CoarseTest coarse_test = CoarseTest::interpolation_transpose;
  InitialGuess initial_guess = InitialGuess::zero;
  SolverSettings settings;
  RandomContrastOptions random;
  /// Optional cell fields for forchheimer1d (see load_cell_field); the source
  /// file holds cell-integrated values.
  std::string permeability_file;
  std::string source_file;
  std::string output_dir = "results";
  /// Key/value pairs as read, echoed into the summary.
  std::vector<std::pair<std::string, std::string>> echo;

  /// Fails fast on anything that would make a combination invalid,
  /// including layouts that cannot be built.
  void validate() const;
};

/// Flat "key = value" text, '#' comments, lists comma separated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResultRow {
  std::string method;
  int I = 0;
  int k = 0;
  double beta = 0.0;
  int outer_iters = 0;
  int ls_total = 0;
  bool converged = false;
  std::string reason;
  double wall_seconds = 0.0;
  /// Fine cells in total (n * n for diffusion2d).
  Index cells = 0;
  double initial_error = 0.0;
  IterationLedger ledger;
  /// Fine residual after the first step (ras-fp rows only).
  Vector first_step_residual;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
};

/// Runs every combination; failures are recorded in their row. Independent
/// combinations run on up to `threads` workers; row order is fixed by the
/// config, not by completion.
ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 1);

/// Writes results.csv, iterations.csv, curves/*.csv, first-step residuals
/// and summary.json into `dir`.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& dir);

std::string results_csv(const std::vector<ResultRow>& rows);
std::string iterations_csv(const std::vector<ResultRow>& rows);

/// Reads a summary table (results.csv or a shipped reference). Needs the
/// columns method, I, k, beta, outer_iters, LS_total; others are ignored.
std::vector<ResultRow> read_summary_csv(const std::filesystem::path& path);

struct CompareTolerances {
  int outer = 1;
  double ls_relative = 0.15;
};

struct CompareCell {
  std::string method;
  int I = 0;
  int k = 0;
  double beta = 0.0;
  bool found = false;
  int outer = 0;
  int outer_ref = 0;
  bool outer_ok = false;
  int ls = 0;
  int ls_ref = 0;
  bool ls_ok = false;
};

struct CompareReport {
  std::vector<CompareCell> cells;
  bool all_pass() const;
  std::string format() const;
};

/// Matches rows to the reference by (method, I, k, beta). Reference entries
/// without a matching row are reported as not found and fail.
CompareReport compare_table(const std::vector<ResultRow>& rows,
                            const std::filesystem::path& reference,
                            const CompareTolerances& tolerances = {});
CompareReport compare_table(const std::vector<ResultRow>& rows,
                            const std::vector<ResultRow>& reference,
                            const CompareTolerances& tolerances = {});

}  // namespace raspen
