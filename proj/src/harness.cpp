#include "raspen/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "raspen/diffusion2d.hpp"
#include "raspen/field_io.hpp"
#include "raspen/parallel.hpp"

namespace raspen {
namespace {

constexpr const char* kVersion = "1.0.0";

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw SolverError("config key '" + key + "': '" + text + "' is not a number");
  }
}

long long parse_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw SolverError("config key '" + key + "': '" + text + "' is not an integer");
  }
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& text, F&& item) {
  std::vector<T> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw SolverError("config key '" + key + "': empty list entry");
    out.push_back(item(part));
  }
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_beta(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool is_fixed_point(MethodKind m) {
  return m == MethodKind::ras_fp || m == MethodKind::as_fp || m == MethodKind::ras2_fp ||
         m == MethodKind::as2_fp;
}

SystemKind system_kind(MethodKind m) {
  switch (m) {
    case MethodKind::ras_fp:
    case MethodKind::raspen1:
      return SystemKind::raspen1;
    case MethodKind::as_fp:
    case MethodKind::aspin1:
      return SystemKind::aspin1;
    case MethodKind::ras2_fp:
    case MethodKind::raspen2:
      return SystemKind::raspen2;
    case MethodKind::as2_fp:
    case MethodKind::aspin2:
      return SystemKind::aspin2;
    case MethodKind::newton:
      break;
  }
  throw SolverError("method has no preconditioned system");
}

JacobianMode jacobian_mode(const ExperimentConfig& c, SystemKind kind) {
  if (kind == SystemKind::aspin1) return c.aspin1_jacobian;
  if (kind == SystemKind::aspin2) return c.aspin2_jacobian;
  return JacobianMode::exact;
}

Index mesh_cells(const ExperimentConfig& c, int subdomains) {
  return c.cells ? *c.cells : c.cells_per_subdomain * subdomains;
}

std::unique_ptr<NonlinearProblem> make_problem(const ExperimentConfig& c, int subdomains,
                                               double beta) {
  const Index n = mesh_cells(c, subdomains);
  if (c.problem == ProblemKind::diffusion2d) {
    return std::make_unique<DiffusionProblem2D>(DiffusionProblem2D::standard(n, n));
  }
  ForchheimerProblem1D base = c.field == FieldKind::smooth
                                  ? ForchheimerProblem1D::smooth(n, beta, c.length)
                                  : ForchheimerProblem1D::random_contrast(n, beta, c.random, c.length);
  if (c.permeability_file.empty() && c.source_file.empty()) {
    return std::make_unique<ForchheimerProblem1D>(std::move(base));
  }
  ForchheimerSetup setup = base.setup();
  if (!c.permeability_file.empty()) setup.lambda = load_cell_field(c.permeability_file);
  if (!c.source_file.empty()) setup.source = load_cell_field(c.source_file);
  require_size(setup.lambda, n, "permeability file");
  require_size(setup.source, n, "source file");
  return std::make_unique<ForchheimerProblem1D>(std::move(setup));
}

DecompositionLayout make_layout(const ExperimentConfig& c, int subdomains, int overlap) {
  const Index n = mesh_cells(c, subdomains);
  if (c.problem == ProblemKind::diffusion2d) {
    return build_2d_layout(n, n, subdomains, overlap, c.coarse_test);
  }
  return build_1d_layout(n, subdomains, overlap, c.coarse_test);
}

Vector initial_guess(const ExperimentConfig& c, const NonlinearProblem& problem) {
  const Vector zero = Vector::Zero(problem.dof_count());
  if (c.initial_guess == InitialGuess::zero) return zero;
  const auto& forch = dynamic_cast<const ForchheimerProblem1D&>(problem);
  // Affine problem: one step is exact, the tolerance only has to clear the
  // roundoff of large transmissibilities.
  DirectNewtonOptions opts;
  opts.tol = 1e-10;
  opts.max_iterations = 5;
  auto darcy = direct_newton(forch.with_beta(0.0), zero, opts);
  if (!darcy.converged) throw SolverError("Darcy initial guess did not converge");
  return darcy.solution;
}

struct Job {
  MethodKind method;
  int I;
  int k;
  double beta;
};

void fill_row(ResultRow& row, const RunResult& run) {
  row.outer_iters = run.outer_iterations;
  row.ls_total = run.ledger.total();
  row.converged = run.converged;
  row.reason = run.failure;
  row.initial_error = run.initial_error;
  row.ledger = run.ledger;
}

// One job; continuation jobs yield one row per stage.
std::vector<ResultRow> run_job(const ExperimentConfig& c, const Job& job) {
  const auto start = std::chrono::steady_clock::now();
  SolverSettings settings = c.settings;
  settings.threads = 1;
  std::vector<ResultRow> rows;
  auto blank = [&](double beta) {
    ResultRow r;
    r.method = to_string(job.method);
    r.I = job.I;
    r.k = job.k;
    r.beta = c.problem == ProblemKind::diffusion2d ? 0.0 : beta;
    const Index side = mesh_cells(c, job.I);
    r.cells = c.problem == ProblemKind::diffusion2d ? side * side : side;
    return r;
  };

  const bool chained = !c.continuation.empty() && !is_fixed_point(job.method) &&
                       job.method != MethodKind::newton;
  try {
    if (chained) {
      auto layout = std::make_shared<const DecompositionLayout>(make_layout(c, job.I, job.k));
      const SystemKind kind = system_kind(job.method);
      StageFactory factory = [&](double beta) {
        ContinuationStage stage;
        std::shared_ptr<const NonlinearProblem> problem = make_problem(c, job.I, beta);
        stage.problem = problem;
        stage.layout = layout;
        stage.system = std::make_shared<PreconditionedSystem>(*problem, *layout, kind,
                                                              jacobian_mode(c, kind), settings);
        stage.reference = reference_solution(*problem, Vector::Zero(problem->dof_count()));
        return stage;
      };
      auto first = make_problem(c, job.I, c.continuation.front());
      const auto chain = continuation_solve(factory, c.continuation, initial_guess(c, *first), settings);
      for (std::size_t s = 0; s < chain.runs.size(); ++s) {
        ResultRow r = blank(chain.betas[s]);
        fill_row(r, chain.runs[s]);
        rows.push_back(std::move(r));
      }
      if (!chain.completed && rows.empty()) {
        ResultRow r = blank(c.continuation.front());
        r.reason = chain.failure;
        rows.push_back(std::move(r));
      }
    } else {
      ResultRow r = blank(job.beta);
      const auto problem = make_problem(c, job.I, job.beta);
      const Vector u0 = initial_guess(c, *problem);
      const Vector ref = reference_solution(*problem, u0);
      if (job.method == MethodKind::newton) {
        fill_row(r, global_newton(*problem, u0, settings, ref));
      } else {
        const auto layout = make_layout(c, job.I, job.k);
        const SystemKind kind = system_kind(job.method);
        PreconditionedSystem system(*problem, layout, kind, jacobian_mode(c, kind), settings);
        if (is_fixed_point(job.method)) {
          fill_row(r, fixed_point_solve(system, u0, settings, ref));
          if (job.method == MethodKind::ras_fp) {
            r.first_step_residual = problem->residual(system.fixed_point_step(u0));
          }
        } else {
          fill_row(r, outer_newton(system, u0, settings, ref));
        }
      }
      rows.push_back(std::move(r));
    }
  } catch (const SolverError& e) {
    ResultRow r = blank(chained ? c.continuation.front() : job.beta);
    r.reason = e.what();
    rows.push_back(std::move(r));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : rows) r.wall_seconds = seconds / static_cast<double>(rows.size());
  return rows;
}

std::vector<Job> expand_jobs(const ExperimentConfig& c) {
  std::vector<Job> jobs;
  const bool chained = !c.continuation.empty();
  for (MethodKind m : c.methods) {
    const bool uses_chain = chained && !is_fixed_point(m) && m != MethodKind::newton;
    const std::vector<double> betas =
        uses_chain || c.problem == ProblemKind::diffusion2d ? std::vector<double>{0.0} : c.betas;
    for (int I : c.subdomains) {
      // Plain Newton does not depend on the overlap.
      const std::vector<int> overlaps = m == MethodKind::newton ? std::vector<int>{0} : c.overlaps;
      for (int k : overlaps) {
        for (double beta : betas) jobs.push_back({m, I, k, beta});
      }
    }
  }
  return jobs;
}

std::string curve_name(const ResultRow& r) {
  return r.method + "_I" + std::to_string(r.I) + "_k" + std::to_string(r.k) + "_beta" +
         fmt_beta(r.beta);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SolverError("cannot write " + path.string());
  out << text;
}

std::string to_string(ProblemKind p) {
  return p == ProblemKind::diffusion2d ? "diffusion2d" : "forchheimer1d";
}

}  // namespace

std::string to_string(MethodKind method) {
  switch (method) {
    case MethodKind::newton: return "newton";
    case MethodKind::ras_fp: return "ras-fp";
    case MethodKind::as_fp: return "as-fp";
    case MethodKind::ras2_fp: return "ras2-fp";
    case MethodKind::as2_fp: return "as2-fp";
    case MethodKind::raspen1: return "raspen1";
    case MethodKind::aspin1: return "aspin1";
    case MethodKind::raspen2: return "raspen2";
    case MethodKind::aspin2: return "aspin2";
  }
  return "?";
}

MethodKind parse_method(const std::string& name) {
  for (MethodKind m : {MethodKind::newton, MethodKind::ras_fp, MethodKind::as_fp,
                       MethodKind::ras2_fp, MethodKind::as2_fp, MethodKind::raspen1,
                       MethodKind::aspin1, MethodKind::raspen2, MethodKind::aspin2}) {
    if (to_string(m) == name) return m;
  }
  throw SolverError("unknown method '" + name + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::map<std::string, std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw SolverError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.emplace(key, value).second) {
      throw SolverError("config key '" + key + "' given twice");
    }
    c.echo.emplace_back(key, value);

    auto as_int = [&] { return static_cast<int>(parse_integer(key, value)); };
    auto as_double = [&] { return parse_double(key, value); };
    auto int_list = [&] {
      return parse_list<int>(key, value,
                             [&](const std::string& s) { return static_cast<int>(parse_integer(key, s)); });
    };
    auto double_list = [&] {
      return parse_list<double>(key, value, [&](const std::string& s) { return parse_double(key, s); });
    };

    if (key == "problem") {
      if (value == "forchheimer1d") c.problem = ProblemKind::forchheimer1d;
      else if (value == "diffusion2d") c.problem = ProblemKind::diffusion2d;
      else throw SolverError("unknown problem '" + value + "'");
    } else if (key == "field") {
      if (value == "smooth") c.field = FieldKind::smooth;
      else if (value == "random") c.field = FieldKind::random_contrast;
      else throw SolverError("unknown field '" + value + "'");
    } else if (key == "length") {
      c.length = as_double();
    } else if (key == "cells") {
      c.cells = parse_integer(key, value);
    } else if (key == "cells_per_subdomain") {
      c.cells_per_subdomain = parse_integer(key, value);
    } else if (key == "subdomains") {
      c.subdomains = int_list();
    } else if (key == "overlap") {
      c.overlaps = int_list();
    } else if (key == "beta") {
      c.betas = double_list();
    } else if (key == "continuation") {
      c.continuation = double_list();
    } else if (key == "methods") {
      c.methods.clear();
      if (!value.empty()) {
        c.methods = parse_list<MethodKind>(key, value, [](const std::string& s) { return parse_method(s); });
      }
    } else if (key == "aspin1_jacobian") {
      c.aspin1_jacobian = parse_jacobian_mode(value);
    } else if (key == "aspin2_jacobian") {
      c.aspin2_jacobian = parse_jacobian_mode(value);
    } else if (key == "coarse_test") {
      c.coarse_test = parse_coarse_test(value);
    } else if (key == "initial_guess") {
      if (value == "zero") c.initial_guess = InitialGuess::zero;
      else if (value == "darcy") c.initial_guess = InitialGuess::darcy;
      else throw SolverError("unknown initial guess '" + value + "'");
    } else if (key == "inner_tol") {
      c.settings.inner_tol = as_double();
    } else if (key == "outer_tol") {
      c.settings.outer_tol = as_double();
    } else if (key == "gmres_tol") {
      c.settings.gmres_tol = as_double();
    } else if (key == "max_inner") {
      c.settings.max_inner_iterations = as_int();
    } else if (key == "max_outer") {
      c.settings.max_outer_iterations = as_int();
    } else if (key == "max_gmres") {
      c.settings.max_gmres_iterations = as_int();
    } else if (key == "max_fixed_point_steps") {
      c.settings.max_fixed_point_steps = as_int();
    } else if (key == "divergence_threshold") {
      c.settings.divergence_threshold = as_double();
    } else if (key == "seed") {
      c.random.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    } else if (key == "log10_min") {
      c.random.log10_min = as_double();
    } else if (key == "log10_max") {
      c.random.log10_max = as_double();
    } else if (key == "correlation_cells") {
      c.random.correlation_cells = parse_integer(key, value);
    } else if (key == "source_amplitude") {
      c.random.source_amplitude = as_double();
    } else if (key == "source_frequency") {
      c.random.source_frequency = as_double();
    } else if (key == "permeability_file") {
      c.permeability_file = value;
    } else if (key == "source_file") {
      c.source_file = value;
    } else if (key == "output") {
      c.output_dir = value;
    } else {
      throw SolverError("unknown config key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SolverError("cannot open config " + path.string());
  return parse_config(in);
}

void ExperimentConfig::validate() const {
  settings.validate();
  if (methods.empty()) throw SolverError("config lists no methods");
  if (subdomains.empty() || overlaps.empty() || betas.empty()) {
    throw SolverError("config needs at least one subdomain count, overlap and beta");
  }
  if (cells && *cells < 1) throw SolverError("cells must be positive");
  if (cells_per_subdomain < 1) throw SolverError("cells_per_subdomain must be positive");
  if (!(length > 0.0)) throw SolverError("length must be positive");
  for (double b : betas) {
    if (b < 0.0) throw SolverError("beta must be nonnegative");
  }
  for (std::size_t s = 0; s < continuation.size(); ++s) {
    if (continuation[s] < 0.0 || (s > 0 && continuation[s] <= continuation[s - 1])) {
      throw SolverError("continuation betas must be nonnegative and increasing");
    }
  }
  if (problem == ProblemKind::diffusion2d) {
    if (field != FieldKind::smooth || !permeability_file.empty() || !source_file.empty()) {
      throw SolverError("diffusion2d has no permeability field");
    }
    if (initial_guess != InitialGuess::zero) {
      throw SolverError("diffusion2d supports only the zero initial guess");
    }
    if (!continuation.empty()) throw SolverError("diffusion2d has no beta to continue in");
  }
  if (random.log10_max < random.log10_min || random.correlation_cells < 1) {
    throw SolverError("invalid random field parameters");
  }
  for (int I : subdomains) {
    for (int k : overlaps) make_layout(*this, I, k);
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  const auto jobs = expand_jobs(config);
  std::vector<std::vector<ResultRow>> slots(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), threads,
               [&](int j) { slots[static_cast<std::size_t>(j)] = run_job(config, jobs[j]); });
  ExperimentResult result;
  for (auto& s : slots) {
    for (auto& r : s) result.rows.push_back(std::move(r));
  }
  return result;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "method,I,k,beta,outer_iters,LS_total,converged\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.I << ',' << r.k << ',' << fmt_beta(r.beta) << ','
        << r.outer_iters << ',' << r.ls_total << ',' << (r.converged ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string iterations_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "method,I,k,beta,n,ls_G,ls_in,ls_min,error,residual\n";
  for (const auto& r : rows) {
    const auto& ledger = r.ledger.rows();
    for (std::size_t n = 0; n < ledger.size(); ++n) {
      const auto& it = ledger[n];
      out << r.method << ',' << r.I << ',' << r.k << ',' << fmt_beta(r.beta) << ',' << n + 1
          << ',' << it.ls_G << ',' << it.ls_in << ',' << it.ls_min << ',' << fmt(it.error) << ','
          << fmt(it.residual) << '\n';
    }
  }
  return out.str();
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "curves");
  write_text(dir / "results.csv", results_csv(result.rows));
  write_text(dir / "iterations.csv", iterations_csv(result.rows));

  for (const auto& r : result.rows) {
    std::ostringstream curve;
    curve << "step,error,LS\n0," << fmt(r.initial_error) << ",0\n";
    for (std::size_t n = 0; n < r.ledger.size(); ++n) {
      curve << n + 1 << ',' << fmt(r.ledger.rows()[n].error) << ',' << r.ledger.cumulative(n)
            << '\n';
    }
    write_text(dir / "curves" / (curve_name(r) + ".csv"), curve.str());
    if (r.first_step_residual.size() > 0) {
      std::ostringstream res;
      res << "cell,residual\n";
      for (Index c = 0; c < r.first_step_residual.size(); ++c) {
        res << c << ',' << fmt(r.first_step_residual[c]) << '\n';
      }
      write_text(dir / ("first_step_residual_" + curve_name(r) + ".csv"), res.str());
    }
  }

  nlohmann::json summary;
  summary["version"] = kVersion;
  summary["problem"] = to_string(config.problem);
  summary["seed"] = config.random.seed;
  nlohmann::json echo = nlohmann::json::object();
  for (const auto& [k, v] : config.echo) echo[k] = v;
  summary["config"] = echo;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"method", r.method},
                    {"I", r.I},
                    {"k", r.k},
                    {"beta", r.beta},
                    {"cells", r.cells},
                    {"outer_iters", r.outer_iters},
                    {"LS_total", r.ls_total},
                    {"converged", r.converged},
                    {"reason", r.reason},
                    {"wall_seconds", r.wall_seconds}});
  }
  summary["rows"] = rows;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

std::vector<ResultRow> read_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SolverError("cannot open " + path.string());
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split(t, ',');
    break;
  }
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* need : {"method", "I", "k", "beta", "outer_iters", "LS_total"}) {
    if (!col.count(need)) {
      throw SolverError(path.string() + ": missing column '" + need + "'");
    }
  }
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto f = split(t, ',');
    if (f.size() != header.size()) {
      throw SolverError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " fields");
    }
    const std::string where = path.string() + ":" + std::to_string(lineno);
    ResultRow r;
    r.method = f[col["method"]];
    r.I = static_cast<int>(parse_integer(where, f[col["I"]]));
    r.k = static_cast<int>(parse_integer(where, f[col["k"]]));
    r.beta = parse_double(where, f[col["beta"]]);
    r.outer_iters = static_cast<int>(parse_integer(where, f[col["outer_iters"]]));
    r.ls_total = static_cast<int>(parse_integer(where, f[col["LS_total"]]));
    r.converged = !col.count("converged") || f[col["converged"]] == "true";
    rows.push_back(std::move(r));
  }
  return rows;
}

bool CompareReport::all_pass() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const CompareCell& c) { return c.found && c.outer_ok && c.ls_ok; });
}

std::string CompareReport::format() const {
  std::ostringstream out;
  out << "method,I,k,beta,outer,outer_ref,outer_ok,LS,LS_ref,LS_ok\n";
  for (const auto& c : cells) {
    out << c.method << ',' << c.I << ',' << c.k << ',' << fmt_beta(c.beta) << ',';
    if (!c.found) {
      out << "missing," << c.outer_ref << ",FAIL,missing," << c.ls_ref << ",FAIL\n";
      continue;
    }
    out << c.outer << ',' << c.outer_ref << ',' << (c.outer_ok ? "pass" : "FAIL") << ',' << c.ls
        << ',' << c.ls_ref << ',' << (c.ls_ok ? "pass" : "FAIL") << '\n';
  }
  out << (all_pass() ? "all cells pass\n" : "some cells FAIL\n");
  return out.str();
}

CompareReport compare_table(const std::vector<ResultRow>& rows,
                            const std::vector<ResultRow>& reference,
                            const CompareTolerances& tolerances) {
  CompareReport report;
  for (const auto& ref : reference) {
    CompareCell cell;
    cell.method = ref.method;
    cell.I = ref.I;
    cell.k = ref.k;
    cell.beta = ref.beta;
    cell.outer_ref = ref.outer_iters;
    cell.ls_ref = ref.ls_total;
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const ResultRow& r) {
      return r.method == ref.method && r.I == ref.I && r.k == ref.k &&
             std::abs(r.beta - ref.beta) <= 1e-12 * (1.0 + std::abs(ref.beta));
    });
    if (it != rows.end()) {
      cell.found = true;
      cell.outer = it->outer_iters;
      cell.ls = it->ls_total;
      cell.outer_ok = it->converged && std::abs(cell.outer - cell.outer_ref) <= tolerances.outer;
      cell.ls_ok = it->converged && std::abs(cell.ls - cell.ls_ref) <=
                                        tolerances.ls_relative * static_cast<double>(cell.ls_ref);
    }
    report.cells.push_back(cell);
  }
  return report;
}

CompareReport compare_table(const std::vector<ResultRow>& rows,
                            const std::filesystem::path& reference,
                            const CompareTolerances& tolerances) {
  return compare_table(rows, read_summary_csv(reference), tolerances);
}

}  // namespace raspen
