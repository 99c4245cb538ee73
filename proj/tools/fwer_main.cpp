// Command-line front end: every engine exposed as a reproducible, scriptable
// subcommand with CSV (default) or JSON output. Exit codes: 0 success,
// 1 usage/validation error, 2 numerical non-convergence or failed
// certification.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fwer/bounds.hpp"
#include "fwer/exact.hpp"
#include "fwer/manifest.hpp"
#include "fwer/mc.hpp"
#include "fwer/model.hpp"
#include "fwer/normal.hpp"
#include "fwer/version.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct OutputOptions {
  std::string path;  // empty = stdout
  std::string format = "csv";
};

std::string cell_to_string(const ordered_json& v) {
  if (v.is_boolean()) return fwer::format_bool(v.get<bool>());
  if (v.is_number_float()) return fwer::format_double(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

int emit_table(const OutputOptions& out, const fwer::RunManifest& manifest,
               const std::vector<std::string>& columns,
               const std::vector<ordered_json>& rows,
               const std::vector<std::string>& trailing_comments,
               int status) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.path.empty()) {
    file.open(out.path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot open output file '" << out.path << "'\n";
      return kExitUsage;
    }
    os = &file;
  }
  if (out.format == "json") {
    ordered_json doc;
    doc["manifest"] = nlohmann::json::parse(manifest.to_json());
    doc["rows"] = rows;
    if (!trailing_comments.empty()) doc["notes"] = trailing_comments;
    *os << doc.dump(2) << "\n";
    return status;
  }
  *os << manifest.csv_comment() << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    *os << (i ? "," : "") << columns[i];
  *os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      *os << (i ? "," : "") << cell_to_string(row.at(columns[i]));
    *os << "\n";
  }
  for (const auto& line : trailing_comments) *os << "# " << line << "\n";
  return status;
}

struct QuadOptions {
  std::string method = "adaptive";
  int nodes = 201;
  double tol = 1e-11;
  int max_subdivisions = 4000;

  fwer::QuadratureSpec to_spec() const {
    fwer::QuadratureSpec spec;
    spec.method = method == "gh" ? fwer::QuadMethod::gauss_hermite
                                 : fwer::QuadMethod::adaptive_subdivision;
    spec.node_count = nodes;
    spec.abs_tol = tol;
    spec.rel_tol = tol;
    spec.max_subdivisions = max_subdivisions;
    return spec;
  }
  void describe(std::map<std::string, std::string>& params) const {
    params["quad_method"] = method;
    if (method == "gh") params["quad_nodes"] = std::to_string(nodes);
    params["quad_tol"] = fwer::format_double(tol);
    params["max_subdivisions"] = std::to_string(max_subdivisions);
  }
};

void add_quad_flags(CLI::App* cmd, QuadOptions& q) {
  cmd->add_option("--quad-method", q.method, "Quadrature method")
      ->transform(CLI::IsMember({"adaptive", "gh"}))
      ->capture_default_str();
  cmd->add_option("--quad-nodes", q.nodes, "Gauss-Hermite node count")
      ->check(CLI::Range(32, 100000))
      ->capture_default_str();
  cmd->add_option("--quad-tol", q.tol, "Absolute and relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-subdiv", q.max_subdivisions, "Adaptive subdivision cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--out", out.path, "Output file (default: stdout)");
  cmd->add_option("--format", out.format, "Output format")
      ->transform(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

// Resolves --alpha (family level, Bonferroni alpha/n) or --alpha-n (per test).
double resolve_alpha_n(std::int64_t n, double alpha, double alpha_n) {
  if (alpha > 0.0 && alpha_n > 0.0)
    throw CLI::ValidationError("give either --alpha or --alpha-n, not both");
  if (alpha > 0.0) return alpha / static_cast<double>(n);
  if (alpha_n > 0.0) return alpha_n;
  throw CLI::ValidationError("one of --alpha or --alpha-n is required");
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? "," : "") << fwer::format_double(v[i]);
  return os.str();
}

// ---------------------------------------------------------------- exact ----

struct ExactOptions {
  std::int64_t n = 0;
  double alpha = -1.0, alpha_n = -1.0;
  std::vector<double> rho_grid;
  QuadOptions quad;
  OutputOptions out;
};

int run_exact(const ExactOptions& opt) {
  const double alpha_n = resolve_alpha_n(opt.n, opt.alpha, opt.alpha_n);
  const fwer::QuadratureSpec spec = opt.quad.to_spec();
  const std::vector<std::string> columns = {
      "rho",   "h",     "fwer",  "h_prime",    "h_second", "term1",
      "term2", "term3", "quad_error", "converged"};
  std::vector<ordered_json> rows;
  bool all_converged = true;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const double rho : opt.rho_grid) {
    const fwer::ModelConfig config =
        fwer::ModelConfig::from_per_test_level(opt.n, rho, alpha_n);
    const fwer::ExactResult he = fwer::h_exact(config, spec);
    ordered_json row;
    row["rho"] = rho;
    row["h"] = he.h;
    row["fwer"] = he.fwer;
    double quad_error = he.quad_error_estimate;
    bool converged = he.converged;
    if (rho > 0.0 && rho < 1.0) {
      const fwer::EngineValue hp = fwer::h_prime(config, spec);
      const fwer::SecondDerivativeBreakdown hs = fwer::h_second(config, spec);
      row["h_prime"] = hp.value;
      row["h_second"] = hs.total;
      row["term1"] = hs.term1;
      row["term2"] = hs.term2;
      row["term3"] = hs.term3;
      quad_error += hp.quad_error_estimate + hs.quad_error_estimate;
      converged = converged && hp.converged && hs.converged;
    } else {
      // the derivative formulas live on the open interval
      row["h_prime"] = nan;
      row["h_second"] = nan;
      row["term1"] = nan;
      row["term2"] = nan;
      row["term3"] = nan;
    }
    row["quad_error"] = quad_error;
    row["converged"] = converged;
    all_converged = all_converged && converged;
    rows.push_back(std::move(row));
  }
  fwer::RunManifest manifest;
  manifest.command = "exact";
  manifest.schema = "fwer.exact.v1";
  manifest.tool_version = fwer::kToolVersion;
  manifest.parameters["n"] = std::to_string(opt.n);
  manifest.parameters["alpha_n"] = fwer::format_double(alpha_n);
  manifest.parameters["rho_grid"] = join_doubles(opt.rho_grid);
  opt.quad.describe(manifest.parameters);
  return emit_table(opt.out, manifest, columns, rows, {},
                    all_converged ? kExitOk : kExitNumerical);
}

// ------------------------------------------------------------- simulate ----

struct SimulateOptions {
  std::int64_t n = 0;
  double alpha = -1.0, alpha_n = -1.0;
  double rho = 0.0;
  long long reps = 10000;
  std::uint64_t seed = 1;
  int streams = 1;
  OutputOptions out;
};

int run_simulate(const SimulateOptions& opt) {
  const double alpha_n = resolve_alpha_n(opt.n, opt.alpha, opt.alpha_n);
  const fwer::ModelConfig config =
      fwer::ModelConfig::from_per_test_level(opt.n, opt.rho, alpha_n);
  fwer::McSpec spec;
  spec.replications = opt.reps;
  spec.seed = opt.seed;
  spec.parallel_streams = opt.streams;
  const fwer::McEstimate est = fwer::simulate_fwer(config, spec);

  const std::vector<std::string> columns = {
      "n",        "rho",      "alpha_n",  "cutoff",    "replications",
      "fwer_hat", "std_error", "ci95_low", "ci95_high", "seed"};
  ordered_json row;
  row["n"] = opt.n;
  row["rho"] = opt.rho;
  row["alpha_n"] = alpha_n;
  row["cutoff"] = config.cutoff();
  row["replications"] = est.replications;
  row["fwer_hat"] = est.fwer_hat;
  row["std_error"] = est.std_error;
  row["ci95_low"] = est.ci95_low;
  row["ci95_high"] = est.ci95_high;
  row["seed"] = est.seed;

  fwer::RunManifest manifest;
  manifest.command = "simulate";
  manifest.schema = "fwer.simulate.v1";
  manifest.tool_version = fwer::kToolVersion;
  manifest.seed = opt.seed;
  manifest.parameters["n"] = std::to_string(opt.n);
  manifest.parameters["rho"] = fwer::format_double(opt.rho);
  manifest.parameters["alpha_n"] = fwer::format_double(alpha_n);
  manifest.parameters["replications"] = std::to_string(opt.reps);
  return emit_table(opt.out, manifest, columns, {row}, {}, kExitOk);
}

// --------------------------------------------------------------- table1 ----

struct Table1Options {
  long long reps = 10000;
  std::uint64_t seed = 1;
  int streams = 8;
  QuadOptions quad;
  OutputOptions out;
};

int run_table1(const Table1Options& opt) {
  const std::vector<fwer::Table1Row> table =
      fwer::reproduce_table1(opt.seed, opt.reps, opt.streams, opt.quad.to_spec());
  const std::vector<std::string> columns = {
      "rho",        "alpha",      "fwer_hat",         "se",
      "fwer_exact", "bound_alpha_1mrho", "line_bound", "within_asymptotic",
      "within_4se_exact", "ok"};
  std::vector<ordered_json> rows;
  int within = 0;
  bool all_ok = true;
  for (const auto& r : table) {
    ordered_json row;
    row["rho"] = r.rho;
    row["alpha"] = r.alpha;
    row["fwer_hat"] = r.fwer_hat;
    row["se"] = r.std_error;
    row["fwer_exact"] = r.fwer_exact;
    row["bound_alpha_1mrho"] = r.bound_asymptotic;
    row["line_bound"] = r.line_bound;
    row["within_asymptotic"] = r.within_asymptotic;
    row["within_4se_exact"] = r.within_4se_exact;
    row["ok"] = r.ok;
    within += r.within_asymptotic ? 1 : 0;
    all_ok = all_ok && r.ok;
    rows.push_back(std::move(row));
  }
  std::ostringstream summary;
  summary << "cells_within_asymptotic_bound " << within << "/" << table.size();

  fwer::RunManifest manifest;
  manifest.command = "table1";
  manifest.schema = "fwer.table1.v1";
  manifest.tool_version = fwer::kToolVersion;
  manifest.seed = opt.seed;
  manifest.parameters["n"] = std::to_string(fwer::kTable1N);
  manifest.parameters["replications"] = std::to_string(opt.reps);
  opt.quad.describe(manifest.parameters);
  return emit_table(opt.out, manifest, columns, rows, {summary.str()},
                    all_ok ? kExitOk : kExitNumerical);
}

// ----------------------------------------------------------------- scan ----

struct ScanOptions {
  std::vector<std::int64_t> n_ladder;
  double alpha = 0.05;
  std::vector<double> rho_grid;
  double rho_anchor = 0.5;
  QuadOptions quad;
  std::string out_convexity;
  std::string out_asymptotics;
  std::string format = "csv";
};

int run_scan(const ScanOptions& opt) {
  const fwer::QuadratureSpec spec = opt.quad.to_spec();
  bool all_converged = true;

  const std::vector<std::string> conv_columns = {
      "n", "rho", "fwer", "h_second_total", "fwer_curvature_sign",
      "sign_tolerance", "quad_error", "converged"};
  std::vector<ordered_json> conv_rows;
  for (const std::int64_t n : opt.n_ladder) {
    for (const auto& r : fwer::convexity_scan(n, opt.alpha, opt.rho_grid, spec)) {
      ordered_json row;
      row["n"] = n;
      row["rho"] = r.rho;
      row["fwer"] = r.fwer;
      row["h_second_total"] = r.h_second_total;
      row["fwer_curvature_sign"] = r.fwer_curvature_sign;
      row["sign_tolerance"] = r.sign_tolerance;
      row["quad_error"] = r.quad_error_estimate;
      row["converged"] = r.converged;
      all_converged = all_converged && r.converged;
      conv_rows.push_back(std::move(row));
    }
  }

  const std::vector<std::string> asym_columns = {
      "n",  "c",  "c2_over_log_n", "mills_check", "z0_plus_c_t",
      "z0_plus_c_rootrho_t", "abs_term2", "abs_term3", "lemma2_residual",
      "converged"};
  const auto diag = fwer::asymptotic_diagnostics(opt.n_ladder, opt.alpha, opt.rho_anchor);
  const auto ladder = fwer::lemma_ladder(opt.n_ladder, opt.alpha, opt.rho_anchor, spec);
  std::vector<ordered_json> asym_rows;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    ordered_json row;
    row["n"] = diag[i].n;
    row["c"] = diag[i].c;
    row["c2_over_log_n"] = diag[i].c_squared_over_log_n;
    row["mills_check"] = diag[i].mills_check;
    row["z0_plus_c_t"] = diag[i].z0_plus_c_t;
    row["z0_plus_c_rootrho_t"] = diag[i].z0_plus_c_root_rho_t;
    row["abs_term2"] = ladder[i].abs_term2;
    row["abs_term3"] = ladder[i].abs_term3;
    row["lemma2_residual"] = ladder[i].lemma2_residual;
    row["converged"] = ladder[i].converged;
    all_converged = all_converged && ladder[i].converged;
    asym_rows.push_back(std::move(row));
  }

  auto make_manifest = [&](const char* which, const char* schema) {
    fwer::RunManifest manifest;
    manifest.command = std::string("scan/") + which;
    manifest.schema = schema;
    manifest.tool_version = fwer::kToolVersion;
    manifest.parameters["alpha"] = fwer::format_double(opt.alpha);
    {
      std::ostringstream os;
      for (std::size_t i = 0; i < opt.n_ladder.size(); ++i)
        os << (i ? "," : "") << opt.n_ladder[i];
      manifest.parameters["n_ladder"] = os.str();
    }
    manifest.parameters["rho_grid"] = join_doubles(opt.rho_grid);
    manifest.parameters["rho_anchor"] = fwer::format_double(opt.rho_anchor);
    opt.quad.describe(manifest.parameters);
    return manifest;
  };

  OutputOptions conv_out{opt.out_convexity, opt.format};
  OutputOptions asym_out{opt.out_asymptotics, opt.format};
  int rc = emit_table(conv_out, make_manifest("convexity", "fwer.scan.convexity.v1"),
                      conv_columns, conv_rows, {}, kExitOk);
  if (rc != kExitOk) return rc;
  rc = emit_table(asym_out, make_manifest("asymptotics", "fwer.scan.asymptotics.v1"),
                  asym_columns, asym_rows, {}, kExitOk);
  if (rc != kExitOk) return rc;
  return all_converged ? kExitOk : kExitNumerical;
}

// -------------------------------------------------------------- correct ----

struct CorrectOptions {
  double alpha_target = 0.0;
  double rho = 0.0;
  std::int64_t n = 0;
  QuadOptions quad;
  OutputOptions out;
};

int run_correct(const CorrectOptions& opt) {
  const double a_star =
      fwer::corrected_bonferroni_level(opt.alpha_target, opt.rho, opt.n);
  const double c_star = fwer::cutoff_from_level(a_star);
  const fwer::ModelConfig config =
      fwer::ModelConfig::from_per_test_level(opt.n, opt.rho, a_star);
  const fwer::ExactResult exact = fwer::h_exact(config, opt.quad.to_spec());
  const bool certified =
      exact.converged &&
      exact.fwer <= opt.alpha_target + 10.0 * exact.quad_error_estimate + 1e-12;

  const std::vector<std::string> columns = {
      "alpha_target", "rho", "n", "a_star", "c_star", "fwer_exact_at_a_star",
      "quad_error", "certified"};
  ordered_json row;
  row["alpha_target"] = opt.alpha_target;
  row["rho"] = opt.rho;
  row["n"] = opt.n;
  row["a_star"] = a_star;
  row["c_star"] = c_star;
  row["fwer_exact_at_a_star"] = exact.fwer;
  row["quad_error"] = exact.quad_error_estimate;
  row["certified"] = certified;

  fwer::RunManifest manifest;
  manifest.command = "correct";
  manifest.schema = "fwer.correct.v1";
  manifest.tool_version = fwer::kToolVersion;
  manifest.parameters["alpha_target"] = fwer::format_double(opt.alpha_target);
  manifest.parameters["rho"] = fwer::format_double(opt.rho);
  manifest.parameters["n"] = std::to_string(opt.n);
  opt.quad.describe(manifest.parameters);
  return emit_table(opt.out, manifest, columns, {row}, {},
                    certified ? kExitOk : kExitNumerical);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FWER toolkit for equicorrelated one-sided normal testing"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option defaults from a key=value file");

  ExactOptions exact_opt;
  CLI::App* exact_cmd =
      app.add_subcommand("exact", "Quadrature FWER, H and derivatives over a rho grid");
  exact_cmd->add_option("--n", exact_opt.n, "Number of hypotheses")
      ->required()
      ->check(CLI::PositiveNumber);
  exact_cmd->add_option("--alpha", exact_opt.alpha, "Family level (Bonferroni alpha/n)")
      ->check(CLI::Range(0.0, 1.0));
  exact_cmd->add_option("--alpha-n", exact_opt.alpha_n, "Per-test level")
      ->check(CLI::Range(0.0, 1.0));
  exact_cmd->add_option("--rho", exact_opt.rho_grid, "Correlation(s), comma separated")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  add_quad_flags(exact_cmd, exact_opt.quad);
  add_output_flags(exact_cmd, exact_opt.out);

  SimulateOptions sim_opt;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo FWER estimate");
  sim_cmd->add_option("--n", sim_opt.n, "Number of hypotheses")
      ->required()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--alpha", sim_opt.alpha, "Family level (Bonferroni alpha/n)")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--alpha-n", sim_opt.alpha_n, "Per-test level")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--rho", sim_opt.rho, "Correlation")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--reps", sim_opt.reps, "Replications")
      ->required()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_opt.seed, "64-bit seed")->capture_default_str();
  sim_cmd->add_option("--streams", sim_opt.streams, "Worker threads (result-invariant)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output_flags(sim_cmd, sim_opt.out);

  Table1Options t1_opt;
  CLI::App* t1_cmd = app.add_subcommand(
      "table1", "36-cell (rho, alpha) grid: estimate vs exact vs bounds");
  t1_cmd->add_option("--reps", t1_opt.reps, "Replications per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  t1_cmd->add_option("--seed", t1_opt.seed, "64-bit seed")->capture_default_str();
  t1_cmd->add_option("--streams", t1_opt.streams, "Worker threads (result-invariant)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_quad_flags(t1_cmd, t1_opt.quad);
  add_output_flags(t1_cmd, t1_opt.out);

  ScanOptions scan_opt;
  CLI::App* scan_cmd = app.add_subcommand(
      "scan", "Convexity scan over rho plus large-n diagnostics ladder");
  scan_cmd->add_option("--n", scan_opt.n_ladder, "n ladder, comma separated")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  scan_cmd->add_option("--alpha", scan_opt.alpha, "Family level")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  scan_cmd->add_option("--rho-grid", scan_opt.rho_grid, "Convexity grid, comma separated")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  scan_cmd->add_option("--rho", scan_opt.rho_anchor, "Anchor rho for the diagnostics ladder")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  add_quad_flags(scan_cmd, scan_opt.quad);
  scan_cmd->add_option("--out-convexity", scan_opt.out_convexity,
                       "Convexity table file (default: stdout)");
  scan_cmd->add_option("--out-asymptotics", scan_opt.out_asymptotics,
                       "Asymptotics table file (default: stdout)");
  scan_cmd->add_option("--format", scan_opt.format, "Output format")
      ->transform(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  CorrectOptions corr_opt;
  CLI::App* corr_cmd = app.add_subcommand(
      "correct", "Correlation-corrected per-test level meeting a family target");
  corr_cmd->add_option("--alpha", corr_opt.alpha_target, "Family FWER target")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  corr_cmd->add_option("--rho", corr_opt.rho, "Correlation (must be < 1)")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  corr_cmd->add_option("--n", corr_opt.n, "Number of hypotheses")
      ->required()
      ->check(CLI::PositiveNumber);
  add_quad_flags(corr_cmd, corr_opt.quad);
  add_output_flags(corr_cmd, corr_opt.out);

  CLI::App* version_cmd = app.add_subcommand("version", "Print tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (version_cmd->parsed()) {
      std::cout << fwer::kToolName << " " << fwer::kToolVersion << "\n";
      return kExitOk;
    }
    if (exact_cmd->parsed()) return run_exact(exact_opt);
    if (sim_cmd->parsed()) return run_simulate(sim_opt);
    if (t1_cmd->parsed()) return run_table1(t1_opt);
    if (scan_cmd->parsed()) return run_scan(scan_opt);
    if (corr_cmd->parsed()) return run_correct(corr_opt);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
