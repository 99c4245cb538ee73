// Acceptance suite: each numbered criterion runs at its stated tolerance and
// prints one PASS/FAIL line (details indented below it). Select criteria by
// number on the command line; no arguments runs all ten.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fwer/bounds.hpp"
#include "fwer/exact.hpp"
#include "fwer/mc.hpp"
#include "fwer/model.hpp"
#include "fwer/normal.hpp"
#include "fixtures/oracle_tables.h"

namespace fs = std::filesystem;
using namespace fwer;

namespace {

struct Checker {
  bool pass = true;
  std::vector<std::string> details;

  void expect(bool ok, const std::string& msg) {
    if (!ok) {
      pass = false;
      details.push_back("violated: " + msg);
    }
  }
  void note(const std::string& msg) { details.push_back(msg); }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

QuadratureSpec tight_spec() {
  QuadratureSpec spec;
  spec.abs_tol = 1e-12;
  spec.rel_tol = 1e-12;
  return spec;
}

int worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(16u, std::max(1u, hw)));
}

// paper-reported estimates for the 36-cell grid, row-major over
// rho {0,.1,.3,.5,.7,.9} x alpha {.01,.05,.1,.4,.6,.7}
constexpr double kPrintedTable[6][6] = {
    {0.01018, 0.0486, 0.09424, 0.32914, 0.45065, 0.50499},
    {0.00996, 0.04367, 0.07978, 0.23801, 0.31105, 0.34295},
    {0.00683, 0.02523, 0.04363, 0.11495, 0.15013, 0.16494},
    {0.00347, 0.01156, 0.01918, 0.04909, 0.06414, 0.07042},
    {0.00101, 0.00363, 0.00588, 0.01617, 0.02149, 0.023},
    {9.00e-05, 0.00046, 0.00053, 0.00221, 0.00324, 0.0031},
};

// ------------------------------------------------------------ criterion 1 --

Checker criterion1_table_reproduction() {
  Checker ck;
  const long long reps = 10000;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = reproduce_table1(20250810, reps, worker_count(), tight_spec());
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ck.note("runtime " + fmt(elapsed) + " s (" + std::to_string(worker_count()) +
          " workers)");
  ck.expect(elapsed < 300.0, "runtime exceeded five minutes");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    ck.expect(r.ok, "cell (" + fmt(r.rho) + "," + fmt(r.alpha) + ") failed to evaluate");
    if (!r.ok) continue;
    const double se_exact =
        std::sqrt(r.fwer_exact * (1.0 - r.fwer_exact) / static_cast<double>(reps));
    ck.expect(std::fabs(r.fwer_hat - r.fwer_exact) <= 4.0 * se_exact,
              "cell (" + fmt(r.rho) + "," + fmt(r.alpha) + "): |hat-exact| = " +
                  fmt(std::fabs(r.fwer_hat - r.fwer_exact)) + " > 4 se = " +
                  fmt(4.0 * se_exact));
    const double printed = kPrintedTable[i / 6][i % 6];
    const double pooled = std::sqrt(
        r.fwer_exact * (1.0 - r.fwer_exact) / static_cast<double>(reps) +
        printed * (1.0 - printed) / 1e4);
    ck.expect(std::fabs(r.fwer_hat - printed) <= 4.0 * pooled,
              "cell (" + fmt(r.rho) + "," + fmt(r.alpha) + "): |hat-printed| = " +
                  fmt(std::fabs(r.fwer_hat - printed)) + " > 4 pooled se = " +
                  fmt(4.0 * pooled));
    if (r.rho == 0.1 && r.alpha == 0.01) {
      // the one near-violation cell: the estimate must sit within noise of
      // the 0.009 asymptotic bound rather than clearly below it
      ck.note("cell (0.1,0.01): fwer_hat = " + fmt(r.fwer_hat) + ", bound 0.009, se = " +
              fmt(se_exact));
      ck.expect(std::fabs(r.fwer_hat - 0.009) <= 4.0 * se_exact,
                "cell (0.1,0.01) not within noise of the 0.009 bound");
    }
  }
  return ck;
}

// ------------------------------------------------------------ criterion 2 --

Checker criterion2_endpoints() {
  Checker ck;
  for (const auto& ec : oracle::kEndpointCases) {
    const auto rho0 = h_exact(ModelConfig::bonferroni(ec.n, 0.0, ec.alpha));
    ck.expect(std::fabs(rho0.fwer - ec.fwer_rho0) <= 1e-12 * ec.fwer_rho0,
              "rho=0 alpha=" + fmt(ec.alpha) + " n=" + std::to_string(ec.n));
    const auto cfg1 = ModelConfig::bonferroni(ec.n, 1.0, ec.alpha);
    const auto rho1 = h_exact(cfg1);
    ck.expect(std::fabs(rho1.fwer - cfg1.alpha_n()) <= 1e-12 * cfg1.alpha_n(),
              "rho=1 alpha=" + fmt(ec.alpha) + " n=" + std::to_string(ec.n));
  }
  return ck;
}

// ------------------------------------------------------------ criterion 3 --

Checker criterion3_derivative_gate() {
  Checker ck;
  const QuadratureSpec spec = tight_spec();
  const double rho_grid[] = {0.2, 0.35, 0.5, 0.65, 0.8};
  const std::int64_t n_grid[] = {100, 10000};
  const double alpha_grid[] = {0.05, 0.4};
  for (const std::int64_t n : n_grid) {
    for (const double alpha : alpha_grid) {
      for (const double rho : rho_grid) {
        const auto cfg = ModelConfig::bonferroni(n, rho, alpha);
        const auto up1 = ModelConfig::bonferroni(n, rho + 1e-4, alpha);
        const auto dn1 = ModelConfig::bonferroni(n, rho - 1e-4, alpha);
        const double fd1 =
            (h_exact(up1, spec).h - h_exact(dn1, spec).h) / 2e-4;
        const auto hp = h_prime(cfg, spec);
        ck.expect(std::fabs(hp.value - fd1) <=
                      std::max(1e-5, 1e-2 * std::fabs(hp.value)),
                  "H' at n=" + std::to_string(n) + " alpha=" + fmt(alpha) +
                      " rho=" + fmt(rho) + ": analytic " + fmt(hp.value) +
                      " vs FD " + fmt(fd1));
        const auto up2 = ModelConfig::bonferroni(n, rho + 1e-3, alpha);
        const auto dn2 = ModelConfig::bonferroni(n, rho - 1e-3, alpha);
        const double fd2 = (h_exact(up2, spec).h - 2.0 * h_exact(cfg, spec).h +
                            h_exact(dn2, spec).h) /
                           1e-6;
        const auto hs = h_second(cfg, spec);
        ck.expect(std::fabs(hs.total - fd2) <=
                      std::max(1e-5, 1e-2 * std::fabs(hs.total)),
                  "H'' at n=" + std::to_string(n) + " alpha=" + fmt(alpha) +
                      " rho=" + fmt(rho) + ": analytic " + fmt(hs.total) +
                      " vs FD " + fmt(fd2));
      }
    }
  }
  // the gate fixes the a-form: the alternate form misses by far
  const auto probe = ModelConfig::bonferroni(100, 0.5, 0.05);
  const auto up2 = ModelConfig::bonferroni(100, 0.501, 0.05);
  const auto dn2 = ModelConfig::bonferroni(100, 0.499, 0.05);
  const double fd2 = (h_exact(up2, spec).h - 2.0 * h_exact(probe, spec).h +
                      h_exact(dn2, spec).h) / 1e-6;
  const double main_gap = std::fabs(h_second(probe, spec).total - fd2);
  const double alt_gap =
      std::fabs(h_second(probe, spec, AForm::tail_at_d).total - fd2);
  ck.note("a-form gate: pinned-form gap " + fmt(main_gap) + ", alternate-form gap " +
          fmt(alt_gap));
  ck.expect(main_gap < std::max(1e-5, 1e-2 * std::fabs(fd2)),
            "pinned a-form fails its own gate");
  ck.expect(alt_gap > 10.0 * std::max(1e-5, 1e-2 * std::fabs(fd2)),
            "alternate a-form unexpectedly also passes the gate");
  return ck;
}

// ------------------------------------------------------------ criterion 4 --

Checker criterion4_convexity() {
  Checker ck;
  const QuadratureSpec spec = tight_spec();
  const std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  for (const double alpha : {0.01, 0.05, 0.1, 0.4}) {
    for (const auto& row : convexity_scan(10000, alpha, grid, spec)) {
      ck.expect(row.converged,
                "quadrature failed at alpha=" + fmt(alpha) + " rho=" + fmt(row.rho));
      ck.expect(row.h_second_total <= row.sign_tolerance,
                "H'' = " + fmt(row.h_second_total) + " > tolerance " +
                    fmt(row.sign_tolerance) + " at alpha=" + fmt(alpha) +
                    " rho=" + fmt(row.rho));
    }
  }
  return ck;
}

// ------------------------------------------------------------ criterion 5 --

Checker criterion5_bound_dominance() {
  Checker ck;
  const QuadratureSpec spec = tight_spec();
  for (const double alpha : {0.01, 0.05, 0.1, 0.4}) {
    for (double rho = 0.1; rho < 0.95; rho += 0.1) {
      const auto cfg = ModelConfig::bonferroni(10000, rho, alpha);
      const double fw = h_exact(cfg, spec).fwer;
      const double lb = line_bound(rho, 10000, cfg.alpha_n());
      const double sb = simplified_bound(rho, 10000, cfg.alpha_n()).value;
      ck.note("alpha=" + fmt(alpha) + " rho=" + fmt(rho) + ": fwer=" + fmt(fw) +
              " line=" + fmt(lb) + " simplified=" + fmt(sb) +
              " slack(line-fwer)=" + fmt(lb - fw));
      ck.expect(fw <= lb + 1e-12, "fwer exceeds the chord bound at alpha=" +
                                      fmt(alpha) + " rho=" + fmt(rho) +
                                      " by " + fmt(fw - lb));
      ck.expect(lb <= sb + 1e-15, "chord exceeds the simplified bound at alpha=" +
                                      fmt(alpha) + " rho=" + fmt(rho));
    }
  }
  return ck;
}

// ------------------------------------------------------------ criterion 6 --

Checker criterion6_lemma_ladder() {
  Checker ck;
  const QuadratureSpec spec = tight_spec();
  const std::vector<std::int64_t> ladder = {100, 1000, 10000};
  for (const auto& [rho, alpha] : std::vector<std::pair<double, double>>{
           {0.5, 0.05}, {0.3, 0.1}}) {
    const auto rows = lemma_ladder(ladder, alpha, rho, spec);
    std::string t2 = "|term2|:", t3 = "|term3|:", rr = "residual:";
    for (const auto& row : rows) {
      t2 += " " + fmt(row.abs_term2);
      t3 += " " + fmt(row.abs_term3);
      rr += " " + fmt(row.lemma2_residual);
    }
    ck.note("(rho,alpha)=(" + fmt(rho) + "," + fmt(alpha) + ") " + t2 + "; " + t3 +
            "; " + rr);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      ck.expect(rows[i].abs_term2 < rows[i - 1].abs_term2,
                "|term2| not strictly decreasing at (rho,alpha)=(" + fmt(rho) + "," +
                    fmt(alpha) + "), step n=" + std::to_string(rows[i].n));
      ck.expect(rows[i].abs_term3 < rows[i - 1].abs_term3,
                "|term3| not strictly decreasing at (rho,alpha)=(" + fmt(rho) + "," +
                    fmt(alpha) + "), step n=" + std::to_string(rows[i].n));
      ck.expect(rows[i].lemma2_residual < rows[i - 1].lemma2_residual,
                "lemma2 residual not strictly decreasing at (rho,alpha)=(" +
                    fmt(rho) + "," + fmt(alpha) + "), step n=" +
                    std::to_string(rows[i].n));
    }
  }
  return ck;
}

// ------------------------------------------------------------ criterion 7 --

Checker criterion7_asymptotic_diagnostics() {
  Checker ck;
  const auto rows =
      asymptotic_diagnostics({1000, 10000, 100000, 1000000, 10000000}, 0.05, 0.5);
  for (const auto& row : rows) {
    ck.note("n=" + std::to_string(row.n) + ": c=" + fmt(row.c) + " c^2/log n=" +
            fmt(row.c_squared_over_log_n) + " mills=" + fmt(row.mills_check) +
            " z0+cT=" + fmt(row.z0_plus_c_t) + " z0+c*sqrt(rho)T=" +
            fmt(row.z0_plus_c_root_rho_t));
    ck.expect(row.c_squared_over_log_n >= 1.0 && row.c_squared_over_log_n <= 3.0,
              "c^2/log n outside [1,3] at n=" + std::to_string(row.n));
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ck.expect(std::fabs(rows[i].z0_plus_c_t) < std::fabs(rows[i - 1].z0_plus_c_t),
              "|z0 + c T(rho)| did not decrease at n=" + std::to_string(rows[i].n) +
                  " (" + fmt(std::fabs(rows[i - 1].z0_plus_c_t)) + " -> " +
                  fmt(std::fabs(rows[i].z0_plus_c_t)) + ")");
    ck.expect(rows[i].mills_check > rows[i - 1].mills_check,
              "Mills ratio not increasing at n=" + std::to_string(rows[i].n));
  }
  ck.expect(rows.back().mills_check > 0.99,
            "Mills ratio at n=10^7 is " + fmt(rows.back().mills_check) +
                ", not above 0.99");
  return ck;
}

// ------------------------------------------------------------ criterion 8 --

Checker criterion8_mc_determinism() {
  Checker ck;
  const fs::path dir = fs::temp_directory_path();
  const fs::path f1 = dir / "fwer_acc8_s1a.csv";
  const fs::path f2 = dir / "fwer_acc8_s1b.csv";
  const fs::path f3 = dir / "fwer_acc8_s8.csv";
  const std::string base = std::string(FWER_CLI_PATH) +
                           " simulate --n 10000 --alpha 0.05 --rho 0.5 "
                           "--reps 10000 --seed 99";
  auto timed = [&ck](const std::string& cmd) {
    const auto t0 = std::chrono::steady_clock::now();
    const int rc = std::system(cmd.c_str());
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ck.expect(WEXITSTATUS(rc) == 0, "simulate exited nonzero");
    ck.expect(dt < 60.0, "simulate run took " + fmt(dt) + " s (limit 60)");
    return dt;
  };
  const double t1 = timed(base + " --streams 1 --out " + f1.string());
  timed(base + " --streams 1 --out " + f2.string());
  const double t8 = timed(base + " --streams 8 --out " + f3.string());
  ck.note("runtimes: 1 stream " + fmt(t1) + " s, 8 streams " + fmt(t8) + " s");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(f1), b = slurp(f2), c = slurp(f3);
  ck.expect(!a.empty(), "first output file is empty");
  ck.expect(a == b, "same seed, same stream count: files differ");
  ck.expect(a == c, "stream counts 1 vs 8: files differ");
  fs::remove(f1);
  fs::remove(f2);
  fs::remove(f3);
  return ck;
}

// ------------------------------------------------------------ criterion 9 --

Checker criterion9_bruteforce_equivalence() {
  Checker ck;
  const auto cfg = ModelConfig::bonferroni(10, 0.5, 0.05);
  McSpec spec;
  spec.replications = 10000;
  spec.seed = 31337;
  const auto fast = simulate_flags(cfg, spec);
  const double s_theta = std::sqrt(cfg.rho());
  const double s_z = std::sqrt(1.0 - cfg.rho());
  long long mismatches = 0;
  for (long long r = 0; r < spec.replications; ++r) {
    NormalStream stream(spec.seed, static_cast<std::uint64_t>(r));
    const double theta = s_theta * stream.next();
    bool any = false;
    for (int i = 0; i < 10; ++i)
      any = (theta + s_z * stream.next() > cfg.cutoff()) || any;
    if (fast[static_cast<std::size_t>(r)] != (any ? 1 : 0)) ++mismatches;
  }
  ck.note("replications compared: 10000, mismatches: " + std::to_string(mismatches));
  ck.expect(mismatches == 0, "optimized and brute-force paths disagree");
  return ck;
}

// ----------------------------------------------------------- criterion 10 --

Checker criterion10_special_functions() {
  Checker ck;
  int widened = 0;
  for (const auto& tc : oracle::kTailCases) {
    const double got = std_normal_tail(tc.x);
    const double ulp_floor =
        4.0 * (std::nextafter(tc.upper, 1.0) - tc.upper);
    const double tol = std::max(1e-12 * tc.upper, ulp_floor);
    if (ulp_floor > 1e-12 * tc.upper) ++widened;
    ck.expect(std::fabs(got - tc.upper) <= tol,
              "Phi(-x) at x=" + fmt(tc.x) + ": got " + fmt(got) + " want " +
                  fmt(tc.upper));
  }
  if (widened > 0)
    ck.note(std::to_string(widened) +
            " subnormal-tail rows checked at the ulp floor instead of 1e-12 "
            "(double precision cannot represent those values more tightly)");
  for (double p :
       {1e-12, 1e-8, 5e-6, 1e-4, 0.025, 0.31, 0.5, 0.77, 0.975, 1 - 1e-4,
        1 - 1e-9, 1 - 1e-12}) {
    const double q = std_normal_quantile(p);
    ck.expect(std::fabs(std_normal_cdf(q) - p) <= 1e-12 * std::max(p, 1.0 - p),
              "quantile round trip at p=" + fmt(p));
  }
  return ck;
}

const std::map<int, std::pair<const char*, std::function<Checker()>>> kCriteria = {
    {1, {"table reproduction (statistical)", criterion1_table_reproduction}},
    {2, {"endpoint identities (exact)", criterion2_endpoints}},
    {3, {"derivative gate (H', H'' vs finite differences)", criterion3_derivative_gate}},
    {4, {"convexity at n = 10^4", criterion4_convexity}},
    {5, {"bound dominance", criterion5_bound_dominance}},
    {6, {"lemma ladder monotonicity", criterion6_lemma_ladder}},
    {7, {"asymptotic diagnostics", criterion7_asymptotic_diagnostics}},
    {8, {"Monte Carlo determinism and runtime", criterion8_mc_determinism}},
    {9, {"brute-force equivalence at n = 10", criterion9_bruteforce_equivalence}},
    {10, {"special-function accuracy", criterion10_special_functions}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [num, entry] : kCriteria) selected.push_back(num);

  bool all_pass = true;
  for (const int num : selected) {
    const auto it = kCriteria.find(num);
    if (it == kCriteria.end()) {
      std::cerr << "unknown criterion " << num << "\n";
      return 2;
    }
    const Checker ck = it->second.second();
    std::cout << (ck.pass ? "[PASS]" : "[FAIL]") << " criterion " << num << " - "
              << it->second.first << "\n";
    for (const auto& line : ck.details) std::cout << "       " << line << "\n";
    all_pass = all_pass && ck.pass;
  }
  return all_pass ? 0 : 1;
}
