#pragma once

#include <cstdint>
#include <vector>

#include "fwer/exact.hpp"
#include "fwer/model.hpp"
#include "fwer/quadrature.hpp"

// Monte Carlo estimation of the FWER by direct simulation of the
// exchangeable form X_k = theta + Z_k. Every replication draws from its own
// counter-based substream keyed by (seed, replication index), so aggregate
// results are bit-identical for any worker count.

namespace fwer {

struct McSpec {
  long long replications = 10000;
  std::uint64_t seed = 1;
  int parallel_streams = 1;
  // Base replication index; lets independent experiments share one seed by
  // occupying disjoint substream ranges.
  std::uint64_t replication_offset = 0;

  void validate() const;  // throws std::invalid_argument
};

struct McEstimate {
  double fwer_hat = 0.0;
  long long replications = 0;
  double std_error = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::uint64_t seed = 0;
};

// Deterministic N(0,1) stream for one replication: Philox4x32-10 blocks
// keyed by (seed, replication), mapped through the inverse cdf.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t replication)
      : seed_(seed), replication_(replication) {}
  double next();

 private:
  std::uint64_t seed_;
  std::uint64_t replication_;
  std::uint64_t block_ = 0;
  double pending_ = 0.0;
  bool has_pending_ = false;
};

// Per replication: theta ~ N(0, rho), then n iid N(0, 1-rho) draws; a
// family-wise error is flagged when theta + max_i Z_i exceeds the cutoff.
McEstimate simulate_fwer(const ModelConfig& config, const McSpec& spec);

// Exceedance flags replication by replication (single-threaded reference
// path used by the equivalence tests).
std::vector<std::uint8_t> simulate_flags(const ModelConfig& config, const McSpec& spec);

struct MaxCdfPoint {
  double threshold = 0.0;
  double cdf_hat = 0.0;   // empirical P(max_i X_i <= threshold)
  long long count = 0;
};

std::vector<MaxCdfPoint> max_statistic_sample(const ModelConfig& config,
                                              const McSpec& spec,
                                              const std::vector<double>& thresholds);

struct Table1Row {
  double rho = 0.0;
  double alpha = 0.0;
  double fwer_hat = 0.0;
  double std_error = 0.0;
  double fwer_exact = 0.0;
  double bound_asymptotic = 0.0;  // alpha (1 - rho)
  double line_bound = 0.0;
  bool within_asymptotic = false;      // fwer_hat <= alpha (1 - rho)
  bool within_4se_exact = false;       // |fwer_hat - fwer_exact| <= 4 se_exact
  bool ok = false;                     // cell evaluated and quadrature converged
};

// The 36-cell reference grid: n = 10^4, rho in {0, .1, .3, .5, .7, .9},
// alpha in {.01, .05, .1, .4, .6, .7}. Each cell uses a disjoint substream
// range of the given seed; per-cell failures are marked, not propagated.
std::vector<Table1Row> reproduce_table1(std::uint64_t seed, long long replications,
                                        int parallel_streams,
                                        const QuadratureSpec& quad_spec = {});

inline constexpr double kTable1Rhos[] = {0.0, 0.1, 0.3, 0.5, 0.7, 0.9};
inline constexpr double kTable1Alphas[] = {0.01, 0.05, 0.1, 0.4, 0.6, 0.7};
inline constexpr std::int64_t kTable1N = 10000;

}  // namespace fwer
