#include "fwer/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "fwer/bounds.hpp"
#include "fwer/normal.hpp"

namespace fwer {

namespace {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

struct PhiloxBlock {
  std::uint32_t v[4];
};

inline PhiloxBlock philox4x32(std::uint64_t counter, std::uint64_t stream,
                              std::uint64_t key) {
  std::uint32_t c0 = static_cast<std::uint32_t>(counter);
  std::uint32_t c1 = static_cast<std::uint32_t>(counter >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(stream);
  std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {{c0, c1, c2, c3}};
}

// 53-bit uniform strictly inside (0,1).
inline double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

struct RepDraws {
  double theta_std;  // N(0,1) variate behind theta
  double max_std;    // max of the n N(0,1) variates behind the Z's
};

// One replication: first draw feeds theta, the next n feed Z_1..Z_n. All n
// draws are consumed even though only the running max is kept, so the
// optimized path stays draw-for-draw identical to materializing the vector.
inline RepDraws run_replication(std::uint64_t seed, std::uint64_t replication,
                                std::int64_t n) {
  NormalStream stream(seed, replication);
  RepDraws out;
  out.theta_std = stream.next();
  double mx = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < n; ++i) mx = std::max(mx, stream.next());
  out.max_std = mx;
  return out;
}

McEstimate make_estimate(long long exceed_count, const McSpec& spec) {
  McEstimate est;
  est.replications = spec.replications;
  est.seed = spec.seed;
  const double r = static_cast<double>(spec.replications);
  est.fwer_hat = static_cast<double>(exceed_count) / r;
  est.std_error = std::sqrt(est.fwer_hat * (1.0 - est.fwer_hat) / r);
  if (exceed_count == 0) {
    est.ci95_low = 0.0;
    est.ci95_high = std::min(1.0, 3.0 / r);  // rule of three
  } else if (exceed_count == spec.replications) {
    est.ci95_low = std::max(0.0, 1.0 - 3.0 / r);
    est.ci95_high = 1.0;
  } else {
    const double z = std_normal_quantile(0.975);
    est.ci95_low = std::max(0.0, est.fwer_hat - z * est.std_error);
    est.ci95_high = std::min(1.0, est.fwer_hat + z * est.std_error);
  }
  return est;
}

// Runs fn(replication_index) over [0, replications) on the requested number
// of workers; fn must only touch worker-local state.
template <typename PerRep>
void for_each_replication(const McSpec& spec, PerRep fn) {
  const long long total = spec.replications;
  const int workers =
      static_cast<int>(std::min<long long>(spec.parallel_streams, total));
  if (workers <= 1) {
    for (long long r = 0; r < total; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const long long lo = total * w / workers;
    const long long hi = total * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (long long r = lo; r < hi; ++r) fn(r);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

void McSpec::validate() const {
  if (replications < 1)
    throw std::invalid_argument("McSpec: replications must be positive");
  if (parallel_streams < 1)
    throw std::invalid_argument("McSpec: parallel_streams must be positive");
}

double NormalStream::next() {
  if (has_pending_) {
    has_pending_ = false;
    return pending_;
  }
  const PhiloxBlock b = philox4x32(block_++, replication_, seed_);
  const std::uint64_t u0 =
      static_cast<std::uint64_t>(b.v[0]) | (static_cast<std::uint64_t>(b.v[1]) << 32);
  const std::uint64_t u1 =
      static_cast<std::uint64_t>(b.v[2]) | (static_cast<std::uint64_t>(b.v[3]) << 32);
  pending_ = std_normal_quantile_fast(to_unit_open(u1));
  has_pending_ = true;
  return std_normal_quantile_fast(to_unit_open(u0));
}

McEstimate simulate_fwer(const ModelConfig& config, const McSpec& spec) {
  spec.validate();
  const double c = config.cutoff();
  const double s_theta = std::sqrt(config.rho());
  const double s_z = std::sqrt(1.0 - config.rho());
  const std::int64_t n = config.n();

  // Exceedance counts are accumulated per replication into a plain array so
  // the reduction order (a straight sum) cannot depend on scheduling.
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(spec.replications));
  for_each_replication(spec, [&](long long r) {
    const RepDraws d = run_replication(
        spec.seed, spec.replication_offset + static_cast<std::uint64_t>(r), n);
    flags[static_cast<std::size_t>(r)] =
        s_theta * d.theta_std + s_z * d.max_std > c ? 1 : 0;
  });
  long long count = 0;
  for (const std::uint8_t f : flags) count += f;
  return make_estimate(count, spec);
}

std::vector<std::uint8_t> simulate_flags(const ModelConfig& config, const McSpec& spec) {
  spec.validate();
  const double c = config.cutoff();
  const double s_theta = std::sqrt(config.rho());
  const double s_z = std::sqrt(1.0 - config.rho());
  std::vector<std::uint8_t> flags(static_cast<std::size_t>(spec.replications));
  for (long long r = 0; r < spec.replications; ++r) {
    const RepDraws d = run_replication(
        spec.seed, spec.replication_offset + static_cast<std::uint64_t>(r), config.n());
    flags[static_cast<std::size_t>(r)] =
        s_theta * d.theta_std + s_z * d.max_std > c ? 1 : 0;
  }
  return flags;
}

std::vector<MaxCdfPoint> max_statistic_sample(const ModelConfig& config,
                                              const McSpec& spec,
                                              const std::vector<double>& thresholds) {
  spec.validate();
  const double s_theta = std::sqrt(config.rho());
  const double s_z = std::sqrt(1.0 - config.rho());
  std::vector<double> maxima(static_cast<std::size_t>(spec.replications));
  for_each_replication(spec, [&](long long r) {
    const RepDraws d = run_replication(
        spec.seed, spec.replication_offset + static_cast<std::uint64_t>(r), config.n());
    maxima[static_cast<std::size_t>(r)] = s_theta * d.theta_std + s_z * d.max_std;
  });
  std::vector<MaxCdfPoint> out;
  out.reserve(thresholds.size());
  for (const double thr : thresholds) {
    long long count = 0;
    for (const double m : maxima) count += m <= thr ? 1 : 0;
    out.push_back({thr, static_cast<double>(count) /
                            static_cast<double>(spec.replications),
                   count});
  }
  return out;
}

std::vector<Table1Row> reproduce_table1(std::uint64_t seed, long long replications,
                                        int parallel_streams,
                                        const QuadratureSpec& quad_spec) {
  std::vector<Table1Row> rows;
  rows.reserve(36);
  std::uint64_t cell = 0;
  for (const double rho : kTable1Rhos) {
    for (const double alpha : kTable1Alphas) {
      Table1Row row;
      row.rho = rho;
      row.alpha = alpha;
      try {
        const ModelConfig config = ModelConfig::bonferroni(kTable1N, rho, alpha);
        McSpec spec;
        spec.replications = replications;
        spec.seed = seed;
        spec.parallel_streams = parallel_streams;
        spec.replication_offset = cell * static_cast<std::uint64_t>(replications);
        const McEstimate est = simulate_fwer(config, spec);
        const ExactResult exact = h_exact(config, quad_spec);
        row.fwer_hat = est.fwer_hat;
        row.std_error = est.std_error;
        row.fwer_exact = exact.fwer;
        row.bound_asymptotic = asymptotic_bound(rho, alpha);
        row.line_bound = line_bound(rho, kTable1N, config.alpha_n());
        row.within_asymptotic = est.fwer_hat <= row.bound_asymptotic;
        const double se_exact = std::sqrt(exact.fwer * (1.0 - exact.fwer) /
                                          static_cast<double>(replications));
        row.within_4se_exact =
            std::fabs(est.fwer_hat - exact.fwer) <= 4.0 * se_exact;
        row.ok = exact.converged;
      } catch (const std::exception&) {
        row.fwer_hat = row.fwer_exact = std::numeric_limits<double>::quiet_NaN();
        row.ok = false;
      }
      rows.push_back(row);
      ++cell;
    }
  }
  return rows;
}

}  // namespace fwer
