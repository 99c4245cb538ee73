#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "fwer/normal.hpp"
#include "fixtures/oracle_tables.h"

using namespace fwer;

namespace {

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::fabs(want);
}

}  // namespace

TEST_CASE("pdf: value, symmetry, peak") {
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(rel_err(std_normal_pdf(3.0), oracle::kPdfAt3) < 1e-14);
  for (double x : {0.3, 1.7, 4.4, 9.9, 21.0, 36.5}) {
    CHECK(std_normal_pdf(x) == std_normal_pdf(-x));
    CHECK(std_normal_pdf(x) > 0.0);
  }
  CHECK(std_normal_pdf(std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("cdf tail: oracle table over [0, 38]") {
  for (const auto& tc : oracle::kTailCases) {
    const double got = std_normal_tail(tc.x);
    // For subnormal tail masses no double can sit within 1e-12 of the truth;
    // the tolerance widens to a few ulps exactly there and nowhere else.
    const double ulp_floor =
        4.0 * std::nextafter(tc.upper, DBL_MAX) - 4.0 * tc.upper;
    const double tol = std::max(1e-12 * tc.upper, ulp_floor);
    CHECK_MESSAGE(std::fabs(got - tc.upper) <= tol,
                  "x=", tc.x, " got=", got, " want=", tc.upper);
    CHECK(std_normal_cdf(-tc.x) == got);
  }
}

TEST_CASE("cdf: named examples and complement identity") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(rel_err(std_normal_cdf(-8.0), oracle::kCdfAtMinus8) < 1e-13);
  // the 10-digit argument is itself a rounded quantile, so 0.975 holds to ~3e-11
  CHECK(std_normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-9));
  for (double x = -38.0; x <= 38.0; x += 0.375) {
    CHECK(std::fabs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-15);
    if (x > -37.0) CHECK(std_normal_cdf(x) <= std_normal_cdf(x + 0.375));
  }
}

TEST_CASE("log cdf: oracle rows, agreement with cdf, limits") {
  for (const auto& tc : oracle::kTailCases) {
    const double got = log_std_normal_cdf(-tc.x);
    CHECK_MESSAGE(std::fabs(got - tc.log_upper) <= 1e-12 * std::max(1.0, std::fabs(tc.log_upper)),
                  "x=", -tc.x, " got=", got, " want=", tc.log_upper);
  }
  CHECK(log_std_normal_cdf(0.0) ==
        doctest::Approx(-0.6931471805599453).epsilon(1e-15));
  CHECK(std::fabs(log_std_normal_cdf(-10.0) - oracle::kLogCdfAtMinus10) < 1e-12 * 53.0);
  for (double x = -37.0; x <= 8.0; x += 0.61) {
    const double cdf = std_normal_cdf(x);
    CHECK(rel_err(std::exp(log_std_normal_cdf(x)), cdf) < 1e-12);
  }
  // approaches 0 from below; at x = 37 the value is still representable,
  // by x = 40 it has underflowed to -0
  CHECK(log_std_normal_cdf(37.0) < 0.0);
  CHECK(log_std_normal_cdf(37.0) > -1e-297);
  CHECK(log_std_normal_cdf(40.0) <= 0.0);
  CHECK(log_std_normal_cdf(40.0) > -1e-300);
}

TEST_CASE("quantile: round trips and oracle points") {
  for (const auto& qc : oracle::kQuantileCases) {
    CHECK_MESSAGE(std::fabs(std_normal_quantile(qc.p) - qc.z) <=
                      1e-13 * std::max(1.0, std::fabs(qc.z)),
                  "p=", qc.p);
  }
  CHECK(std_normal_quantile(0.5) == 0.0);
  // contract: |Phi(quantile(p)) - p| <= 1e-12 max(p, 1-p)
  for (double p : {1e-12, 1e-9, 5e-6, 1e-4, 0.025, 0.31, 0.5, 0.77, 0.975,
                   1 - 1e-4, 1 - 1e-9}) {
    const double q = std_normal_quantile(p);
    CHECK(std::fabs(std_normal_cdf(q) - p) <= 1e-12 * std::max(p, 1.0 - p));
  }
  for (int k = -3; k <= 3; ++k) {
    const double x = static_cast<double>(k);
    CHECK(std_normal_quantile(std_normal_cdf(x)) == doctest::Approx(x).epsilon(1e-12));
  }
  CHECK(std_normal_quantile(1.0 - 0.05 / 10000.0) ==
        doctest::Approx(oracle::kCutoffAlpha05n1e4).epsilon(1e-12));
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(-0.3), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.7), std::domain_error);
}

TEST_CASE("quantile_fast agrees with the polished quantile") {
  for (double p = 1e-9; p < 1.0; p = p * 1.9 + 1e-9) {
    CHECK(std::fabs(std_normal_quantile_fast(p) - std_normal_quantile(p)) <=
          2e-14 * (1.0 + std::fabs(std_normal_quantile(p))));
  }
}

TEST_CASE("mills ratio check: values, monotone, bounded by one") {
  CHECK(rel_err(mills_ratio_check(1.0), oracle::kMillsCheckAt1) < 1e-13);
  CHECK(rel_err(mills_ratio_check(10.0), oracle::kMillsCheckAt10) < 1e-13);
  double prev = 0.0;
  for (double x = 1.0; x <= 30.0; x += 0.25) {
    const double m = mills_ratio_check(x);
    CHECK(m < 1.0);
    CHECK(m > prev);
    prev = m;
  }
  CHECK(mills_ratio_check(1e6) > 1.0 - 1e-11);
  CHECK_THROWS_AS(mills_ratio_check(0.0), std::domain_error);
  CHECK_THROWS_AS(mills_ratio_check(-2.0), std::domain_error);
}
