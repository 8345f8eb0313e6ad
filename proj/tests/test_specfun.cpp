#include <doctest.h>

#include <cmath>

#include "rigorbench/error.hpp"
#include "rigorbench/specfun.hpp"

using namespace rigorbench;

namespace {

// Hypergeometric series for I_x(a, b), all terms positive, evaluated on the
// side of the mean where it converges fastest.
long double beta_series(long double a, long double b, long double x) {
  if (x == 0) return 0;
  if (x == 1) return 1;
  if (x > (a + 1) / (a + b + 2)) return 1 - beta_series(b, a, 1 - x);
  long double term = 1;
  long double sum = 1;
  for (int n = 0; n < 2'000'000; ++n) {
    term *= x * (a + b + n) / (a + 1 + n);
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  const long double log_front =
      a * std::log(x) + b * std::log1p(-x) - std::log(a) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  return std::exp(log_front) * sum;
}

// Closed form for even degrees of freedom.
double chi2_sf_even(double x, int k) {
  double term = 1;
  double sum = 1;
  for (int j = 1; j < k / 2; ++j) {
    term *= (x / 2) / j;
    sum += term;
  }
  return std::exp(-x / 2) * sum;
}

}  // namespace

TEST_CASE("boundary values") {
  CHECK(chi2_sf(0, 6) == 1.0);
  CHECK(f_sf(0, 6, 30) == 1.0);
  CHECK(srange_sf(0, 2) == 1.0);
  CHECK(srange_sf(0, 7) == 1.0);
  CHECK(norm_cdf(0) == 0.5);
  CHECK(beta_inc(2, 3, 0) == 0.0);
  CHECK(beta_inc(2, 3, 1) == 1.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(chi2_sf(-1, 6), StatsError);
  CHECK_THROWS_AS(chi2_sf(1, 0), StatsError);
  CHECK_THROWS_AS(f_sf(-0.5, 6, 30), StatsError);
  CHECK_THROWS_AS(f_sf(1, 0.5, 30), StatsError);
  CHECK_THROWS_AS(srange_sf(1, 1), StatsError);
  CHECK_THROWS_AS(srange_sf(-1, 3), StatsError);
  CHECK_THROWS_AS(beta_inc(1, 1, 1.5), StatsError);
  CHECK_THROWS_AS(gamma_p(0, 1), StatsError);
}

TEST_CASE("chi2_sf") {
  CHECK(chi2_sf(22.458, 6) == doctest::Approx(0.001).epsilon(0.05));
  CHECK(chi2_sf(21.875, 6) == doctest::Approx(1.276e-3).epsilon(1e-3));
  for (int k : {2, 4, 6, 10, 20})
    for (double x : {0.01, 0.5, 3.0, 12.0, 40.0, 90.0}) {
      const double expected = chi2_sf_even(x, k);
      CHECK(chi2_sf(x, k) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("gamma_p + gamma_q = 1") {
  for (double a : {0.5, 1.0, 3.0, 17.5})
    for (double x : {0.1, 1.0, 5.0, 30.0}) CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm_cdf") {
  CHECK(norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(norm_sf(3.0) == doctest::Approx(1.3498980316300946e-3).epsilon(1e-12));
  CHECK(norm_cdf(-8.0) == doctest::Approx(6.220960574271785e-16).epsilon(1e-10));
}

TEST_CASE("f_sf agrees with the incomplete-beta series on a 50-point grid") {
  const double d1s[] = {1, 2, 6, 10, 25};
  const double d2s[] = {3, 30};
  const double fs[] = {0.05, 0.7, 2.0, 7.743, 20.0};
  int points = 0;
  for (double d1 : d1s)
    for (double d2 : d2s)
      for (double f : fs) {
        const long double y = d2 / (d2 + d1 * static_cast<long double>(f));
        const double expected = static_cast<double>(beta_series(d2 / 2.0L, d1 / 2.0L, y));
        REQUIRE(expected > 1e-12);
        CHECK(std::abs(f_sf(f, d1, d2) - expected) <= 1e-10 * expected);
        ++points;
      }
  CHECK(points == 50);
  CHECK(f_sf(7.743362831858404, 6, 30) == doctest::Approx(4.376e-5).epsilon(1e-3));
}

TEST_CASE("beta_inc symmetry") {
  for (double x : {0.01, 0.3, 0.5, 0.77, 0.999})
    CHECK(beta_inc(2.5, 7.0, x) + beta_inc(7.0, 2.5, 1 - x) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("srange_sf for two groups is the two-sided normal tail") {
  for (double q : {0.1, 0.8, 1.5, 2.7718, 4.0, 6.0})
    CHECK(std::abs(srange_sf(q, 2) - std::erfc(q / 2)) <= 1e-9);
  CHECK(srange_sf(1.959963984540054 * std::sqrt(2.0), 2) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("srange_sf matches tabulated critical values") {
  // Upper 5% and 1% points of the studentized range, infinite df.
  CHECK(srange_sf(3.314, 3) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(srange_sf(3.633, 4) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(srange_sf(4.170, 7) == doctest::Approx(0.05).epsilon(0.04));
  CHECK(srange_sf(4.474, 10) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(srange_sf(4.882, 7) == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("srange_sf monotonicity") {
  for (int k = 2; k <= 12; ++k) {
    double prev = 1.0;
    for (double q = 0.0; q <= 8.0; q += 0.25) {
      const double p = srange_sf(q, k);
      CHECK(p <= prev + 1e-12);
      CHECK(p >= 0.0);
      if (k > 2) CHECK(p >= srange_sf(q, k - 1) - 1e-12);
      prev = p;
    }
  }
}
