#pragma once

// Distribution functions used by the rank tests. Domain violations throw
// StatsError.

namespace rigorbench {

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta function I_x(a, b).
double beta_inc(double a, double b, double x);

double norm_cdf(double z);
double norm_sf(double z);

// Upper tail of the chi-squared distribution with k degrees of freedom.
double chi2_sf(double x, double k);

// Upper tail of the F distribution with (d1, d2) degrees of freedom.
double f_sf(double f, double d1, double d2);

// P(Q > q) for the studentized range of k standard normal variates with
// infinite degrees of freedom.
double srange_sf(double q, int k);

}  // namespace rigorbench
