#pragma once

#include <functional>
#include <span>
#include <vector>

namespace levylab::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
double median(std::span<const double> x);
double quantile(std::span<const double> x, double p);

/// Kolmogorov limiting survival function Q(t) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_survival(double t);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample KS test against a continuous CDF (Stephens' small-sample correction).
KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Empirical characteristic function (real part, since the laws here are
/// symmetric) with its standard error.
struct EcfEstimate {
    double value = 0.0;
    double std_error = 0.0;
};
EcfEstimate empirical_cf(std::span<const double> samples, double u);

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std_error = 0.0;
    std::size_t points = 0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace levylab::stats
