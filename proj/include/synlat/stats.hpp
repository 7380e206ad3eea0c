#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace synlat {

/// Welford running mean/variance.
class RunningStats {
public:
    void add(double x) noexcept;
    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept; // unbiased
    double stddev() const noexcept;
    double stderr_of_mean() const noexcept;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_err = 0.0;
    double residual_rms = 0.0;
};

/// Unweighted least squares y = intercept + slope * x over [first, last).
LineFit fit_line(std::span<const double> x, std::span<const double> y, std::size_t first,
                 std::size_t last);

/// Two-sided one-sample Kolmogorov-Smirnov statistic. `cdf_at_sorted[i]` is the
/// model CDF evaluated at the i-th smallest sample.
double ks_statistic(std::span<const double> cdf_at_sorted);

/// Asymptotic critical value of the KS statistic at significance `alpha`
/// (Kolmogorov distribution), for sample size n.
double ks_critical_value(std::size_t n, double alpha);

/// Sample covariance of two equally long series.
double covariance(std::span<const double> x, std::span<const double> y);

} // namespace synlat
