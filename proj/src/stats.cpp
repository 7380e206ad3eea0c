#include "synlat/stats.hpp"

#include "synlat/errors.hpp"

#include <algorithm>
#include <cmath>

namespace synlat {

void RunningStats::add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

double RunningStats::variance() const noexcept {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::stddev() const noexcept { return std::sqrt(variance()); }

double RunningStats::stderr_of_mean() const noexcept {
    return n_ > 1 ? stddev() / std::sqrt(static_cast<double>(n_)) : 0.0;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::size_t first,
                 std::size_t last) {
    if (x.size() != y.size() || last > x.size() || last < first + 2)
        throw InvalidArgument("fit_line: need at least two points in range");
    const auto n = static_cast<double>(last - first);
    double sx = 0, sy = 0;
    for (std::size_t i = first; i < last; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = first; i < last; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t i = first; i < last; ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    if (n > 2 && sxx > 0) fit.slope_err = std::sqrt(ss / (n - 2) / sxx);
    return fit;
}

double ks_statistic(std::span<const double> cdf_at_sorted) {
    const auto n = static_cast<double>(cdf_at_sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < cdf_at_sorted.size(); ++i) {
        const double f = cdf_at_sorted[i];
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_critical_value(std::size_t n, double alpha) {
    if (n == 0 || alpha <= 0.0 || alpha >= 1.0) throw InvalidArgument("ks_critical_value: bad input");
    // Solve Q_KS(lambda) = alpha, Q_KS(l) = 2 sum (-1)^{j-1} exp(-2 j^2 l^2).
    auto q = [](double l) {
        double sum = 0.0;
        for (int j = 1; j <= 100; ++j) {
            const double term = std::exp(-2.0 * j * j * l * l);
            sum += (j % 2 ? 1.0 : -1.0) * term;
            if (term < 1e-17) break;
        }
        return 2.0 * sum;
    };
    double lo = 0.3, hi = 3.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (q(mid) > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

double covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("covariance: size mismatch");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double c = 0;
    for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] - mx) * (y[i] - my);
    return c / (n - 1.0);
}

} // namespace synlat
