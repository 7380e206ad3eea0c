#pragma once

// Transfer-matrix Lyapunov analysis of the disordered Lieb ladder and
// power-law fits of localization lengths against disorder strength.

#include "synlat/disorder.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace synlat {

/// Shifts entering the transfer step across rung n.
struct RungShifts {
    double a_prev = 0.0, a = 0.0; ///< A_{n-1}, A_n
    double b_prev = 0.0, b = 0.0; ///< B_{n-1}, B_n
    double e = 0.0;               ///< E_n
    double c = 0.0, d = 0.0;      ///< one-excitation sites (flat all-sites mode only)
};

inline constexpr double kDenominatorFloor = 1e-12;

/// T_n with (c_{n+1}, d_{n+1}, c_n, d_n) = T_n (c_n, d_n, c_{n-1}, d_{n-1}), obtained by
/// eliminating pair amplitudes from the eigenvalue equations at energy eps.
/// Empty if any |eps - delta| on a pair site falls below `floor`.
std::optional<Eigen::Matrix4d> rung_transfer_matrix(double eps, const RungShifts& shifts,
                                                    double floor = kDenominatorFloor);

/// log|lambda| of the clean transfer matrix, descending.
std::array<double, 4> clean_exponents(double eps);

struct TransferConfig {
    double energy = 0.0;
    DisorderParams params;
    std::int64_t n_steps = 1'000'000;
    int qr_period = 8;
    int block_qrs = 100; ///< QR steps per block for the error estimate
    std::uint64_t seed = 0;
    double denominator_floor = kDenominatorFloor;
    int retry_budget = 1000; ///< resamples allowed for a single rung

    void validate() const;
};

struct LyapunovResult {
    std::array<double, 4> exponents{}; ///< descending, per unit cell
    std::array<double, 4> stderr_{};
    double xi1 = 0.0, xi2 = 0.0;       ///< xi1 < xi2, in unit cells
    double xi1_err = 0.0, xi2_err = 0.0;
    std::int64_t n_steps = 0;
    std::int64_t resamples = 0;
    std::uint64_t seed = 0;
};

LyapunovResult lyapunov_spectrum(const TransferConfig& cfg);

struct FitOptions {
    double relative_cut = 0.25; ///< allowed local-slope deviation relative to the leading slope
    double absolute_floor = 0.25;
    int min_points = 4;
    /// Manual window [first, last) overriding the automatic cut.
    std::optional<std::pair<int, int>> window;
};

struct PowerLawFit {
    double nu = 0.0; ///< xi ~ s^-nu
    double nu_err = 0.0;
    int first = 0, last = 0;
    double residual_rms = 0.0;
};

/// Fit of log xi against log s over the automatically selected window.
PowerLawFit fit_power_law(const std::vector<double>& s, const std::vector<double>& xi, const FitOptions& opt = {});

struct ScalingFit {
    double energy = 0.0;
    DisorderMode mode = DisorderMode::positional;
    std::vector<double> s_grid;
    std::vector<LyapunovResult> runs;
    PowerLawFit fit1, fit2;
};

/// Checks the disorder grid: increasing, positive, >= min_points, and a span of
/// at least 1.5 decades (positional) or 1 decade (flat modes).
void validate_scaling_grid(const std::vector<double>& grid, DisorderMode mode, int min_points = 4);

/// One Lyapunov computation per grid point (s for positional, W for flat modes).
/// Point i of energy index e uses seed derive_seed(derive_seed(master, "localization", e), i).
std::vector<LyapunovResult> lyapunov_sweep(double energy, const std::vector<double>& grid, const TransferConfig& base,
                                           std::uint64_t master_seed, unsigned workers = 1,
                                           std::uint64_t energy_index = 0);

/// Runs one Lyapunov computation per grid point (s for positional, W for flat
/// modes) and fits both lengths. Seeds derive from (master_seed, energy index, point).
ScalingFit scaling_exponent(double energy, const std::vector<double>& grid, const TransferConfig& base,
                            std::uint64_t master_seed, unsigned workers = 1, const FitOptions& opt = {},
                            std::uint64_t energy_index = 0);

ScalingFit fit_scaling(double energy, DisorderMode mode, std::vector<double> grid, std::vector<LyapunovResult> runs,
                       const FitOptions& opt = {});

/// ScalingFit per energy for a flat mode.
std::vector<ScalingFit> flat_disorder_sweep(const std::vector<double>& energies, const std::vector<double>& w_grid,
                                            DisorderMode mode, const TransferConfig& base, std::uint64_t master_seed,
                                            unsigned workers = 1, const FitOptions& opt = {});

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

} // namespace synlat
