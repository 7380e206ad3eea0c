#pragma once

// Positional disorder of trapped atoms, the pair-energy shifts it induces, the
// corresponding analytic densities, and flat (box) disorder.
// Lengths in units of R0, energies in units of Omega unless stated otherwise.

#include "synlat/lattice.hpp"
#include "synlat/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>
#include <vector>

namespace synlat {

enum class DisorderMode { positional, flat_pair_only, flat_all_sites };

std::string_view to_string(DisorderMode mode);
DisorderMode disorder_mode_from_string(std::string_view name);

struct DisorderParams {
    double s = 0.0;               ///< sigma / R0
    int alpha = 3;                ///< interaction exponent, 3 or 6
    double v0_over_omega = 300.0; ///< V(R0) / Omega
    DisorderMode mode = DisorderMode::positional;
    double w = 0.0;               ///< box width for the flat modes
    bool linearized = false;      ///< first-order shift instead of V(d) - V(R0)

    void validate() const;
};

using Displacements = std::vector<Eigen::Vector3d>;

/// Coincident-atom guard: realizations with a bond shorter than this are resampled.
inline constexpr double kMinBondLength = 1e-6;

// ---- trap width ----------------------------------------------------------

struct TrapSigma {
    double exact = 0.0;         ///< thermal harmonic-oscillator width
    double semiclassical = 0.0; ///< sqrt(kB T / m w^2)
};

/// SI inputs (K, rad/s, kg); result in metres.
TrapSigma trap_sigma(double temperature, double trap_frequency, double mass);

// ---- sampling ------------------------------------------------------------

/// i.i.d. isotropic Gaussian displacements, std `s` per component.
Displacements sample_positions(std::size_t n_sites, double s, Rng& rng);
Displacements sample_positions(std::size_t n_sites, double s, std::uint64_t seed);

/// Shift of one bond of realized length d (units of Omega).
double bond_shift(double d, const DisorderParams& params);

/// Per-pair-slot shifts of a finite lattice in the ordering used by
/// finite_hamiltonian (bond species major, then cell). `displacements` follows
/// RealLattice::sites(). Dangling bonds under open boundaries get 0.
std::vector<double> energy_shifts(const Displacements& displacements, const RealLattice& lattice,
                                  const DisorderParams& params);

/// i.i.d. uniform values on [-W/2, W/2].
std::vector<double> sample_flat_disorder(const DisorderParams& params, std::size_t n_sites, Rng& rng);

// ---- ladder realizations ---------------------------------------------------

/// Ideal atom positions of a length-L ladder. Atom u_n has index n, l_n index L + n.
std::vector<Eigen::Vector3d> ladder_atom_positions(int length);

/// Ladder shifts from atom displacements (ladder atom ordering).
LadderShifts ladder_shifts_from_displacements(int length, const Displacements& displacements,
                                              const DisorderParams& params);

struct LadderRealization {
    Displacements displacements; ///< empty for flat modes
    LadderShifts shifts;
    std::uint64_t seed = 0;
    int resamples = 0;
};

LadderRealization sample_ladder_realization(int length, const DisorderParams& params, std::uint64_t seed);

// ---- analytic densities --------------------------------------------------

/// Density of the 3D distance between two neighbouring atoms.
double pdf_distance(double d, double s);
double cdf_distance(double d, double s);

/// Density of dv = dV / V0 = d^-alpha - 1 on (-1, inf).
double pdf_energy_shift(double dv, double s, int alpha);
double cdf_energy_shift(double dv, double s, int alpha);

/// Large-dv power-law asymptote of pdf_energy_shift.
double pdf_energy_shift_tail(double dv, double s, int alpha);

struct TailProbability {
    double threshold = 0.0;   ///< (2 s^2)^-alpha
    double closed_form = 0.0; ///< 4 s^3 / (3 sqrt(pi)) exp(-1/(4 s^2))
    double quadrature = 0.0;  ///< numerical integral of the density above threshold
    bool valid = false;       ///< threshold >> 1
};

TailProbability tail_probability(double s, int alpha);

// ---- chain statistics ----------------------------------------------------

/// Covariance of nearest-neighbour distance deviations along a straight chain
/// of `n_atoms` atoms, with element-wise standard errors.
struct DistanceCovariance {
    Eigen::MatrixXd cov;
    Eigen::MatrixXd stderr_;
};

DistanceCovariance distance_covariance(int n_atoms, double s, std::size_t samples, Rng& rng);

struct MeanDistanceVariance {
    double theory = 0.0;            ///< 2 s^2 / L^2
    double monte_carlo = 0.0;
    double mc_stderr = 0.0;
    double independent_theory = 0.0; ///< 2 s^2 / L, i.i.d. distance control
    double independent_mc = 0.0;
    double independent_stderr = 0.0;
};

/// Variance of the mean of L consecutive distances (L + 1 atoms).
MeanDistanceVariance mean_distance_variance(int length, double s, std::size_t samples, Rng& rng);

/// Sample variance of a series and the standard error of that estimate.
std::pair<double, double> variance_with_error(const std::vector<double>& x);

} // namespace synlat
